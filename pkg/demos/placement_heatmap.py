"""Map the whole design space, not just single points.

Classifies a grid of (generation rate, processing time) combinations into
the cheapest viable placement and prints it as text; with matplotlib
installed it also saves placement_heatmap.png next to this script.
"""

from pathlib import Path

from tierplan.analytic import (
    GridSpec,
    REFERENCE_MARKERS,
    classify_at,
    heatmap,
    reference_family,
)
from tierplan.topology import DEFAULT_WORKLOAD

GLYPH = {"endpoint": ".", "edge": "e", "cloud": "C", "not-viable": "#"}


def main() -> None:
    family = reference_family()
    spec = GridSpec(rate_max=10.0, proc_max=0.5, rate_steps=21, proc_steps=21)
    grid = heatmap(spec, DEFAULT_WORKLOAD, family)

    print("placement per (rate, processing time); rate grows to the right,")
    print("processing time grows downward")
    legend = "  ".join(f"{glyph} {label}" for label, glyph in GLYPH.items())
    print(legend + "\n")
    for proc, row in zip(grid.proc_times, grid.cells):
        print(f"{proc:6.3f}s  " + " ".join(GLYPH[cell] for cell in row))
    print("         " + " ".join(f"{r:g}"[:1] for r in grid.rates) + "  (Hz)")

    print("\nreference points:")
    for label, rate, proc in REFERENCE_MARKERS:
        cls = classify_at(DEFAULT_WORKLOAD, family, rate, proc)
        print(f"  {label}: rate {rate:g} Hz, {proc:g} s -> {cls}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed, skipping the PNG")
        return

    order = ["endpoint", "edge", "cloud", "not-viable"]
    numeric = [[order.index(cell) for cell in row] for row in grid.cells]
    fig, ax = plt.subplots(figsize=(7, 5))
    mesh = ax.pcolormesh(grid.rates, grid.proc_times, numeric,
                         cmap="viridis", vmin=0, vmax=3, shading="nearest")
    bar = fig.colorbar(mesh, ticks=range(4))
    bar.ax.set_yticklabels(order)
    for label, rate, proc in REFERENCE_MARKERS:
        ax.plot(rate, proc, "r*", markersize=14)
        ax.annotate(label, (rate, proc), textcoords="offset points", xytext=(8, 4), color="red")
    ax.set_xlabel("generation rate (elements/s)")
    ax.set_ylabel("processing time per element (s)")
    ax.set_title("cheapest viable placement")
    out = Path(__file__).with_name("placement_heatmap.png")
    fig.savefig(out, dpi=120, bbox_inches="tight")
    print(f"\nwrote {out}")


if __name__ == "__main__":
    main()

"""End-to-end acceptance checks.

One test per numbered claim the package makes about itself; each prints an
explicit pass line with the values it verified.  Tolerances are part of the
claims: analytic results are checked to 1e-9 (exact up to float rounding),
simulation results to the stated percentage or millisecond windows.
"""

from __future__ import annotations

import math
import statistics
import subprocess
import sys
import time
from pathlib import Path

import pytest

from tierplan.analytic import (
    classify_at,
    local_viability,
    offload_viability,
    reference_family,
    system_load,
    REFERENCE_MARKERS,
)
from tierplan.config import check_config, load_preset, parse_config
from tierplan.simulator import SimParams, simulate
from tierplan.topology import (
    DEFAULT_WORKLOAD,
    Device,
    Link,
    build_topology,
    local_topology,
)

EXACT = 1e-9

ENDPOINT = Device("endpoint-0", "endpoint", cores=1, quota=0.5, role="source")
SMALL_EDGE = Device("edge-0", "edge", cores=2, quota=0.75, role="worker")
CLOUD_WORKER = Device("cloud-0", "cloud", cores=4, quota=1.0, role="worker")
LINK = Link(("edge", "endpoint"), 7.5, 1.0, 8.0)


def edge_small_variant(workers: int, endpoints: int) -> str:
    return (
        "[infrastructure]\n"
        f"devices_per_tier = 0,{workers},{endpoints}\n"
        "cores_per_device = 0,2,1\n"
        "quota_per_cpu = 0,0.75,0.5\n"
        "edge_to_endpoint = 7.5,1\n"
        "edge_to_endpoint = 8\n"
    )


def cloud_variant(workers: int, endpoints: int) -> str:
    return (
        "[infrastructure]\n"
        f"devices_per_tier = {workers},0,{endpoints}\n"
        "cores_per_device = 4,0,1\n"
        "quota_per_cpu = 1.0,0,0.5\n"
        "cloud_to_endpoint = 45,5\n"
        "cloud_to_endpoint = 8\n"
    )


def test_criterion_1_local_endpoint_verdict():
    """A half-quota single-core endpoint fails its own 5 Hz stream at 110%."""
    start = time.perf_counter()
    verdict = local_viability(DEFAULT_WORKLOAD, ENDPOINT)
    elapsed = time.perf_counter() - start
    assert not verdict.viable
    assert verdict.failed_conditions == ("worker-capacity",)
    assert math.isclose(verdict.load_percent, 110.0, abs_tol=EXACT)
    assert elapsed < 0.001
    print(f"\ncriterion 1 ok: local load {verdict.load_percent:.10f}% non-viable "
          f"in {elapsed * 1e6:.0f} us")


def test_criterion_2_offload_verdict():
    """Two endpoints per small edge worker fit at 93.3333% with 2.7 Mbit/s."""
    verdict = offload_viability(DEFAULT_WORKLOAD, ENDPOINT, SMALL_EDGE, 2, LINK)
    assert verdict.viable
    assert round(verdict.load_percent, 4) == 93.3333
    pre = next(c for c in verdict.checks if c.name == "preprocess-capacity")
    assert round(system_load(pre.demand, pre.capacity), 4) == 1.0
    assert round(verdict.required_bandwidth, 4) == 2.7
    assert verdict.required_bandwidth <= 8.0
    print(f"\ncriterion 2 ok: offload load {verdict.load_percent:.4f}%, "
          f"preprocess 1%, {verdict.required_bandwidth:.4g} Mbit/s <= 8")


SWEEP = [
    # (label, target device, endpoints per worker, exact expected load)
    ("edge-small E=1", SMALL_EDGE, 1, 140.0 / 3.0),
    ("edge-small E=2", SMALL_EDGE, 2, 280.0 / 3.0),
    ("edge-small E=4", SMALL_EDGE, 4, 560.0 / 3.0),
    ("cloud E=4", CLOUD_WORKER, 4, 70.0),
    ("cloud E=8", CLOUD_WORKER, 8, 140.0),
]


def test_criterion_3_cardinality_sweep():
    """Analytic loads across aggregation cardinalities, exact arithmetic."""
    results = []
    for label, target, endpoints, expected in SWEEP:
        load = offload_viability(DEFAULT_WORKLOAD, ENDPOINT, target, endpoints, LINK).load_percent
        assert math.isclose(load, expected, abs_tol=EXACT), label
        results.append(f"{label} {load:.1f}%")
    local = local_viability(DEFAULT_WORKLOAD, ENDPOINT).load_percent
    assert math.isclose(local, 110.0, abs_tol=EXACT)
    # the stability split matches the qualitative capacity claims
    assert 280.0 / 3.0 <= 100.0 < 560.0 / 3.0
    assert 70.0 <= 100.0 < 140.0
    print("\ncriterion 3 ok: " + ", ".join(results) + f", endpoint-only {local:.1f}%")


# scenario name -> (topology, analytic load, duration for ~2000 elements)
def _criterion_4_scenarios():
    return {
        "edge-small E=1": (build_topology(parse_config(edge_small_variant(10, 10))), 140.0 / 3.0, 40.0),
        "edge-small E=2": (build_topology(load_preset("edge-small")), 280.0 / 3.0, 20.0),
        "cloud E=4": (build_topology(load_preset("cloud")), 70.0, 10.0),
        "edge-small E=4": (build_topology(parse_config(edge_small_variant(5, 20))), 560.0 / 3.0, 20.0),
        "cloud E=8": (build_topology(parse_config(cloud_variant(5, 40))), 140.0, 10.0),
        "endpoint-only": (local_topology(10), 110.0, 40.0),
    }


def test_criterion_4_simulator_matches_the_analytic_loads():
    """2,000-element runs: stable scenarios within one percentage point,
    overloaded scenarios strictly accumulate backlog."""
    lines = []
    for name, (topo, analytic, duration) in _criterion_4_scenarios().items():
        start = time.perf_counter()
        report = simulate(topo, DEFAULT_WORKLOAD, SimParams(duration=duration, seed=42))
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, name
        assert report.generated >= 2000, name
        if analytic <= 100.0:
            for worker_id, load in report.worker_load_percent.items():
                assert abs(load - analytic) <= 1.0, (name, worker_id, load)
            mean = statistics.fmean(report.worker_load_percent.values())
            lines.append(f"{name} measured {mean:.2f}% vs {analytic:.2f}%")
        else:
            assert report.backlog > report.backlog_at_warmup, name
            lines.append(f"{name} backlog {report.backlog_at_warmup} -> {report.backlog}")
    print("\ncriterion 4 ok: " + "; ".join(lines))


def test_criterion_5_latency_breakdown_across_presets():
    """Mean total latency orders the presets; the cloud-vs-edge-large
    communication gap is the 15 ms propagation difference, within 2 ms."""
    start = time.perf_counter()
    totals: dict[str, float] = {}
    comms: dict[str, float] = {}
    for name in ("cloud", "edge-large", "edge-small", "mist"):
        topo = build_topology(load_preset(name))
        runs = [simulate(topo, DEFAULT_WORKLOAD, SimParams(duration=40.0, seed=seed))
                for seed in (42, 43, 44)]
        totals[name] = statistics.fmean(r.latency_mean_s for r in runs)
        comms[name] = statistics.fmean(r.communication_mean_s for r in runs)
    elapsed = time.perf_counter() - start

    assert totals["edge-large"] < totals["cloud"]
    assert totals["mist"] > totals["edge-small"] > totals["edge-large"]
    gap_ms = (comms["cloud"] - comms["edge-large"]) * 1000.0
    assert gap_ms == pytest.approx(15.0, abs=2.0)
    assert elapsed < 30.0
    ordered = ", ".join(f"{k} {v * 1000:.1f} ms" for k, v in sorted(totals.items(), key=lambda kv: kv[1]))
    print(f"\ncriterion 5 ok: {ordered}; communication gap {gap_ms:.2f} ms")


def test_criterion_6_heatmap_markers():
    """Example point A is beyond local processing; point B lands on the edge."""
    family = reference_family()
    classes = {label: classify_at(DEFAULT_WORKLOAD, family, rate, proc)
               for label, rate, proc in REFERENCE_MARKERS}
    assert classes["A"] != "endpoint"
    assert classes["B"] == "edge"
    print(f"\ncriterion 6 ok: marker classes {classes}")


def test_criterion_7_property_suites_fit_the_budget():
    """The randomized invariant suite passes in under a minute."""
    suite = Path(__file__).with_name("test_properties.py")
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", str(suite), "-q", "-p", "no:cacheprovider"],
        capture_output=True, text=True, timeout=120,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < 60.0
    print(f"\ncriterion 7 ok: property suite green in {elapsed:.1f} s")


def test_criterion_8_reference_config_and_presets(full_config_text):
    """The full reference config parses with exactly the three emulation
    warnings, and all four presets build working topologies."""
    config, diags = check_config(full_config_text)
    assert config is not None
    assert [d for d in diags if d.severity == "error"] == []
    assert {d.key for d in diags if d.severity == "warning"} == {
        "hypervisor", "thread_pinning", "machine_address",
    }
    built = []
    for name in ("cloud", "edge-large", "edge-small", "mist"):
        topo = build_topology(load_preset(name))
        assert topo.workers and topo.sources
        built.append(f"{name} ({len(topo.devices)} devices)")
    print("\ncriterion 8 ok: reference config warnings only; " + ", ".join(built))

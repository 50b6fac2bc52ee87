"""Command-line interface.

Subcommands: validate, predict, heatmap, simulate, compare.  Exit codes:
0 success, 2 argument errors, 3 configuration errors, 4 I/O errors.  Every
machine-readable output embeds a run manifest (command, resolved config,
workload, seed, tool version, timestamp); re-running with the manifest's
inputs reproduces the numbers exactly.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analytic import (
    GridSpec,
    REFERENCE_MARKERS,
    classify_at,
    family_from_topology,
    heatmap,
    local_viability,
    offload_viability,
    reference_family,
)
from .config import (
    ConfigError,
    DeploymentConfig,
    PRESET_NAMES,
    TIERS,
    check_config,
    load_preset,
    parse_config,
    render_config,
)
from .simulator import SimParams, SimReport, simulate, write_trace_csv
from .topology import DEFAULT_WORKLOAD, TopologyError, WorkloadProfile, build_topology

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_CONFIG = 3
EXIT_IO = 4

DEFAULT_SEED = 42


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# shared plumbing


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None


def _write_text(path: str, body: str) -> None:
    try:
        Path(path).write_text(body)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _load_target(target: str) -> tuple[DeploymentConfig, str | None]:
    """Resolve a preset name or config file path to (config, preset_name)."""
    if target in PRESET_NAMES:
        return load_preset(target), target
    text = _read_text(target)
    try:
        return parse_config(text), None
    except ConfigError as exc:
        listing = "\n".join(str(d) for d in exc.diagnostics if d.severity == "error")
        raise CliError(EXIT_CONFIG, f"{target} is not a usable config:\n{listing}") from None


def _nonnegative(value: float | None, flag: str) -> float | None:
    if value is not None and not value >= 0:
        raise CliError(EXIT_ARGUMENT, f"{flag} must be non-negative, got {value}")
    return value


def _resolve_workload(args, config: DeploymentConfig | None) -> WorkloadProfile:
    """Built-in profile, rate from the config's benchmark section when
    present, both overridable by flags."""
    proc = dict(DEFAULT_WORKLOAD.proc_time)
    for entry in args.tproc:
        tier, sep, value = entry.partition("=")
        if not sep or tier not in TIERS:
            raise CliError(EXIT_ARGUMENT, f"--tproc takes TIER=SECONDS with tier one of {', '.join(TIERS)}, got {entry!r}")
        try:
            proc[tier] = float(value)
        except ValueError:
            raise CliError(EXIT_ARGUMENT, f"--tproc {entry!r}: not a number") from None
        _nonnegative(proc[tier], "--tproc")
    rate = args.rate
    if rate is None:
        if config is not None and config.benchmark.data_generation_frequency > 0:
            rate = config.benchmark.data_generation_frequency
        else:
            rate = DEFAULT_WORKLOAD.rate
    return WorkloadProfile(
        proc_time=proc,
        pre_time=_nonnegative(args.tpre, "--tpre") if args.tpre is not None else DEFAULT_WORKLOAD.pre_time,
        rate=_nonnegative(rate, "--rate"),
        element_size=_nonnegative(args.size, "--size") if args.size is not None else DEFAULT_WORKLOAD.element_size,
    )


def _workload_dict(workload: WorkloadProfile) -> dict:
    return {
        "proc_time_s": dict(workload.proc_time),
        "pre_time_s": workload.pre_time,
        "rate_hz": workload.rate,
        "element_size_mbit": workload.element_size,
    }


def _manifest(command: str, *, seed: int | None = None, preset: str | None = None,
              config: DeploymentConfig | None = None, config_text: str | None = None,
              workload: WorkloadProfile | None = None, parameters: dict | None = None) -> dict:
    data = {
        "command": command,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "seed": seed,
        "preset": preset,
        "config_text": render_config(config) if config is not None else config_text,
        "workload": _workload_dict(workload) if workload is not None else None,
    }
    if parameters:
        data["parameters"] = parameters
    return data


def _emit(args, body: str) -> int:
    if args.out:
        _write_text(args.out, body)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def _json_body(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    text = _read_text(args.config)
    config, diagnostics = check_config(text)
    ok = config is not None
    if args.json:
        payload = {
            "manifest": _manifest("validate", config=config, config_text=text),
            "ok": ok,
            "diagnostics": [
                {"severity": d.severity, "key": d.key, "message": d.message} for d in diagnostics
            ],
        }
        _emit(args, _json_body(payload))
    else:
        lines = [str(d) for d in diagnostics]
        lines.append(f"{args.config}: {'ok' if ok else 'invalid'} "
                     f"({sum(d.severity == 'error' for d in diagnostics)} errors, "
                     f"{sum(d.severity == 'warning' for d in diagnostics)} warnings)")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_CONFIG


def _describe_verdict(verdict) -> str:
    state = "viable" if verdict.viable else "NOT viable [" + ", ".join(verdict.failed_conditions) + "]"
    return (f"{state}; load {verdict.load_percent:.1f}%, "
            f"data rate {verdict.required_bandwidth:.3g} Mbit/s per endpoint")


def cmd_predict(args) -> int:
    config, preset = _load_target(args.target)
    try:
        topology = build_topology(config)
    except TopologyError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    family = family_from_topology(topology)
    workload = _resolve_workload(args, config)

    local = local_viability(workload, family.endpoint)
    placement, option = next(iter(family.options.items()))
    offload = offload_viability(workload, family.endpoint, option.worker,
                                option.endpoints_per_worker, option.link)

    if args.json:
        payload = {
            "manifest": _manifest("predict", preset=preset, config=config, workload=workload),
            "local": local.to_dict(),
            "offload": {"placement": placement, **offload.to_dict()},
        }
        return _emit(args, _json_body(payload))
    endpoint = family.endpoint
    worker = option.worker
    lines = [
        f"local on {endpoint.tier} ({endpoint.cores} cores x quota {endpoint.quota:g}): "
        + _describe_verdict(local),
        f"offload to {placement} ({worker.cores} cores x quota {worker.quota:g}, "
        f"{option.endpoints_per_worker} endpoints/worker, "
        f"{option.link.latency_avg_ms:g} ms, {option.link.throughput_mbit:g} Mbit/s): "
        + _describe_verdict(offload),
    ]
    return _emit(args, "\n".join(lines) + "\n")


def cmd_heatmap(args) -> int:
    try:
        spec = GridSpec(rate_max=args.rmax, proc_max=args.tmax,
                        rate_steps=args.resolution, proc_steps=args.resolution)
    except ValueError as exc:
        raise CliError(EXIT_ARGUMENT, str(exc)) from None
    if args.target is None:
        config, preset = None, None
        family = reference_family()
    else:
        config, preset = _load_target(args.target)
        try:
            family = family_from_topology(build_topology(config))
        except TopologyError as exc:
            raise CliError(EXIT_CONFIG, str(exc)) from None
    workload = _resolve_workload(args, config)

    grid = heatmap(spec, workload, family)
    markers = [
        {"label": label, "rate_hz": rate, "proc_s": proc,
         "class": classify_at(workload, family, rate, proc)}
        for label, rate, proc in REFERENCE_MARKERS
    ]
    manifest = _manifest(
        "heatmap", preset=preset, config=config,
        config_text=None if config is not None else "reference family",
        workload=workload,
        parameters={"rate_max": args.rmax, "proc_max": args.tmax, "resolution": args.resolution},
    )
    if args.json:
        payload = {"manifest": manifest, "grid": grid.to_dict(), "markers": markers}
        return _emit(args, _json_body(payload))
    lines = [f"# manifest: {json.dumps(manifest, sort_keys=True)}"]
    lines.append(grid.to_csv_text().rstrip("\n"))
    lines.append("")
    lines.append("marker,rate_hz,tproc_s,class")
    for marker in markers:
        lines.append(f"{marker['label']},{marker['rate_hz']:g},{marker['proc_s']:g},{marker['class']}")
    return _emit(args, "\n".join(lines) + "\n")


def cmd_simulate(args) -> int:
    config, preset = _load_target(args.target)
    try:
        topology = build_topology(config)
    except TopologyError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    workload = _resolve_workload(args, config)
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    if args.duration <= 0:
        raise CliError(EXIT_ARGUMENT, f"--duration must be positive, got {args.duration}")
    warmup = args.warmup
    if warmup is not None and not 0 <= warmup < args.duration:
        raise CliError(EXIT_ARGUMENT, f"--warmup must lie in [0, duration), got {warmup}")
    params = SimParams(duration=args.duration, warmup=warmup, seed=seed,
                       max_elements=args.max_elements)
    report = simulate(topology, workload, params)

    manifest = _manifest(
        "simulate", seed=seed, preset=preset, config=config, workload=workload,
        parameters={"duration": args.duration, "warmup": params.warmup_s,
                    "max_elements": args.max_elements},
    )
    if args.trace:
        rows = [f"# manifest: {json.dumps(manifest, sort_keys=True)}"]
        import io

        buffer = io.StringIO()
        write_trace_csv(report, buffer)
        rows.append(buffer.getvalue())
        _write_text(args.trace, "\n".join(rows))
    payload = {"manifest": manifest, "report": report.to_dict()}
    return _emit(args, _json_body(payload))


def _preset_summary(name: str, workload_args, repeats: int, base_seed: int,
                    duration: float, warmup: float | None) -> dict:
    config = load_preset(name)
    topology = build_topology(config)
    family = family_from_topology(topology)
    workload = _resolve_workload(workload_args, config)
    placement, option = next(iter(family.options.items()))
    verdict = offload_viability(workload, family.endpoint, option.worker,
                                option.endpoints_per_worker, option.link)
    reports: list[SimReport] = []
    for i in range(repeats):
        params = SimParams(duration=duration, warmup=warmup, seed=base_seed + i)
        reports.append(simulate(topology, workload, params))

    def stats(values: list[float]) -> tuple[float, float]:
        return statistics.fmean(values), statistics.stdev(values) if len(values) > 1 else 0.0

    total_mean, total_sd = stats([r.latency_mean_s for r in reports])
    comm_mean, _ = stats([r.communication_mean_s for r in reports])
    compute_mean, _ = stats([r.compute_mean_s for r in reports])
    queue_mean, _ = stats([r.queueing_mean_s for r in reports])
    return {
        "name": name,
        "analytic_load_percent": verdict.load_percent,
        "repeats": repeats,
        "latency_mean_s": total_mean,
        "latency_sd_s": total_sd,
        "communication_mean_s": comm_mean,
        "compute_mean_s": compute_mean,
        "queueing_mean_s": queue_mean,
    }


def cmd_compare(args) -> int:
    if len(args.presets) < 2:
        raise CliError(EXIT_ARGUMENT, "compare needs at least two presets")
    for name in args.presets:
        if name not in PRESET_NAMES:
            raise CliError(EXIT_ARGUMENT,
                           f"unknown preset {name!r}; choose from: {', '.join(PRESET_NAMES)}")
    if args.repeats < 1:
        raise CliError(EXIT_ARGUMENT, f"--repeats must be at least 1, got {args.repeats}")
    if args.duration <= 0:
        raise CliError(EXIT_ARGUMENT, f"--duration must be positive, got {args.duration}")
    if args.warmup is not None and not 0 <= args.warmup < args.duration:
        raise CliError(EXIT_ARGUMENT, f"--warmup must lie in [0, duration), got {args.warmup}")
    seed = args.seed if args.seed is not None else DEFAULT_SEED

    rows = [
        _preset_summary(name, args, args.repeats, seed, args.duration, args.warmup)
        for name in args.presets
    ]
    manifest = _manifest(
        "compare", seed=seed, workload=_resolve_workload(args, None),
        parameters={"presets": list(args.presets), "repeats": args.repeats,
                    "duration": args.duration, "warmup": args.warmup},
    )
    if args.json:
        return _emit(args, _json_body({"manifest": manifest, "presets": rows}))

    def ms(seconds: float) -> str:
        return f"{seconds * 1000:8.1f}"

    lines = [f"{'preset':<12}{'load %':>8}  {'total ms':>8} {'sd':>6}  "
             f"{'comm ms':>8}  {'compute ms':>10}  {'queue ms':>8}"]
    for row in rows:
        lines.append(
            f"{row['name']:<12}{row['analytic_load_percent']:>8.1f}  "
            f"{ms(row['latency_mean_s'])} {row['latency_sd_s'] * 1000:>6.2f}  "
            f"{ms(row['communication_mean_s'])}  {row['compute_mean_s'] * 1000:>10.1f}  "
            f"{ms(row['queueing_mean_s'])}"
        )
    lines.append(f"({args.repeats} runs per preset, seeds {seed}..{seed + args.repeats - 1}, "
                 f"{args.duration:g} s each)")
    return _emit(args, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tierplan",
        description="Plan where stream processing fits across cloud, edge, and endpoints.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    workload = argparse.ArgumentParser(add_help=False)
    workload.add_argument("--tproc", action="append", default=[], metavar="TIER=SECONDS",
                          help="per-element processing time on a tier (repeatable)")
    workload.add_argument("--tpre", type=float, metavar="SECONDS",
                          help="per-element preprocessing time on the endpoint")
    workload.add_argument("--rate", type=float, metavar="HZ",
                          help="elements generated per second per endpoint")
    workload.add_argument("--size", type=float, metavar="MBIT", help="element size in Mbit")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a config file, print diagnostics")
    p.add_argument("config", metavar="CONFIG", help="config file path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("predict", parents=[common, workload],
                       help="analytic local and offload viability for a deployment")
    p.add_argument("target", metavar="TARGET", help="preset name or config file path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("heatmap", parents=[common, workload],
                       help="classify the rate x processing-time design space")
    p.add_argument("target", nargs="?", metavar="TARGET",
                   help="preset name or config path (default: built-in reference family)")
    p.add_argument("--rmax", type=float, default=10.0, help="largest rate sample (Hz)")
    p.add_argument("--tmax", type=float, default=0.5, help="largest processing-time sample (s)")
    p.add_argument("--resolution", type=int, default=21, help="samples per axis")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("simulate", parents=[common, workload],
                       help="discrete-event simulation of one deployment")
    p.add_argument("target", metavar="TARGET", help="preset name or config file path")
    p.add_argument("--duration", type=float, default=40.0, help="simulated seconds")
    p.add_argument("--warmup", type=float, help="seconds excluded from metrics (default 10%%)")
    p.add_argument("--max-elements", type=int, help="per-endpoint cap on generated elements")
    p.add_argument("--trace", metavar="PATH", help="also write a per-element CSV trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", parents=[common, workload],
                       help="repeated simulations across presets, side by side")
    p.add_argument("presets", nargs="+", metavar="PRESET",
                   help=f"presets to compare ({', '.join(PRESET_NAMES)})")
    p.add_argument("--repeats", type=int, default=3, help="seeded repetitions per preset")
    p.add_argument("--duration", type=float, default=40.0, help="simulated seconds per run")
    p.add_argument("--warmup", type=float, help="seconds excluded from metrics (default 10%%)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tierplan {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

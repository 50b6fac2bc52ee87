"""Deployment configuration: parsing, validation, rendering, presets.

Deployment files are INI-style text::

    [infrastructure]
    # cloud,edge,endpoint order
    devices_per_tier = 10,0,40
    cores_per_device = 4,0,1
    quota_per_cpu = 1.0,0,0.5
    cloud_to_endpoint = 45,5     # latency: average,variability in ms
    cloud_to_endpoint = 8        # throughput: Mbit/s

    [benchmark]
    use_benchmark = True
    data_generation_frequency = 5
    application = image_classification
    resource_manager = kubernetes

Tier-pair keys may legally appear twice in [infrastructure]: an entry with
two values is a latency (average, variability), an entry with one value is
a throughput.  Links are symmetric, so ``a_to_b`` and ``b_to_a`` name the
same link and may not both be given for the same kind.  ``#`` starts a
line comment.  Keys are case-sensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

TIERS = ("cloud", "edge", "endpoint")

_TIER_RANK = {tier: i for i, tier in enumerate(TIERS)}

# Accepted and retained so emulator-oriented deployment files keep working,
# but nothing in the planner consumes them.
EMULATION_KEYS = ("hypervisor", "thread_pinning", "machine_address")

TierPair = tuple[str, str]


def tier_pair(a: str, b: str) -> TierPair:
    """Canonical unordered link key: lower-ranked tier first."""
    if a not in _TIER_RANK or b not in _TIER_RANK:
        raise ValueError(f"unknown tier in pair {a!r}, {b!r}")
    return (a, b) if _TIER_RANK[a] <= _TIER_RANK[b] else (b, a)


def pair_key(pair: TierPair) -> str:
    """Config-file key for a canonical tier pair, e.g. ``cloud_to_endpoint``."""
    return f"{pair[0]}_to_{pair[1]}"


_PAIR_KEYS = {f"{a}_to_{b}": tier_pair(a, b) for a in TIERS for b in TIERS}


@dataclass(frozen=True)
class Diagnostic:
    """One validation or parse finding.  Errors block topology construction,
    warnings do not."""

    severity: str  # "error" | "warning"
    key: str       # offending key or section name ("" for line-level issues)
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


class ConfigError(ValueError):
    """Raised by parse_config; carries every diagnostic in ``diagnostics``."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == "error"]
        head = errors[0].message if errors else "invalid configuration"
        more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(head + more)


@dataclass(frozen=True)
class BenchmarkConfig:
    use_benchmark: bool = False
    data_generation_frequency: float = 0.0  # elements per second per endpoint
    application: str = ""
    resource_manager: str = ""  # recorded in reports, otherwise ignored


@dataclass(frozen=True)
class DeploymentConfig:
    """A parsed deployment description.

    Per-tier triples are in (cloud, edge, endpoint) order.  ``latency`` maps
    canonical tier pairs to (average_ms, variability_ms); ``throughput`` maps
    them to Mbit/s.  The three emulation-only fields are retained verbatim.
    """

    devices_per_tier: tuple[int, int, int]
    cores_per_device: tuple[int, int, int]
    quota_per_cpu: tuple[float, float, float]
    latency: Mapping[TierPair, tuple[float, float]] = field(default_factory=dict)
    throughput: Mapping[TierPair, float] = field(default_factory=dict)
    benchmark: BenchmarkConfig = field(default_factory=BenchmarkConfig)
    hypervisor: str | None = None
    thread_pinning: bool | None = None
    machine_address: tuple[str, ...] | None = None

    def devices(self, tier: str) -> int:
        return self.devices_per_tier[_TIER_RANK[tier]]

    def cores(self, tier: str) -> int:
        return self.cores_per_device[_TIER_RANK[tier]]

    def quota(self, tier: str) -> float:
        return self.quota_per_cpu[_TIER_RANK[tier]]


@dataclass(frozen=True)
class WorkerPlan:
    """How a config maps onto compute roles, before devices are materialized."""

    worker_tier: str
    workers: int
    controllers: int          # devices set aside for coordination, no capacity
    sources: int              # data-generating endpoints
    endpoints_per_worker: int
    link: TierPair            # the link every offloaded element crosses


class PlanError(ValueError):
    pass


def worker_plan(config: DeploymentConfig) -> WorkerPlan:
    """Derive worker placement from device counts.

    The edge tier hosts workers when populated, else the cloud tier, else the
    endpoints themselves (peer-to-peer: the first half of the endpoints serve
    the rest).  When the cloud tier hosts workers and the endpoint count only
    divides evenly after setting one device aside, that device is taken to be
    a dedicated controller provisioned on top of the worker pool.
    """
    cloud, edge, endpoint = config.devices_per_tier
    if edge > 0:
        worker_tier, workers, controllers, sources = "edge", edge, cloud, endpoint
    elif cloud > 0:
        worker_tier, sources = "cloud", endpoint
        if endpoint % cloud == 0:
            workers, controllers = cloud, 0
        elif cloud >= 2 and endpoint % (cloud - 1) == 0:
            workers, controllers = cloud - 1, 1
        else:
            raise PlanError(
                f"{endpoint} endpoints cannot be spread evenly over "
                f"{cloud} cloud devices (or {cloud} minus a controller)"
            )
    elif endpoint > 0:
        workers = endpoint // 2
        if workers == 0:
            raise PlanError("peer-to-peer processing needs at least 2 endpoints")
        worker_tier, controllers, sources = "endpoint", 0, endpoint - workers
    else:
        raise PlanError("no devices in any tier; nothing can host processing")
    if sources % workers:
        raise PlanError(
            f"{sources} endpoints cannot be spread evenly over "
            f"{workers} {worker_tier} workers"
        )
    return WorkerPlan(
        worker_tier=worker_tier,
        workers=workers,
        controllers=controllers,
        sources=sources,
        endpoints_per_worker=sources // workers,
        link=tier_pair(worker_tier, "endpoint"),
    )


def validate(config: DeploymentConfig) -> list[Diagnostic]:
    """All invariant violations in ``config``.

    No error-severity entry means the config can be turned into a topology.
    Emulation-only keys that are present each contribute one warning.
    """
    diags: list[Diagnostic] = []

    def error(key: str, msg: str) -> None:
        diags.append(Diagnostic("error", key, msg))

    for name, triple in (
        ("devices_per_tier", config.devices_per_tier),
        ("cores_per_device", config.cores_per_device),
        ("quota_per_cpu", config.quota_per_cpu),
    ):
        if len(triple) != 3:
            error(name, f"{name} must have one entry per tier (cloud,edge,endpoint)")
            return diags

    for i, tier in enumerate(TIERS):
        count = config.devices_per_tier[i]
        if not isinstance(count, int) or count < 0:
            error("devices_per_tier", f"device count for {tier} must be a non-negative integer, got {count!r}")
            continue
        cores = config.cores_per_device[i]
        if not isinstance(cores, int) or cores < 0:
            error("cores_per_device", f"core count for {tier} must be a non-negative integer, got {cores!r}")
            continue
        if count > 0:
            quota = config.quota_per_cpu[i]
            if cores < 1:
                error("cores_per_device", f"{tier} tier has {count} devices but no cores per device")
            if not 0 < quota <= 1:
                error("quota_per_cpu", f"quota for populated tier {tier} must lie in (0, 1], got {quota!r}")

    for pair, (avg, sd) in config.latency.items():
        if not (avg >= 0 and sd >= 0):
            error(pair_key(pair), f"latency for {pair_key(pair)} must be non-negative, got {avg!r},{sd!r}")

    freq = config.benchmark.data_generation_frequency
    if not (freq >= 0 and math.isfinite(freq)):
        error("data_generation_frequency", f"data_generation_frequency must be finite and non-negative, got {freq!r}")

    plan: WorkerPlan | None = None
    try:
        plan = worker_plan(config)
    except PlanError as exc:
        error("devices_per_tier", str(exc))

    if plan is not None:
        link_name = pair_key(plan.link)
        if plan.link not in config.latency:
            error(link_name, f"pipeline crosses the {link_name} link but no latency entry is given")
        if plan.link not in config.throughput:
            error(link_name, f"pipeline crosses the {link_name} link but no throughput entry is given")

    for pair, value in config.throughput.items():
        if value > 0:
            continue
        msg = f"throughput for {pair_key(pair)} must be positive, got {value!r}"
        if plan is not None and pair == plan.link:
            error(pair_key(pair), msg)
        else:
            diags.append(Diagnostic("warning", pair_key(pair), msg + " (link unused by this deployment)"))

    for key in EMULATION_KEYS:
        if getattr(config, key) is not None:
            diags.append(Diagnostic(
                "warning", key,
                f"{key} only matters when emulating the deployment; retained but ignored by the planner",
            ))
    return diags


# ---------------------------------------------------------------------------
# parsing


def check_config(text: str) -> tuple[DeploymentConfig | None, list[Diagnostic]]:
    """Parse and validate; total over all inputs.

    Returns the config and every diagnostic found.  The config is None
    iff at least one diagnostic is an error.
    """
    config, diags = _parse_structure(text)
    if config is not None:
        diags = diags + validate(config)
    if any(d.severity == "error" for d in diags):
        config = None
    return config, diags


def parse_config(text: str) -> DeploymentConfig:
    """Parse ``text``, raising ConfigError listing every error found."""
    config, diags = check_config(text)
    if config is None:
        raise ConfigError(diags)
    return config


def _split(value: str) -> list[str]:
    return [part.strip() for part in value.split(",")]


def _parse_structure(text: str) -> tuple[DeploymentConfig | None, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    raw: dict = {
        "devices_per_tier": None,
        "cores_per_device": None,
        "quota_per_cpu": None,
        "latency": {},
        "throughput": {},
        "hypervisor": None,
        "thread_pinning": None,
        "machine_address": None,
        "use_benchmark": None,
        "data_generation_frequency": None,
        "application": None,
        "resource_manager": None,
    }
    seen: set = set()
    section: str | None = None
    section_known = False

    def error(key: str, msg: str) -> None:
        diags.append(Diagnostic("error", key, msg))

    def number(token: str, key: str, where: str) -> float | None:
        try:
            value = float(token)
        except ValueError:
            value = None
        if value is None or not math.isfinite(value):
            error(key, f"{where}: value for '{key}' must be a finite number, got {token!r}")
            return None
        return value

    def integer(token: str, key: str, where: str) -> int | None:
        try:
            return int(token)
        except ValueError:
            error(key, f"{where}: value for '{key}' must be an integer, got {token!r}")
            return None

    def boolean(token: str, key: str, where: str) -> bool | None:
        if token.lower() == "true":
            return True
        if token.lower() == "false":
            return False
        error(key, f"{where}: value for '{key}' must be True or False, got {token!r}")
        return None

    def once(mark: tuple, key: str, where: str, what: str) -> bool:
        if mark in seen:
            error(key, f"{where}: duplicate {what}")
            return False
        seen.add(mark)
        return True

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        where = f"line {lineno}"
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                error("", f"{where}: malformed section header {stripped!r}")
                section, section_known = None, False
                continue
            name = stripped[1:-1].strip()
            section, section_known = name, name in ("infrastructure", "benchmark")
            if not section_known:
                error(name, f"{where}: unknown section [{name}]")
            else:
                once(("section", name), name, where, f"section [{name}]")
            continue
        if "=" not in stripped:
            error("", f"{where}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if section is None:
            error(key, f"{where}: '{key}' appears before any [section] header")
            continue
        if not section_known:
            continue  # the unknown-section error already covers its keys

        if section == "infrastructure":
            if key in _PAIR_KEYS:
                pair = _PAIR_KEYS[key]
                parts = _split(value)
                if len(parts) == 2:
                    kind = "latency"
                elif len(parts) == 1:
                    kind = "throughput"
                else:
                    error(key, f"{where}: '{key}' takes 'average,variability' (latency) "
                               f"or one number (throughput), got {len(parts)} values")
                    continue
                if not once(("infrastructure", kind, pair), key, where,
                            f"{kind} entry for the {pair_key(pair)} link"):
                    continue
                nums = [number(part, key, where) for part in parts]
                if any(n is None for n in nums):
                    continue
                if kind == "latency":
                    raw["latency"][pair] = (nums[0], nums[1])
                else:
                    raw["throughput"][pair] = nums[0]
            elif key in ("devices_per_tier", "cores_per_device", "quota_per_cpu"):
                if not once(("infrastructure", key), key, where, f"key '{key}'"):
                    continue
                parts = _split(value)
                if len(parts) != 3:
                    error(key, f"{where}: '{key}' takes three comma-separated values "
                               f"in cloud,edge,endpoint order, got {len(parts)}")
                    continue
                if key == "quota_per_cpu":
                    vals = [number(part, key, where) for part in parts]
                else:
                    vals = [integer(part, key, where) for part in parts]
                if any(v is None for v in vals):
                    continue
                raw[key] = tuple(vals)
            elif key == "hypervisor":
                if once(("infrastructure", key), key, where, f"key '{key}'"):
                    raw[key] = value
            elif key == "thread_pinning":
                if once(("infrastructure", key), key, where, f"key '{key}'"):
                    parsed = boolean(value, key, where)
                    if parsed is not None:
                        raw[key] = parsed
            elif key == "machine_address":
                if once(("infrastructure", key), key, where, f"key '{key}'"):
                    parts = _split(value)
                    if any(not part for part in parts):
                        error(key, f"{where}: '{key}' has an empty address entry")
                    else:
                        raw[key] = tuple(parts)
            else:
                error(key, f"{where}: unknown key '{key}' in [infrastructure]")
        else:  # benchmark
            if key == "use_benchmark":
                if once(("benchmark", key), key, where, f"key '{key}'"):
                    parsed = boolean(value, key, where)
                    if parsed is not None:
                        raw[key] = parsed
            elif key == "data_generation_frequency":
                if once(("benchmark", key), key, where, f"key '{key}'"):
                    parsed = number(value, key, where)
                    if parsed is not None:
                        raw[key] = parsed
            elif key in ("application", "resource_manager"):
                if once(("benchmark", key), key, where, f"key '{key}'"):
                    raw[key] = value
            else:
                error(key, f"{where}: unknown key '{key}' in [benchmark]")

    if ("section", "infrastructure") not in seen:
        error("infrastructure", "missing [infrastructure] section")
    for required in ("devices_per_tier", "cores_per_device", "quota_per_cpu"):
        if ("infrastructure", required) in seen:
            continue
        if ("section", "infrastructure") in seen:
            error(required, f"missing required key '{required}' in [infrastructure]")

    if raw["devices_per_tier"] is None or raw["cores_per_device"] is None or raw["quota_per_cpu"] is None:
        return None, diags

    config = DeploymentConfig(
        devices_per_tier=raw["devices_per_tier"],
        cores_per_device=raw["cores_per_device"],
        quota_per_cpu=tuple(float(q) for q in raw["quota_per_cpu"]),
        latency=raw["latency"],
        throughput=raw["throughput"],
        benchmark=BenchmarkConfig(
            use_benchmark=bool(raw["use_benchmark"]) if raw["use_benchmark"] is not None else False,
            data_generation_frequency=raw["data_generation_frequency"] or 0.0,
            application=raw["application"] or "",
            resource_manager=raw["resource_manager"] or "",
        ),
        hypervisor=raw["hypervisor"],
        thread_pinning=raw["thread_pinning"],
        machine_address=raw["machine_address"],
    )
    return config, diags


# ---------------------------------------------------------------------------
# rendering


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) and value == int(value) and math.isfinite(value):
        return str(int(value))
    return repr(value)


def _fmt_seq(values) -> str:
    return ",".join(_fmt(v) for v in values)


def _pair_rank(pair: TierPair) -> tuple[int, int]:
    return (_TIER_RANK[pair[0]], _TIER_RANK[pair[1]])


def render_config(config: DeploymentConfig) -> str:
    """Canonical text form; parse_config(render_config(c)) == c for valid c.

    Canonical means: [infrastructure] first, fixed key order, tier pairs
    sorted cloud < edge < endpoint, latency entries before throughput
    entries, numbers in their shortest round-tripping form.
    """
    lines = ["[infrastructure]"]
    if config.hypervisor is not None:
        lines.append(f"hypervisor = {config.hypervisor}")
    if config.thread_pinning is not None:
        lines.append(f"thread_pinning = {config.thread_pinning}")
    lines.append(f"devices_per_tier = {_fmt_seq(config.devices_per_tier)}")
    lines.append(f"cores_per_device = {_fmt_seq(config.cores_per_device)}")
    lines.append(f"quota_per_cpu = {_fmt_seq(config.quota_per_cpu)}")
    for pair in sorted(config.latency, key=_pair_rank):
        avg, sd = config.latency[pair]
        lines.append(f"{pair_key(pair)} = {_fmt(avg)},{_fmt(sd)}")
    for pair in sorted(config.throughput, key=_pair_rank):
        lines.append(f"{pair_key(pair)} = {_fmt(config.throughput[pair])}")
    if config.machine_address is not None:
        lines.append(f"machine_address = {','.join(config.machine_address)}")
    bench = config.benchmark
    lines += [
        "",
        "[benchmark]",
        f"use_benchmark = {bench.use_benchmark}",
        f"data_generation_frequency = {_fmt(bench.data_generation_frequency)}",
        f"application = {bench.application}",
        f"resource_manager = {bench.resource_manager}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# presets

PRESET_NAMES = ("cloud", "edge-large", "edge-small", "mist")


def _preset_benchmark(resource_manager: str) -> BenchmarkConfig:
    return BenchmarkConfig(
        use_benchmark=True,
        data_generation_frequency=5.0,
        application="image_classification",
        resource_manager=resource_manager,
    )


def load_preset(name: str) -> DeploymentConfig:
    """One of the four benchmark deployments.

    cloud       10 workers (4 cores, quota 1.0) plus a controller in the
                cloud, 40 endpoints, 45 ms to the endpoints
    edge-large  10 edge workers (4 cores, quota 1.0), cloud controller,
                40 endpoints, 30 ms
    edge-small  10 edge workers (2 cores, quota 0.75), cloud controller,
                20 endpoints, 7.5 ms
    mist        20 endpoints (2 cores, quota 0.5), half of them acting as
                workers for the other half, 7.5 ms

    All presets use 8 Mbit/s endpoint-to-worker throughput and generate
    5 elements per second per endpoint.
    """
    if name == "cloud":
        return DeploymentConfig(
            devices_per_tier=(11, 0, 40),
            cores_per_device=(4, 0, 1),
            quota_per_cpu=(1.0, 0.0, 0.5),
            latency={("cloud", "endpoint"): (45.0, 5.0)},
            throughput={("cloud", "endpoint"): 8.0},
            benchmark=_preset_benchmark("kubernetes"),
        )
    if name == "edge-large":
        return DeploymentConfig(
            devices_per_tier=(1, 10, 40),
            cores_per_device=(4, 4, 1),
            quota_per_cpu=(1.0, 1.0, 0.5),
            latency={("edge", "endpoint"): (30.0, 5.0)},
            throughput={("edge", "endpoint"): 8.0},
            benchmark=_preset_benchmark("kubeedge"),
        )
    if name == "edge-small":
        return DeploymentConfig(
            devices_per_tier=(1, 10, 20),
            cores_per_device=(4, 2, 1),
            quota_per_cpu=(1.0, 0.75, 0.5),
            latency={("edge", "endpoint"): (7.5, 1.0)},
            throughput={("edge", "endpoint"): 8.0},
            benchmark=_preset_benchmark("kubeedge"),
        )
    if name == "mist":
        return DeploymentConfig(
            devices_per_tier=(0, 0, 20),
            cores_per_device=(0, 0, 2),
            quota_per_cpu=(0.0, 0.0, 0.5),
            latency={("endpoint", "endpoint"): (7.5, 1.0)},
            throughput={("endpoint", "endpoint"): 8.0},
            benchmark=_preset_benchmark("none"),
        )
    raise ValueError(f"unknown preset {name!r}; choose from: {', '.join(PRESET_NAMES)}")

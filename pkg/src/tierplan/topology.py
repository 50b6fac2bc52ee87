"""Concrete topologies (devices, links, endpoint assignment) and workloads.

A topology materializes a deployment config into devices with roles:
workers process elements, sources generate them, controllers coordinate
and contribute no capacity.  Sources appear in exactly one worker's
assignment; in peer-to-peer deployments the workers are themselves
endpoints, and in local-only topologies every endpoint is assigned to
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .config import DeploymentConfig, PlanError, TierPair, pair_key, worker_plan


class TopologyError(ValueError):
    """The config cannot be materialized into a topology."""


@dataclass(frozen=True)
class Device:
    id: str
    tier: str
    cores: int
    quota: float  # fraction of each core available, in (0, 1]
    role: str     # "worker" | "controller" | "source"


@dataclass(frozen=True)
class Link:
    """Symmetric network path between two tiers; latency is one-way."""

    tiers: TierPair
    latency_avg_ms: float
    latency_sd_ms: float
    throughput_mbit: float


@dataclass(frozen=True)
class WorkloadProfile:
    """Per-element resource demands of a streaming application.

    proc_time maps the tier doing the processing to seconds per element,
    pre_time is the on-endpoint preparation cost in seconds, rate is
    elements per second per endpoint, element_size is Mbit per element.
    """

    proc_time: Mapping[str, float]
    pre_time: float
    rate: float
    element_size: float

    @property
    def data_rate(self) -> float:
        """Mbit/s one endpoint pushes onto its link."""
        return self.rate * self.element_size

    def proc_on(self, tier: str) -> float:
        try:
            return self.proc_time[tier]
        except KeyError:
            raise ValueError(f"workload has no processing time for tier {tier!r}") from None

    def with_rate(self, rate: float) -> WorkloadProfile:
        return replace(self, rate=rate)

    def scale_proc(self, factor: float) -> WorkloadProfile:
        """Scale every tier's processing time by the same factor."""
        return replace(self, proc_time={t: v * factor for t, v in self.proc_time.items()})


# Image-classification benchmark profile.  The cloud entry is assumed equal
# to the edge entry (same container, no separate measurement).
DEFAULT_WORKLOAD = WorkloadProfile(
    proc_time={"cloud": 0.14, "edge": 0.14, "endpoint": 0.11},
    pre_time=0.001,
    rate=5.0,
    element_size=0.54,
)


def capacity_of(device: Device) -> float:
    """Core-seconds per second the device can spend: cores times quota."""
    return device.cores * device.quota


def demand_on_worker(workload: WorkloadProfile, worker_tier: str, endpoints_per_worker: int) -> float:
    """Core-seconds per second one worker must absorb from its endpoints."""
    return workload.proc_on(worker_tier) * workload.rate * endpoints_per_worker


@dataclass(frozen=True)
class Topology:
    devices: tuple[Device, ...]
    links: tuple[Link, ...]
    assignment: Mapping[str, tuple[str, ...]]  # worker id -> source ids
    endpoints_per_worker: int

    def device(self, device_id: str) -> Device:
        for dev in self.devices:
            if dev.id == device_id:
                return dev
        raise KeyError(device_id)

    @property
    def workers(self) -> tuple[Device, ...]:
        return tuple(d for d in self.devices if d.role == "worker")

    @property
    def sources(self) -> tuple[Device, ...]:
        """Data-generating endpoints, i.e. every assigned device."""
        assigned = {sid for ids in self.assignment.values() for sid in ids}
        return tuple(d for d in self.devices if d.id in assigned)

    @property
    def worker_link(self) -> Link | None:
        """The link offloaded elements cross; None for local-only topologies."""
        return self.links[0] if self.links else None

    def to_dict(self) -> dict:
        return {
            "devices": [
                {"id": d.id, "tier": d.tier, "cores": d.cores, "quota": d.quota, "role": d.role}
                for d in self.devices
            ],
            "links": [
                {
                    "tiers": list(link.tiers),
                    "latency_avg_ms": link.latency_avg_ms,
                    "latency_sd_ms": link.latency_sd_ms,
                    "throughput_mbit": link.throughput_mbit,
                }
                for link in self.links
            ],
            "assignment": {worker: list(ids) for worker, ids in self.assignment.items()},
            "endpoints_per_worker": self.endpoints_per_worker,
        }


def build_topology(config: DeploymentConfig) -> Topology:
    """Materialize a validated config.  Deterministic: same config, same ids,
    same round-robin assignment."""
    try:
        plan = worker_plan(config)
    except PlanError as exc:
        raise TopologyError(str(exc)) from None

    link_name = pair_key(plan.link)
    if plan.link not in config.latency:
        raise TopologyError(f"no latency entry for the {link_name} link")
    throughput = config.throughput.get(plan.link)
    if throughput is None or throughput <= 0:
        raise TopologyError(f"no positive throughput entry for the {link_name} link")

    devices: list[Device] = []
    worker_ids: list[str] = []
    source_ids: list[str] = []
    for tier in ("cloud", "edge", "endpoint"):
        count = config.devices(tier)
        cores, quota = config.cores(tier), config.quota(tier)
        for i in range(count):
            device_id = f"{tier}-{i}"
            if tier == plan.worker_tier:
                if plan.worker_tier == "cloud" and plan.controllers and i == 0:
                    role = "controller"
                elif plan.worker_tier == "endpoint":
                    role = "worker" if i < plan.workers else "source"
                else:
                    role = "worker"
            elif tier == "endpoint":
                role = "source"
            else:
                role = "controller"
            devices.append(Device(device_id, tier, cores, quota, role))
            if role == "worker":
                worker_ids.append(device_id)
            elif role == "source":
                source_ids.append(device_id)

    for worker_id in worker_ids:
        worker = next(d for d in devices if d.id == worker_id)
        if capacity_of(worker) <= 0:
            raise TopologyError(f"worker {worker_id} has no capacity (cores {worker.cores}, quota {worker.quota})")

    assignment: dict[str, list[str]] = {wid: [] for wid in worker_ids}
    for j, source_id in enumerate(source_ids):
        assignment[worker_ids[j % len(worker_ids)]].append(source_id)

    avg, sd = config.latency[plan.link]
    link = Link(plan.link, avg, sd, throughput)
    return Topology(
        devices=tuple(devices),
        links=(link,),
        assignment={wid: tuple(ids) for wid, ids in assignment.items()},
        endpoints_per_worker=plan.endpoints_per_worker,
    )


def local_topology(count: int, cores: int = 1, quota: float = 0.5) -> Topology:
    """Endpoints that process their own elements: no preprocessing step, no
    network, each device assigned to itself."""
    if count < 1:
        raise TopologyError("local topology needs at least one endpoint")
    if cores < 1 or not 0 < quota <= 1:
        raise TopologyError(f"endpoints need usable capacity, got cores {cores}, quota {quota}")
    devices = tuple(Device(f"endpoint-{i}", "endpoint", cores, quota, "worker") for i in range(count))
    return Topology(
        devices=devices,
        links=(),
        assignment={d.id: (d.id,) for d in devices},
        endpoints_per_worker=1,
    )

"""Discrete-event simulation of the streaming pipeline.

Every element follows generate -> preprocess (endpoint, one core, FIFO) ->
transfer (dedicated per-endpoint link: serialization plus sampled one-way
propagation) -> worker FIFO queue -> service on one of the worker's cores.
Self-assigned endpoints process their own elements and skip the
preprocessing and network stages entirely.

Arrivals and service times are deterministic; the only randomness is the
propagation delay, drawn from a normal distribution truncated at zero, so a
run is fully determined by (topology, workload, params).  Events are ordered
by (time, insertion sequence), which makes simultaneous events resolve
deterministically too.

Per-element records carry five duration components (preprocess, transfer,
propagation, queue wait, service); waiting for the endpoint CPU counts into
preprocess and waiting for the link into transfer.  End-to-end latency is
defined as the exact sum of the five components.
"""

from __future__ import annotations

import csv
import heapq
import math
import random
import statistics
from collections import deque
from dataclasses import dataclass, field
from typing import IO

from .topology import Topology, WorkloadProfile


@dataclass(frozen=True)
class SimParams:
    duration: float                  # simulated seconds
    warmup: float | None = None      # seconds excluded from metrics; default 10% of duration
    seed: int = 0
    max_elements: int | None = None  # per-endpoint cap on generated elements

    @property
    def warmup_s(self) -> float:
        return 0.1 * self.duration if self.warmup is None else self.warmup


@dataclass
class ElementRecord:
    source: str
    worker: str
    index: int
    generated: float
    preprocess: float = 0.0   # endpoint CPU wait + preprocessing
    transfer: float = 0.0     # link wait + serialization
    propagation: float = 0.0
    queue_wait: float = 0.0
    service: float = 0.0
    completed: float | None = None
    phase: str = "preprocess"  # preprocess|transfer|transit|queued|service|done
    _stage_start: float = field(default=0.0, repr=False)

    @property
    def end_to_end(self) -> float:
        return self.preprocess + self.transfer + self.propagation + self.queue_wait + self.service

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "worker": self.worker,
            "index": self.index,
            "generated_s": self.generated,
            "preprocess_s": self.preprocess,
            "transfer_s": self.transfer,
            "propagation_s": self.propagation,
            "queue_wait_s": self.queue_wait,
            "service_s": self.service,
            "end_to_end_s": self.end_to_end if self.phase == "done" else None,
            "completed_s": self.completed,
            "phase": self.phase,
        }


PHASES = ("preprocess", "transfer", "transit", "queued", "service", "done")

_TRACE_COLUMNS = (
    "source", "worker", "index", "generated_s", "preprocess_s", "transfer_s",
    "propagation_s", "queue_wait_s", "service_s", "end_to_end_s", "completed_s", "phase",
)


@dataclass
class SimReport:
    params: SimParams
    generated: int
    completed: int
    measured: int                 # completed elements generated after warmup
    latency_mean_s: float
    latency_sd_s: float
    communication_mean_s: float   # transfer + propagation
    compute_mean_s: float         # preprocess + service
    queueing_mean_s: float
    worker_load_percent: dict[str, float]
    worker_busy_fraction: dict[str, float]
    throughput_eps: float         # elements completed per second, post warmup
    backlog: int                  # generated but not completed at the end
    backlog_at_warmup: int
    phase_counts: dict[str, int]
    elements: tuple[ElementRecord, ...]

    def to_dict(self, include_trace: bool = False) -> dict:
        data = {
            "duration_s": self.params.duration,
            "warmup_s": self.params.warmup_s,
            "seed": self.params.seed,
            "generated": self.generated,
            "completed": self.completed,
            "measured": self.measured,
            "latency_mean_s": self.latency_mean_s,
            "latency_sd_s": self.latency_sd_s,
            "communication_mean_s": self.communication_mean_s,
            "compute_mean_s": self.compute_mean_s,
            "queueing_mean_s": self.queueing_mean_s,
            "worker_load_percent": dict(self.worker_load_percent),
            "worker_busy_fraction": dict(self.worker_busy_fraction),
            "throughput_eps": self.throughput_eps,
            "backlog": self.backlog,
            "backlog_at_warmup": self.backlog_at_warmup,
            "phase_counts": dict(self.phase_counts),
        }
        if include_trace:
            data["trace"] = [rec.to_dict() for rec in self.elements]
        return data


@dataclass(frozen=True)
class LatencyBreakdown:
    """Mean per-element time split into the three report components.
    total_s is defined as their sum."""

    communication_s: float
    compute_s: float
    queueing_s: float

    @property
    def total_s(self) -> float:
        return self.communication_s + self.compute_s + self.queueing_s


def latency_breakdown(report: SimReport) -> LatencyBreakdown:
    if report.measured == 0:
        raise ValueError("no completed post-warmup elements to break down")
    return LatencyBreakdown(
        communication_s=report.communication_mean_s,
        compute_s=report.compute_mean_s,
        queueing_s=report.queueing_mean_s,
    )


def measured_load(report: SimReport) -> dict[str, float]:
    """Per-worker load: service demand arriving per post-warmup second over
    capacity, as a percentage."""
    return dict(report.worker_load_percent)


class _Source:
    __slots__ = ("device", "worker_id", "local", "pre_s", "ser_s", "prop_avg_s",
                 "prop_sd_s", "next_index", "cpu_busy", "cpu_queue", "link_busy", "link_queue")

    def __init__(self, device, worker_id, local, pre_s, ser_s, prop_avg_s, prop_sd_s):
        self.device = device
        self.worker_id = worker_id
        self.local = local
        self.pre_s = pre_s
        self.ser_s = ser_s
        self.prop_avg_s = prop_avg_s
        self.prop_sd_s = prop_sd_s
        self.next_index = 0
        self.cpu_busy = False
        self.cpu_queue: deque = deque()
        self.link_busy = False
        self.link_queue: deque = deque()


class _Worker:
    __slots__ = ("device", "service_s", "free", "queue", "in_service", "arrivals", "busy_s")

    def __init__(self, device, service_s):
        self.device = device
        self.service_s = service_s
        self.free = device.cores
        self.queue: deque = deque()
        self.in_service: dict[int, float] = {}
        self.arrivals = 0
        self.busy_s = 0.0


def simulate(topology: Topology, workload: WorkloadProfile, params: SimParams) -> SimReport:
    """Run one seeded simulation and return aggregate metrics plus the full
    per-element trace."""
    duration = params.duration
    warmup = params.warmup_s
    if not (duration > 0 and math.isfinite(duration)):
        raise ValueError(f"duration must be positive and finite, got {duration!r}")
    if not 0 <= warmup < duration:
        raise ValueError(f"warmup must lie in [0, duration), got {warmup!r}")
    if not (workload.rate >= 0 and math.isfinite(workload.rate)):
        raise ValueError(f"generation rate must be finite and non-negative, got {workload.rate!r}")
    if not topology.workers:
        raise ValueError("topology has no workers")

    workers: dict[str, _Worker] = {}
    for device in topology.workers:
        workers[device.id] = _Worker(device, workload.proc_on(device.tier) / device.quota)

    link = topology.worker_link
    sources: dict[str, _Source] = {}
    for worker_id, assigned in topology.assignment.items():
        for source_id in assigned:
            device = topology.device(source_id)
            local = source_id == worker_id
            if local:
                sources[source_id] = _Source(device, worker_id, True, 0.0, 0.0, 0.0, 0.0)
            else:
                if link is None:
                    raise ValueError(f"source {source_id} offloads to {worker_id} but the topology has no link")
                sources[source_id] = _Source(
                    device, worker_id, False,
                    workload.pre_time / device.quota,
                    workload.element_size / link.throughput_mbit,
                    link.latency_avg_ms / 1000.0,
                    link.latency_sd_ms / 1000.0,
                )

    rng = random.Random(params.seed)
    records: list[ElementRecord] = []
    events: list[tuple] = []  # (time, seq, action, payload)
    seq = 0

    def push(time: float, action: str, payload) -> None:
        nonlocal seq
        heapq.heappush(events, (time, seq, action, payload))
        seq += 1

    def sample_propagation(src: _Source) -> float:
        if src.prop_sd_s == 0:
            return src.prop_avg_s
        while True:  # truncate at zero by redrawing; mean is non-negative
            value = rng.normalvariate(src.prop_avg_s, src.prop_sd_s)
            if value >= 0:
                return value

    def arrive(rec: ElementRecord, worker: _Worker, now: float) -> None:
        if now > warmup:
            worker.arrivals += 1
        rec._stage_start = now
        if worker.free > 0:
            worker.free -= 1
            rec.phase = "service"
            worker.in_service[id(rec)] = now
            push(now + worker.service_s, "done", rec)
        else:
            rec.phase = "queued"
            worker.queue.append(rec)

    if workload.rate > 0:
        interval = 1.0 / workload.rate
        for source_id in sorted(sources):
            push(0.0, "gen", source_id)
    else:
        interval = math.inf

    while events and events[0][0] <= duration:
        now, _, action, payload = heapq.heappop(events)

        if action == "gen":
            src = sources[payload]
            rec = ElementRecord(source=payload, worker=src.worker_id,
                                index=src.next_index, generated=now)
            src.next_index += 1
            records.append(rec)
            if src.local:
                arrive(rec, workers[src.worker_id], now)
            elif src.cpu_busy:
                src.cpu_queue.append(rec)
            else:
                src.cpu_busy = True
                push(now + src.pre_s, "pre", rec)
            next_gen = now + interval
            if next_gen < duration and (params.max_elements is None or src.next_index < params.max_elements):
                push(next_gen, "gen", payload)

        elif action == "pre":
            rec = payload
            src = sources[rec.source]
            rec.preprocess = now - rec.generated
            rec.phase = "transfer"
            rec._stage_start = now
            if src.link_busy:
                src.link_queue.append(rec)
            else:
                src.link_busy = True
                push(now + src.ser_s, "tx", rec)
            if src.cpu_queue:
                push(now + src.pre_s, "pre", src.cpu_queue.popleft())
            else:
                src.cpu_busy = False

        elif action == "tx":
            rec = payload
            src = sources[rec.source]
            rec.transfer = now - rec._stage_start
            rec.propagation = sample_propagation(src)
            rec.phase = "transit"
            push(now + rec.propagation, "arrive", rec)
            if src.link_queue:
                push(now + src.ser_s, "tx", src.link_queue.popleft())
            else:
                src.link_busy = False

        elif action == "arrive":
            rec = payload
            arrive(rec, workers[rec.worker], now)

        else:  # done
            rec = payload
            worker = workers[rec.worker]
            rec.service = worker.service_s
            rec.completed = now
            rec.phase = "done"
            start = worker.in_service.pop(id(rec))
            overlap = min(now, duration) - max(start, warmup)
            if overlap > 0:
                worker.busy_s += overlap
            if worker.queue:
                nxt = worker.queue.popleft()
                nxt.queue_wait = now - nxt._stage_start
                nxt.phase = "service"
                worker.in_service[id(nxt)] = now
                push(now + worker.service_s, "done", nxt)
            else:
                worker.free += 1

    # capacity spent on elements still in service when the run ends
    for worker in workers.values():
        for start in worker.in_service.values():
            overlap = duration - max(start, warmup)
            if overlap > 0:
                worker.busy_s += overlap

    window = duration - warmup
    done = [rec for rec in records if rec.phase == "done"]
    sample = [rec for rec in done if rec.generated >= warmup]
    latencies = [rec.end_to_end for rec in sample]

    worker_load: dict[str, float] = {}
    worker_busy: dict[str, float] = {}
    for worker_id, worker in sorted(workers.items()):
        demand = worker.arrivals * workload.proc_on(worker.device.tier) / window
        capacity = worker.device.cores * worker.device.quota
        worker_load[worker_id] = demand / capacity * 100.0
        worker_busy[worker_id] = worker.busy_s / (window * worker.device.cores)

    completed_in_window = sum(1 for rec in done if rec.completed > warmup)
    phase_counts = {phase: 0 for phase in PHASES}
    for rec in records:
        phase_counts[rec.phase] += 1

    return SimReport(
        params=params,
        generated=len(records),
        completed=len(done),
        measured=len(sample),
        latency_mean_s=statistics.fmean(latencies) if latencies else 0.0,
        latency_sd_s=statistics.stdev(latencies) if len(latencies) > 1 else 0.0,
        communication_mean_s=statistics.fmean(r.transfer + r.propagation for r in sample) if sample else 0.0,
        compute_mean_s=statistics.fmean(r.preprocess + r.service for r in sample) if sample else 0.0,
        queueing_mean_s=statistics.fmean(r.queue_wait for r in sample) if sample else 0.0,
        worker_load_percent=worker_load,
        worker_busy_fraction=worker_busy,
        throughput_eps=completed_in_window / window,
        backlog=len(records) - len(done),
        backlog_at_warmup=sum(1 for rec in records if rec.generated <= warmup)
        - sum(1 for rec in done if rec.completed <= warmup),
        phase_counts=phase_counts,
        elements=tuple(records),
    )


def write_trace_csv(report: SimReport, stream: IO[str]) -> None:
    """One CSV row per element, completed or not."""
    writer = csv.DictWriter(stream, fieldnames=_TRACE_COLUMNS)
    writer.writeheader()
    for rec in report.elements:
        writer.writerow(rec.to_dict())

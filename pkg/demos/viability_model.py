"""The capacity arithmetic behind placement decisions.

Checks whether the default image workload fits on the endpoint itself, then
on a small edge worker, and sweeps the number of endpoints sharing one
worker to find each tier's aggregation limit.
"""

from tierplan.analytic import local_viability, offload_viability
from tierplan.topology import DEFAULT_WORKLOAD, Device, Link

ENDPOINT = Device("endpoint-0", "endpoint", cores=1, quota=0.5, role="source")
SMALL_EDGE = Device("edge-0", "edge", cores=2, quota=0.75, role="worker")
CLOUD = Device("cloud-0", "cloud", cores=4, quota=1.0, role="worker")
LINK = Link(("edge", "endpoint"), latency_avg_ms=7.5, latency_sd_ms=1.0, throughput_mbit=8.0)


def describe(verdict) -> str:
    state = "viable" if verdict.viable else f"NOT viable ({', '.join(verdict.failed_conditions)})"
    return f"{verdict.load_percent:7.1f}% load, {state}"


def main() -> None:
    workload = DEFAULT_WORKLOAD
    print(f"workload: {workload.rate:g} elements/s per endpoint, "
          f"{workload.element_size:g} Mbit each, "
          f"{workload.proc_on('endpoint'):g} s on an endpoint core\n")

    print("processing in place on the endpoint:")
    print("  " + describe(local_viability(workload, ENDPOINT)))

    print("\noffloading two endpoints to one small edge worker:")
    verdict = offload_viability(workload, ENDPOINT, SMALL_EDGE, 2, LINK)
    print("  " + describe(verdict))
    for check in verdict.checks:
        print(f"    {check.name:22s} {check.demand:8.3f} of {check.capacity:8.3f} "
              f"{'ok' if check.passed else 'EXCEEDED'}")

    print("\nhow many endpoints can share one worker?")
    print(f"  {'endpoints':>9}  {'small edge':>12}  {'cloud':>12}")
    for endpoints in (1, 2, 4, 8):
        row = [f"{endpoints:>9}"]
        for target in (SMALL_EDGE, CLOUD):
            load = offload_viability(workload, ENDPOINT, target, endpoints, LINK).load_percent
            row.append(f"{load:11.1f}%")
        print("  " + "  ".join(row))
    print("\nanything above 100% queues up faster than it drains.")


if __name__ == "__main__":
    main()

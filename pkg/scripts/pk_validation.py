#!/usr/bin/env python3
"""Compare simulated queueing waits against the closed-form predictions.

Drives the full event engine on a 3-node chain (Poisson feed -> relaying
head -> middle -> sink) and prints simulated vs analytic mean waits for a
sweep of load factors, single-class and two-class.
"""

import time

from wsnqos import ScenarioConfig, TrafficClass, run
from wsnqos.queueing import ClassLoad, QueueModelParams, wait_nrt, wait_rt

PACKET_BITS = 100
BANDWIDTH = 250_000.0
X = PACKET_BITS / BANDWIDTH
HEAD = 2
PACKETS_PER_POINT = 60_000


def chain_cfg(rate_rt, rate_nrt, duration, seed=11):
    return ScenarioConfig(
        node_count=3,
        positions={1: (560.0, 500.0), 2: (620.0, 500.0)},
        sources=(HEAD,),
        rate_rt=rate_rt,
        rate_nrt=rate_nrt,
        duration=duration,
        deadline_rt=1e4,
        deadline_nrt=1e4,
        queue_capacity=1_000_000,
        initial_energy=1e3,
        seed=seed,
    )


def main():
    print(f"service time X = {X * 1e3:.2f} ms ({PACKET_BITS} bits at {BANDWIDTH:.0f} bit/s)")
    print()
    print("single class (RT only)")
    print(f"{'rho':>5} {'simulated':>12} {'analytic':>12} {'rel err':>8} {'wall':>7}")
    for rho in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
        lam = rho / X
        started = time.perf_counter()
        m = run(chain_cfg(lam, 0.0, duration=PACKETS_PER_POINT / lam))
        wall = time.perf_counter() - started
        params = QueueModelParams(
            ClassLoad.deterministic(lam, X), ClassLoad.deterministic(0.0, X)
        )
        analytic = wait_rt(params)
        simulated = m.mean_wait(HEAD, TrafficClass.RT)
        print(
            f"{rho:5.2f} {simulated * 1e6:10.2f}us {analytic * 1e6:10.2f}us "
            f"{abs(simulated - analytic) / analytic:8.2%} {wall:6.1f}s"
        )

    print()
    print("two classes (equal rates)")
    print(f"{'rho':>5} {'sim RT':>12} {'W1':>12} {'sim NRT':>12} {'W2':>12}")
    for rho_total in (0.3, 0.5, 0.7):
        lam = rho_total / (2 * X)
        m = run(chain_cfg(lam, lam, duration=PACKETS_PER_POINT / (2 * lam)))
        params = QueueModelParams(
            ClassLoad.deterministic(lam, X), ClassLoad.deterministic(lam, X)
        )
        print(
            f"{rho_total:5.2f} {m.mean_wait(HEAD, TrafficClass.RT) * 1e6:10.2f}us "
            f"{wait_rt(params) * 1e6:10.2f}us "
            f"{m.mean_wait(HEAD, TrafficClass.NRT) * 1e6:10.2f}us "
            f"{wait_nrt(params) * 1e6:10.2f}us"
        )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Sweep the cost-weight mix and report delivery, delay, and lifetime.

Runs a dense mid-size network under several (alpha, beta, gamma) presets,
a few seeds each, to show the delay/energy/reliability tradeoff the
next-hop cost exposes.
"""

from dataclasses import replace

from wsnqos import ScenarioConfig, TrafficClass, run

PRESETS = {
    "reference (0.6/0.3/0.1)": (0.6, 0.3, 0.1),
    "delay only (1/0/0)": (1.0, 0.0, 0.0),
    "energy heavy (0.2/0.7/0.1)": (0.2, 0.7, 0.1),
    "reliability heavy (0.2/0.1/0.7)": (0.2, 0.1, 0.7),
}

BASE = ScenarioConfig(
    node_count=120,
    grid_width=500.0,
    grid_height=500.0,
    rate_rt=4.0,
    rate_nrt=4.0,
    deadline_rt=0.02,
    deadline_nrt=0.2,
    loss=0.15,
    initial_energy=0.03,  # small batteries so lifetime differences show
    duration=60.0,
)
SEEDS = (1, 2, 3)


def main():
    print(
        f"{'preset':32} {'delivery':>9} {'rt delay':>10} "
        f"{'energy/pkt':>11} {'first death':>12}"
    )
    for name, (alpha, beta, gamma) in PRESETS.items():
        delivered = generated = 0
        delay_sum = delay_n = 0
        energy = 0.0
        deaths = []
        for seed in SEEDS:
            cfg = replace(BASE, alpha=alpha, beta=beta, gamma=gamma, seed=seed)
            m = run(cfg)
            generated += m.generated_total()
            delivered += m.delivered_total()
            delays = m.delays[TrafficClass.RT]
            delay_sum += sum(delays)
            delay_n += len(delays)
            energy += m.total_energy
            if m.first_death_time is not None:
                deaths.append(m.first_death_time)
        death = f"{min(deaths):8.1f} s" if deaths else "none"
        print(
            f"{name:32} {delivered / generated:9.1%} "
            f"{delay_sum / max(delay_n, 1) * 1e3:8.2f}ms "
            f"{energy / max(delivered, 1) * 1e6:9.2f}uJ {death:>12}"
        )


if __name__ == "__main__":
    main()

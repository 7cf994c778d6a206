"""Command-line entry point: run scenarios and emit stable CSV results.

Outputs, written into --out:

  metrics.csv   one row per run, columns in METRICS_COLUMNS order
  timeline.csv  one row per time bucket per run: seed, time_s, alive_nodes,
                delivered_cum

Floats are printed with 9 significant digits; identical (config, seed)
invocations produce byte-identical files. A seed sweep (--seeds N) runs
seeds base, base+1, ..., base+N-1 and writes rows in that order.
"""

from __future__ import annotations

import argparse
import math
import sys
from bisect import bisect_right
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, ScenarioConfig, load_config
from .engine import DropCause, Metrics, run
from .node import TrafficClass

METRICS_COLUMNS = [
    "seed",
    "generated",
    "delivered_rt",
    "delivered_nrt",
    "drop_expired",
    "drop_predictive",
    "drop_no_route",
    "drop_buffer_overflow",
    "drop_node_death",
    "drop_link_loss",
    "in_flight",
    "delay_rt_mean",
    "delay_rt_p95",
    "delay_rt_max",
    "delay_nrt_mean",
    "delay_nrt_p95",
    "delay_nrt_max",
    "energy_consumed_j",
    "first_death_s",
]

TIMELINE_COLUMNS = ["seed", "time_s", "alive_nodes", "delivered_cum"]


def _fnum(x: float) -> str:
    return format(x, ".9g")


def metrics_row(seed: int, m: Metrics) -> list[str]:
    rt_mean, rt_p95, rt_max = m.delay_stats(TrafficClass.RT)
    nrt_mean, nrt_p95, nrt_max = m.delay_stats(TrafficClass.NRT)
    first_death = m.first_death_time if m.first_death_time is not None else math.nan
    return [
        str(seed),
        str(m.generated_total()),
        str(m.delivered[TrafficClass.RT]),
        str(m.delivered[TrafficClass.NRT]),
        str(m.drop_count(DropCause.EXPIRED)),
        str(m.drop_count(DropCause.PREDICTIVE)),
        str(m.drop_count(DropCause.NO_ROUTE)),
        str(m.drop_count(DropCause.BUFFER_OVERFLOW)),
        str(m.drop_count(DropCause.NODE_DEATH)),
        str(m.drop_count(DropCause.LINK_LOSS)),
        str(m.in_flight),
        _fnum(rt_mean),
        _fnum(rt_p95),
        _fnum(rt_max),
        _fnum(nrt_mean),
        _fnum(nrt_p95),
        _fnum(nrt_max),
        _fnum(m.total_energy),
        _fnum(first_death),
    ]


def timeline_rows(seed: int, cfg: ScenarioConfig, m: Metrics) -> list[list[str]]:
    rows = []
    bucket = cfg.timeline_bucket
    if cfg.duration <= 0.0:
        points = [0.0]
    else:
        n = max(1, math.ceil(cfg.duration / bucket))
        points = [min((i + 1) * bucket, cfg.duration) for i in range(n)]
    for t in points:
        rows.append(
            [
                str(seed),
                _fnum(t),
                str(m.alive_at(t)),
                str(bisect_right(m.delivered_times, t)),
            ]
        )
    return rows


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def summarize(seed: int, m: Metrics) -> str:
    rt_mean, _, _ = m.delay_stats(TrafficClass.RT)
    nrt_mean, _, _ = m.delay_stats(TrafficClass.NRT)
    drops = ", ".join(
        f"{cause.value} {m.drop_count(cause)}"
        for cause in DropCause
        if m.drop_count(cause)
    )
    death = (
        f"{m.first_death_time:.3f} s" if m.first_death_time is not None else "none"
    )
    return (
        f"seed {seed}: generated {m.generated_total()}, "
        f"delivered {m.delivered_total()} "
        f"(rt {m.delivered[TrafficClass.RT]}, nrt {m.delivered[TrafficClass.NRT]}), "
        f"in flight {m.in_flight}\n"
        f"  drops: {drops or 'none'}\n"
        f"  mean delay: rt {rt_mean * 1e3:.3f} ms, nrt {nrt_mean * 1e3:.3f} ms\n"
        f"  energy {m.total_energy:.6f} J, first death {death}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsnqos",
        description="QoS-aware geographic routing simulator for sensor networks",
    )
    parser.add_argument("--config", help="scenario file (key = value lines)")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument(
        "--seeds", type=int, default=1, help="sweep this many consecutive seeds"
    )
    parser.add_argument(
        "--duration", type=float, help="override the simulated duration (s)"
    )
    parser.add_argument(
        "--out", default=".", help="directory for metrics.csv and timeline.csv"
    )
    parser.add_argument(
        "--quiet", action="store_true", help="suppress the stdout summary"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.duration is not None:
            overrides["duration"] = args.duration
        if overrides:
            cfg = replace(cfg, **overrides)
        if args.seeds < 1:
            raise ConfigError("seeds", "must be >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 1

    metric_rows = []
    tl_rows = []
    for seed in range(cfg.seed, cfg.seed + args.seeds):
        run_cfg = replace(cfg, seed=seed)
        metrics = run(run_cfg)
        metric_rows.append(metrics_row(seed, metrics))
        tl_rows.extend(timeline_rows(seed, run_cfg, metrics))
        if not args.quiet:
            print(summarize(seed, metrics))

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(out_dir / "metrics.csv", METRICS_COLUMNS, metric_rows)
        write_csv(out_dir / "timeline.csv", TIMELINE_COLUMNS, tl_rows)
    except OSError as exc:
        print(f"cannot write results: {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        print(f"wrote {out_dir / 'metrics.csv'} and {out_dir / 'timeline.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Timing sweep for the full solver on seeded random instances.

For each (n, m) size class the script generates instances across seeds,
keeps the feasible ones, and reports wall time together with the solver's
own counters (improvement iterations, candidate solves, cache hits).

    python3 scripts/bench_scale.py --sizes 20:50 40:100 60:150 --per-size 5
"""

import argparse
import statistics
import time
from dataclasses import dataclass

from bmatch.gen import PROFILES, random_instance
from bmatch.neighbourhood import SearchBudgetExceeded, solve


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[tuple[int, int], ...]
    per_size: int
    seed: int
    profile: str
    jobs: int


def parse_sizes(raw: list[str]) -> tuple[tuple[int, int], ...]:
    sizes = []
    for item in raw:
        n, _, m = item.partition(":")
        sizes.append((int(n), int(m)))
    return tuple(sizes)


def bench_one(config: BenchConfig, n: int, m: int) -> dict | None:
    """Stats for the first `per_size` feasible instances of one size class."""
    rows = []
    seed = config.seed
    tried = 0
    while len(rows) < config.per_size and tried < 400:
        instance = random_instance(seed, n, m, profile=config.profile)
        seed += 1
        tried += 1
        stats: dict = {}
        started = time.perf_counter()
        try:
            best = solve(instance, jobs=config.jobs, stats=stats)
        except SearchBudgetExceeded:
            continue
        elapsed = time.perf_counter() - started
        if best is None:
            continue
        rows.append(
            {
                "ms": elapsed * 1000.0,
                "size": len(best),
                "iterations": stats.get("iterations", 0),
                "solved": stats.get("solved", 0),
                "cached": stats.get("cached", 0),
            }
        )
    if not rows:
        return None
    return {
        "count": len(rows),
        "ms": statistics.median(r["ms"] for r in rows),
        "ms_max": max(r["ms"] for r in rows),
        "size": statistics.median(r["size"] for r in rows),
        "iterations": max(r["iterations"] for r in rows),
        "solved": max(r["solved"] for r in rows),
        "cached": max(r["cached"] for r in rows),
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", nargs="+", default=["10:25", "20:50", "40:100", "60:150"])
    parser.add_argument("--per-size", type=int, default=5)
    parser.add_argument("--seed", type=int, default=100)
    parser.add_argument("--profile", choices=PROFILES, default="interval")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)
    config = BenchConfig(
        parse_sizes(args.sizes), args.per_size, args.seed, args.profile, args.jobs
    )

    header = f"{'n':>4} {'m':>5} {'runs':>4} {'med ms':>9} {'max ms':>9} {'iters':>5} {'solved':>6} {'cached':>6}"
    print(header)
    print("-" * len(header))
    for n, m in config.sizes:
        row = bench_one(config, n, m)
        if row is None:
            print(f"{n:>4} {m:>5}    no feasible instance found")
            continue
        print(
            f"{n:>4} {m:>5} {row['count']:>4} {row['ms']:>9.1f} {row['ms_max']:>9.1f} "
            f"{row['iterations']:>5} {row['solved']:>6} {row['cached']:>6}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

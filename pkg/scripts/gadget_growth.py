"""Measure how large the perfect-matching gadget gets.

Sweeps seeded random instances, runs the two reduction stages, and tabulates
source size against the reduced graph and its pool, plus the blow-up ratio
of edges.  Useful for judging when the reduction is still worth it.

    python3 scripts/gadget_growth.py --sizes 6:12 12:30 24:60 --per-size 10
"""

import argparse
import statistics
from dataclasses import dataclass

from bmatch.gen import PROFILES, random_instance
from bmatch.reduce import UniformSpec, ab_to_pm, gadget_layout, uniform_to_ab
from bmatch.uniform import spec_of_instance


@dataclass(frozen=True)
class GrowthConfig:
    sizes: tuple[tuple[int, int], ...]
    per_size: int
    seed: int
    profile: str


def measure(config: GrowthConfig, n: int, m: int) -> dict:
    rows = []
    for offset in range(config.per_size):
        instance = random_instance(
            config.seed + offset, n, m, profile=config.profile
        )
        spec: UniformSpec = spec_of_instance(instance)
        ab, _lift = uniform_to_ab(instance, spec)
        reduced, _lift2 = ab_to_pm(ab)
        layout = gadget_layout(ab)
        rows.append(
            {
                "vertices": reduced.vertex_count,
                "edges": len(reduced.edges),
                "pool": len(layout.pool),
                "ratio": len(reduced.edges) / max(1, m),
            }
        )
    return {
        "vertices": statistics.median(r["vertices"] for r in rows),
        "edges": statistics.median(r["edges"] for r in rows),
        "pool": statistics.median(r["pool"] for r in rows),
        "ratio": statistics.median(r["ratio"] for r in rows),
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", nargs="+", default=["6:12", "12:30", "24:60", "48:120"])
    parser.add_argument("--per-size", type=int, default=10)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--profile", choices=PROFILES, default="parity")
    args = parser.parse_args(argv)
    sizes = []
    for item in args.sizes:
        a, _, b = item.partition(":")
        sizes.append((int(a), int(b)))
    config = GrowthConfig(tuple(sizes), args.per_size, args.seed, args.profile)

    header = f"{'n':>4} {'m':>5} {'pm vertices':>11} {'pm edges':>9} {'pool':>5} {'edge ratio':>10}"
    print(header)
    print("-" * len(header))
    for n, m in config.sizes:
        row = measure(config, n, m)
        print(
            f"{n:>4} {m:>5} {row['vertices']:>11.0f} {row['edges']:>9.0f} "
            f"{row['pool']:>5.0f} {row['ratio']:>10.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

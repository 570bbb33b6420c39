"""Count tropical lines through pairs of random rational points.

For points in general position exactly one line passes through both; the
script reports the count, the multiplicity and how the marked-point
placements fared (infeasible, negative lengths, accepted).

    python3 scripts/line_through_points.py --pairs 50 --seed 3
"""

from __future__ import annotations

import argparse
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from tropglue.generators import random_rational
from tropglue.graphs import TropicalGraph, end
from tropglue.moduli import enumerate_assignments


@dataclass
class PointsConfig:
    pairs: int = 20
    bound: int = 6
    denom: int = 4
    seed: int = 0
    threads: int = 1


def line() -> TropicalGraph:
    return TropicalGraph(2, ("v",), (end("W", "v", (-1, 0)), end("S", "v", (0, -1)), end("NE", "v", (1, 1))))


def generic_pairs(cfg: PointsConfig):
    rng = random.Random(cfg.seed)
    while True:
        p = (random_rational(rng, cfg.bound, cfg.denom), random_rational(rng, cfg.bound, cfg.denom))
        q = (random_rational(rng, cfg.bound, cfg.denom), random_rational(rng, cfg.bound, cfg.denom))
        dx, dy = q[0] - p[0], q[1] - p[1]
        if dx and dy and dx != dy:
            yield p, q


def fmt(pt) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in pt) + ")"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=PointsConfig.pairs)
    ap.add_argument("--bound", type=int, default=PointsConfig.bound)
    ap.add_argument("--denom", type=int, default=PointsConfig.denom)
    ap.add_argument("--seed", type=int, default=PointsConfig.seed)
    ap.add_argument("--threads", type=int, default=PointsConfig.threads)
    cfg = PointsConfig(**vars(ap.parse_args()))
    statuses: Counter = Counter()
    totals: Counter = Counter()
    g = line()
    for _, (p, q) in zip(range(cfg.pairs), generic_pairs(cfg)):
        en = enumerate_assignments(g, {"p": p, "q": q}, threads=cfg.threads)
        statuses.update(a.status for a in en.attempts)
        totals[en.total] += 1
        vertex = en.solutions[0].curve.positions["v"] if en.solutions else None
        print(f"{fmt(p):>16} {fmt(q):>16}  total={en.total}  vertex={fmt(vertex) if vertex else '-'}")
    print("totals:", dict(totals))
    print("placement outcomes:", dict(sorted(statuses.items())))


if __name__ == "__main__":
    main()

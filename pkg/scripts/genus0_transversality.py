"""Sweep random balanced trivalent trees and tabulate their moduli presentations.

Every genus-0 trivalent type should have a surjective moduli map with a
single component and dimension ``n + k - 3``; the script counts how many do.

    python3 scripts/genus0_transversality.py --graphs 500 --max-ends 10
"""

from __future__ import annotations

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass

from tropglue.generators import TreeConfig, random_trivalent_tree
from tropglue.moduli import moduli_presentation


@dataclass
class SweepConfig:
    graphs: int = 200
    max_ends: int = 8
    max_dim: int = 3
    max_entry: int = 5
    seed: int = 0


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    by_shape: Counter = Counter()
    failures = []
    t0 = time.perf_counter()
    for _ in range(cfg.graphs):
        tree = TreeConfig(
            ambient_dim=rng.randint(1, cfg.max_dim),
            n_ends=rng.randint(3, cfg.max_ends),
            max_entry=cfg.max_entry,
            seed=rng.randrange(2**31),
        )
        p = moduli_presentation(random_trivalent_tree(tree))
        expected = tree.ambient_dim + tree.n_ends - 3
        ok = p.surjective and p.component_count == 1 and p.dimension == expected
        by_shape[(tree.ambient_dim, tree.n_ends, ok)] += 1
        if not ok:
            failures.append(asdict(tree))
    return {
        "config": asdict(cfg),
        "seconds": round(time.perf_counter() - t0, 3),
        "transverse": sum(v for (_, _, ok), v in by_shape.items() if ok),
        "failures": failures,
        "table": [
            {"n": n, "ends": k, "ok": ok, "count": c} for (n, k, ok), c in sorted(by_shape.items())
        ],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SweepConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    ap.add_argument("--json", action="store_true", help="print the full result as JSON")
    args = ap.parse_args()
    cfg = SweepConfig(**{k: getattr(args, k) for k in asdict(SweepConfig())})
    res = sweep(cfg)
    if args.json:
        print(json.dumps(res, indent=2))
        return
    print(f"{res['transverse']}/{cfg.graphs} transverse with one component ({res['seconds']}s)")
    print(f"{'n':>3} {'ends':>5} {'graphs':>7}")
    for row in res["table"]:
        flag = "" if row["ok"] else "  <- not transverse"
        print(f"{row['n']:>3} {row['ends']:>5} {row['count']:>7}{flag}")


if __name__ == "__main__":
    main()

"""Carry directions around the puncture of the cut plane.

The plane is cut along the ray through (1,0) and reglued by the shear fixing
(1,0) and sending (0,1) to (1,1). A direction that goes once around comes
back sheared, so no globally consistent set of integral directions exists.

    python3 scripts/monodromy_cut_plane.py --loops 3 --direction 0 1
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from tropglue.polyhedra import complex_violations, continue_direction, cut_plane_complex, transition


@dataclass
class LoopConfig:
    loops: int = 2
    direction: tuple[int, int] = (0, 1)


LOOP = [(0, 0), (1, 1), (2, 2)]  # (chart, gluing) steps: 0 -> 1 -> 2 -> back to 0


def run(cfg: LoopConfig) -> list[tuple[int, tuple[int, ...]]]:
    c = cut_plane_complex()
    problems = complex_violations(c)
    if problems:
        raise SystemExit("inconsistent complex: " + "; ".join(problems))
    out = [(0, tuple(cfg.direction))]
    for k in range(1, cfg.loops + 1):
        out.append((k, continue_direction(c, LOOP * k, cfg.direction)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--loops", type=int, default=LoopConfig.loops)
    ap.add_argument("--direction", type=int, nargs=2, default=list(LoopConfig.direction))
    args = ap.parse_args()
    cfg = LoopConfig(args.loops, tuple(args.direction))
    c = cut_plane_complex()
    print("crossing the cut sends (0,1) to", continue_direction(c, [(2, 2)], (0, 1)))
    print("monodromy of one loop:", transition(c, LOOP).to_rows())
    for k, d in run(cfg):
        print(f"after {k} loop(s): {d}")


if __name__ == "__main__":
    main()

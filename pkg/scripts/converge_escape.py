"""Radial-projection sequences for a tall and a short rectangle.

Solves on B_n for each n and prints the reports side by side; the tall
boundary settles inside the window, the short one drifts away from it.

    python3 scripts/converge_escape.py --n-list 2..8 --out out/sequences
"""

import argparse
import json
import time
from pathlib import Path

from tallplateau.config import SolverConfig
from tallplateau.curves import CurveFamily, rectangle
from tallplateau.sequence import solve_sequence


def parse_range(text):
    a, b = text.split("..")
    return list(range(int(a), int(b) + 1))


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n-list", default="2..8", type=parse_range)
    p.add_argument("--tall", type=float, default=4.0, help="height of the tall rectangle")
    p.add_argument("--short", type=float, default=2.0, help="height of the short rectangle")
    p.add_argument("--width", type=float, default=2.0)
    p.add_argument("--nz", type=int, default=48)
    p.add_argument("--ds", type=float, default=0.1)
    p.add_argument("--meshes", action="store_true")
    p.add_argument("--out", default="out/sequences")
    args = p.parse_args()
    cfg = SolverConfig(nz=args.nz, ds=args.ds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for label, h in (("tall", args.tall), ("short", args.short)):
        fam = CurveFamily.of(rectangle(0.0, args.width, -h / 2, h / 2))
        t0 = time.perf_counter()
        reports, sols = solve_sequence(fam, args.n_list, cfg, keep=True)
        dt = time.perf_counter() - t0
        with (out / f"{label}.jsonl").open("w") as fh:
            for r in reports:
                fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
        if args.meshes:
            for r, s in zip(reports, sols):
                s.mesh.write_obj(out / f"{label}_n{r.n:g}.obj")
        print(f"{label}: h = {h:g}, {dt:.0f}s")
        print("     n  status         core    drift   window   change")
        for r in reports:
            ch = "-" if r.window_change is None else f"{r.window_change:.2%}"
            print(f"  {r.n:4g}  {r.status:13s} {r.core_area_fraction:6.3f} {r.drift:8.3f} {r.window_area:8.3f} {ch:>8s}")


if __name__ == "__main__":
    main()

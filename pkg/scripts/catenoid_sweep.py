"""Sweep the catenoid family: heights, thresholds and profile crossings.

    python3 scripts/catenoid_sweep.py --out out/catenoid_sweep.csv
"""

import argparse
import csv
import math
from pathlib import Path

from tallplateau import catenoid as cat


def _value(f, *a):
    try:
        return f(*a)
    except (cat.NoSignChange, cat.MultipleRoots, cat.DomainError) as exc:
        return type(exc).__name__


def row(d: float) -> dict:
    rh = cat.rho_hat(d)
    big = d >= 10
    return {
        "d": d,
        "neck": math.asinh(d),
        "h": cat.height_h(d),
        "rho_hat": rh,
        "h_hat": cat.h_hat(d) if big else "",
        "margin_at_rho_hat": cat.margin(d, rh) if rh > math.asinh(d) else "",
        "rho_star": _value(cat.rho_star, d),
        "iota_vs_1.1d": _value(cat.iota, d, 1.1 * d) if big else "",
    }


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--d", type=float, nargs="*", default=[0.01, 0.1, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6])
    p.add_argument("--out", default="out/catenoid_sweep.csv")
    args = p.parse_args()
    rows = [row(d) for d in args.d]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    for r in rows:
        print("  ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in r.items()))


if __name__ == "__main__":
    main()

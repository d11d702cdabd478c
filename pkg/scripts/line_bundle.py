"""Write the slope-constrained line bundle through (1, 2) as sampled curves.

Output: one CSV with columns alpha, slope, x, u.
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from holdercv.problems import fig1_bundle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/line_bundle.csv"))
    ap.add_argument("--x-min", type=float, default=-1.0)
    ap.add_argument("--x-max", type=float, default=3.0)
    ap.add_argument("--points", type=int, default=81)
    args = ap.parse_args()

    x = np.linspace(args.x_min, args.x_max, args.points)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "slope", "x", "u"])
        for alpha, s, d in fig1_bundle():
            for xi in x:
                w.writerow([repr(alpha), repr(s), repr(float(xi)), repr(float(s * xi + d))])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

"""lap_convergence.py

Convergence study for lap-count entropy estimates on tent maps.

For each slope s the true entropy is log s, so the absolute error of the
estimate at horizon n is directly observable.  The script prints one CSV
row per (slope, n) pair:

    slope,n,method,estimate,abs_error

Typical run (error should decay roughly geometrically until it hits the
floor set by the finite lap table):

    python3 scripts/lap_convergence.py --slopes 1.5,1.8,2.0 --n-max 20
"""

import argparse
import math
import sys

from ilim import TentMap, entropy_lap


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]

    parser = argparse.ArgumentParser(
        description="Lap-entropy error vs horizon for tent maps")
    parser.add_argument("--slopes", default="1.5,1.8,2.0",
                        help="comma-separated tent slopes in (1, 2]")
    parser.add_argument("--n-min", type=int, default=4,
                        help="smallest horizon to report")
    parser.add_argument("--n-max", type=int, default=20,
                        help="largest horizon to report")
    parser.add_argument("--method", default="ratio",
                        choices=("slope", "ratio", "ratio2"),
                        help="extraction method passed to entropy_lap")
    parser.add_argument("--out", type=argparse.FileType("w"),
                        default=sys.stdout,
                        help="write CSV here instead of stdout")
    args = parser.parse_args(argv)

    slopes = [float(tok) for tok in args.slopes.split(",") if tok.strip()]

    print("slope,n,method,estimate,abs_error", file=args.out)
    for s in slopes:
        tm = TentMap(s)
        truth = math.log(s)
        for n in range(args.n_min, args.n_max + 1):
            est = entropy_lap(tm, n, method=args.method)
            err = abs(est.value - truth)
            print("%.10g,%d,%s,%.12g,%.3e" % (s, n, args.method,
                                              est.value, err),
                  file=args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Detect a renormalization tower for a quadratic map and walk its spectrum."""

import argparse
import sys

from ilim import detect_renormalization, entropy_spectrum, spectrum_membership

# parameter of the canonically once-renormalizable quadratic map
A_STAR = 1.5436890126920764

parser = argparse.ArgumentParser(
    description="Renormalization tower and admissible entropy spectrum")
parser.add_argument("--a", type=float, default=A_STAR,
                    help="quadratic parameter, 1 - a*x^2")
parser.add_argument("--max-period", type=int, default=2)
parser.add_argument("--h-max", type=float, default=2.5,
                    help="upper edge of the spectrum listing")
parser.add_argument("--check", default="",
                    help="comma-separated values to test for membership")
parser.add_argument("--tol", type=float, default=1e-9,
                    help="matching tolerance for membership checks")
args = parser.parse_args()

tower = detect_renormalization(args.a, max_period=args.max_period)
print("a = %.12g" % args.a)
print("tower periods:   %s" % (tower.periods,))
print("tower entropies: %s" % ", ".join("%.6f" % h for h in tower.entropies))

values = entropy_spectrum(tower, args.h_max)
print("admissible entropies up to %.3g:" % args.h_max)
for v in values:
    print("  %.12g" % v)

checks = [float(tok) for tok in args.check.split(",") if tok.strip()]
bad = 0
for v in checks:
    res = spectrum_membership(tower, v, tol=args.tol)
    if res.member:
        print("check %.6g: admissible, witness %s" % (v, (res.witness,)))
    else:
        print("check %.6g: NOT admissible" % v)
        bad += 1
sys.exit(0 if bad == 0 else 1)

"""Running min/max of the orbit of 1 under T_beta for Sturmian beta, as CSV.

Columns: n, running_min, running_max, diameter, lower_bound.  The lower bound
1 - (b-a)/beta is the infimum the orbit approaches; settled points come from
the digit-order comparison rather than from ball arithmetic.
"""
import argparse
import csv
import sys

from sturmbeta.beta_expansion import confine_orbit, sturmian_beta
from sturmbeta.numeric import parse_slope
from sturmbeta.words import lower_mechanical, rename


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--slope", default="surd:(3-1*sqrt(5))/2")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--every", type=int, default=100, help="row stride")
    args = p.parse_args()
    alpha = parse_slope(args.slope)
    beta = sturmian_beta(alpha, args.a, args.b)
    lower_word = rename(lower_mechanical(alpha, 0), args.a, args.b)
    conf = confine_orbit(beta, args.n, lower_word)
    if not conf.ok:
        print(f"violations at {conf.violations[:10]}", file=sys.stderr)
        return 4
    lo = float(conf.lower.mid)
    out = csv.writer(sys.stdout)
    out.writerow(["n", "running_min", "running_max", "diameter", "lower_bound"])
    mn, mx = float("inf"), float("-inf")
    for k, pt in enumerate(conf.points):
        x = float(pt.mid)
        mn, mx = min(mn, x), max(mx, x)
        if k % args.every == 0 or k == len(conf.points) - 1:
            out.writerow([k, f"{mn:.15f}", f"{mx:.15f}", f"{mx - mn:.15f}", f"{lo:.15f}"])
    return 0


if __name__ == "__main__":
    sys.exit(main())

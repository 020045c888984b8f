"""Certified digit frequencies and defects for a few (alpha, a, b) families."""
import argparse

from sturmbeta.numeric import parse_slope
from sturmbeta.parry_measure import DEFAULT_SEED, frequency_report

FAMILIES = [("surd:(3-1*sqrt(5))/2", 0, 1), ("surd:(3-1*sqrt(5))/2", 1, 3),
            ("surd:(-1+1*sqrt(2))/1", 0, 1), ("surd:(-2+1*sqrt(5))/1", 1, 4)]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bits", type=int, default=128)
    p.add_argument("--birkhoff", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = p.parse_args()
    print(f"{'slope':24s} a b  {'beta':>10s} {'mu_a':>10s} {'mu_b':>10s}  asserted   value")
    for slope, a, b in FAMILIES:
        rep = frequency_report(parse_slope(slope), a, b, args.bits,
                               birkhoff=args.birkhoff, seed=args.seed)
        d = getattr(rep, rep.asserted)
        line = (f"{slope:24s} {a} {b}  {float(rep.beta.value.mid):10.6f} "
                f"{float(rep.mu_a.mid):10.6f} {float(rep.mu_b.mid):10.6f}  "
                f"{rep.asserted:9s}  {float(d.mid):.6f}")
        if rep.birkhoff:
            line += f"  (birkhoff err {rep.birkhoff['max_abs_error']:.2g})"
        print(line)


if __name__ == "__main__":
    main()

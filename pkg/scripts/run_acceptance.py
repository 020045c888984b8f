"""Run the acceptance battery and print one PASS/FAIL line per criterion.

Exit status is 0 when every criterion passes and 1 otherwise.
"""
import argparse
import json
import sys

from sturmbeta.acceptance import run_all


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--json", help="also write the results to this file")
    args = p.parse_args()
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only)
    for r in results:
        print(r.line(), flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())

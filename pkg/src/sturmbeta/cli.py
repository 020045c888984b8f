"""Command-line interface: ``python -m sturmbeta <command> ...``.

Exit codes: 0 ok, 1 acceptance check failed, 2 precondition failure,
3 precision exhausted, 4 identity or inequality unresolved.  Errors are
reported on stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from typing import List, Optional, Sequence

from . import acceptance
from .beta_expansion import BetaNumber, classify, orbit, solve_beta, sturmian_beta
from .errors import SturmError
from .mahler import identity_check
from .numeric.slope import CEILING_ENV, DEFAULT_CEILING_BITS, parse_number, parse_slope
from .parry_measure import DEFAULT_SEED, frequency_report
from .words import characteristic, fibonacci_word, lower_mechanical, upper_mechanical

WORD_KINDS = ("lower", "upper", "characteristic", "fibonacci")


@dataclass(frozen=True)
class RunConfig:
    command: str
    slope: Optional[str] = None
    kind: str = "lower"
    rho: str = "0"
    n: int = 26
    dbeta1: Optional[str] = None
    beta: Optional[str] = None
    a: int = 0
    b: int = 1
    depth: int = 1000
    bits: int = 128
    verify_depth: int = 64
    birkhoff: bool = False
    seed: int = DEFAULT_SEED
    suite: str = "acceptance"
    only: Optional[str] = None
    format: str = "text"
    output: Optional[str] = None

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in names and v is not None})

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


# ------------------------------------------------------------------ parsing
def _beta_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("beta (one of)")
    g.add_argument("--beta", help="beta itself: an integer >= 2 or surd:/cf:/dec: syntax")
    g.add_argument("--dbeta1", help="expansion of one, e.g. 11 (trailing zeros implied)")
    g.add_argument("--slope", "--solve-slope", dest="slope",
                   help="slope alpha; beta = sturmian_beta(alpha, a, b)")
    g.add_argument("--a", type=int, default=0, help="smaller digit (default 0)")
    g.add_argument("--b", type=int, default=1, help="larger digit (default 1)")


def _format_args(p: argparse.ArgumentParser, formats: Sequence[str] = ("json",)) -> None:
    g = p.add_mutually_exclusive_group()
    for f in formats:
        g.add_argument(f"--{f}", dest="format", action="store_const", const=f,
                       help=f"{f.upper()} output")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sturmbeta",
        description="Sturmian words, beta-expansions and Sturmian numbers.",
        epilog=f"Precision ceiling: ${CEILING_ENV} (default {DEFAULT_CEILING_BITS} bits).")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("word", help="prefix of a mechanical, characteristic or Fibonacci word")
    w.add_argument("--slope", help="slope in surd:/cf:/dec: syntax")
    w.add_argument("--kind", choices=WORD_KINDS, default="lower")
    w.add_argument("--rho", default="0", help="intercept: rational p/q or surd:/cf:/dec:")
    w.add_argument("--n", type=int, default=26, help="prefix length (default 26)")
    _format_args(w)

    s = sub.add_parser("solve", help="certify beta with a given expansion of one")
    _beta_args(s)
    s.add_argument("--bits", type=int, default=128, help="radius <= 2^-bits (default 128)")
    s.add_argument("--verify-depth", type=int, default=64,
                   help="digits of d_beta(1) re-expanded and compared (default 64)")
    _format_args(s)

    o = sub.add_parser("orbit", help="T_beta^n 1 as CSV (n, digit, midpoint, radius)")
    _beta_args(o)
    o.add_argument("--n", type=int, default=1000, help="number of steps (default 1000)")
    _format_args(o, ("csv", "json"))

    c = sub.add_parser("classify", help="finite-depth evidence for the classes C1..C5")
    _beta_args(c)
    c.add_argument("--depth", type=int, default=1000)
    _format_args(c)

    f = sub.add_parser("freq", help="Parry-measure digit frequencies and their defects")
    f.add_argument("--slope", required=True)
    f.add_argument("--a", type=int, default=0)
    f.add_argument("--b", type=int, default=1)
    f.add_argument("--bits", type=int, default=128)
    f.add_argument("--birkhoff", action="store_true", help="add the seeded Birkhoff cross-check")
    f.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _format_args(f)

    m = sub.add_parser("mahler", help="check the Mahler-series identity for sturmian_beta")
    m.add_argument("--slope", required=True)
    m.add_argument("--a", type=int, default=0)
    m.add_argument("--b", type=int, default=1)
    m.add_argument("--bits", type=int, default=512)
    _format_args(m)

    k = sub.add_parser("check", help="run a check suite")
    k.add_argument("suite", choices=("acceptance",))
    k.add_argument("--only", help="comma-separated criterion numbers")
    _format_args(k)
    return p


def _parse_rho(text: str):
    from fractions import Fraction

    if ":" in text:
        return parse_number(text)
    return Fraction(text)


def make_beta(cfg: RunConfig, bits: int = 128) -> BetaNumber:
    given = [x for x in (cfg.beta, cfg.dbeta1, cfg.slope) if x is not None]
    if len(given) != 1:
        raise SturmError("give exactly one of --beta, --dbeta1, --slope")
    if cfg.beta is not None:
        text = cfg.beta.strip()
        if text.isdigit():
            return BetaNumber.from_integer(int(text))
        return BetaNumber.from_slope(parse_number(text))
    if cfg.dbeta1 is not None:
        if not cfg.dbeta1.isdigit():
            raise SturmError("--dbeta1 takes a digit string such as 11")
        return solve_beta(cfg.dbeta1, bits, verify_depth=cfg.verify_depth)
    return sturmian_beta(parse_slope(cfg.slope), cfg.a, cfg.b, bits,
                         verify_depth=cfg.verify_depth)


# ---------------------------------------------------------------- commands
def cmd_word(cfg: RunConfig) -> str:
    if cfg.kind == "fibonacci":
        text = fibonacci_word(cfg.n).to_str()
    else:
        if cfg.slope is None:
            raise SturmError(f"--slope is required for --kind {cfg.kind}")
        alpha = parse_slope(cfg.slope)
        if cfg.kind == "characteristic":
            w = characteristic(alpha)
        elif cfg.kind == "upper":
            w = upper_mechanical(alpha, _parse_rho(cfg.rho))
        else:
            w = lower_mechanical(alpha, _parse_rho(cfg.rho))
        text = w.to_str(cfg.n)
    if cfg.format == "json":
        return json.dumps({"kind": cfg.kind, "n": cfg.n, "word": text})
    return text


def cmd_solve(cfg: RunConfig) -> str:
    beta = make_beta(cfg, cfg.bits)
    v = beta.ball(cfg.bits)
    out = {"beta": v.to_json(max(40, cfg.bits * 30 // 100)), "floor": beta.floor,
           "bits": cfg.bits, "verify_depth": cfg.verify_depth}
    if cfg.format == "json":
        return json.dumps(out)
    return (f"beta   = {out['beta']['midpoint']}\n"
            f"radius = {out['beta']['radius']}\n"
            f"floor  = {beta.floor}\n"
            f"d_beta(1) re-expansion checked to {cfg.verify_depth} digits")


def cmd_orbit(cfg: RunConfig) -> str:
    beta = make_beta(cfg)
    rec = orbit(beta, cfg.n)
    if cfg.format == "json":
        return json.dumps({"n": cfg.n, "method": rec.method,
                           "running_min": rec.running_min.to_json(),
                           "running_max": rec.running_max.to_json(),
                           "diam_estimate": (rec.running_max - rec.running_min).to_json(),
                           "truncated_at": rec.truncated_at})
    return rec.to_csv().rstrip("\n")


def cmd_classify(cfg: RunConfig) -> str:
    ev = classify(make_beta(cfg), cfg.depth)
    if cfg.format == "json":
        return json.dumps(ev.to_json())
    exact = ev.verdict.value.endswith("detected")
    qual = "" if exact else f" (consistent to depth {ev.depth})"
    lines = [f"{ev.verdict.value}{qual}"]
    lines += [f"  {k}: {v}" for k, v in ev.witness.items()]
    return "\n".join(lines)


def cmd_freq(cfg: RunConfig) -> str:
    rep = frequency_report(parse_slope(cfg.slope), cfg.a, cfg.b, cfg.bits,
                           birkhoff=cfg.birkhoff, seed=cfg.seed)
    j = rep.to_json()
    if cfg.format == "json":
        return json.dumps(j)
    lines = [f"case {j['case']}, asserting {j['asserted']} > 0"]
    for k in ("F", "I", "J", "mu_b", "mu_a", "defect_b", "defect_a"):
        lines.append(f"{k:9s}= {j[k]['midpoint'][:32]} +/- {j[k]['radius']}")
    if rep.birkhoff:
        lines.append(f"birkhoff  seed {cfg.seed}: max |freq - mu| = "
                     f"{rep.birkhoff['max_abs_error']:.3g}")
    lines += [f"note: {n}" for n in j["notes"]]
    return "\n".join(lines)


def cmd_mahler(cfg: RunConfig) -> str:
    rep = identity_check(parse_slope(cfg.slope), cfg.a, cfg.b, cfg.bits)
    j = rep.to_json()
    if cfg.format == "json":
        return json.dumps(j)
    lines = [f"{k:13s}= {v['midpoint'][:45]} +/- {v['radius']}" for k, v in j["values"].items()]
    lines.append(f"max pairwise gap {j['max_gap']}")
    return "\n".join(lines)


def cmd_check(cfg: RunConfig) -> tuple:
    only = [int(x) for x in cfg.only.split(",")] if cfg.only else None
    results = acceptance.run_all(only)
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        text = json.dumps({"passed": ok, "criteria": [r.to_json() for r in results]})
    else:
        passed = sum(r.passed for r in results)
        text = "\n".join([r.line() for r in results] + [f"{passed}/{len(results)} passed"])
    return text, 0 if ok else 1


COMMANDS = {"word": cmd_word, "solve": cmd_solve, "orbit": cmd_orbit, "classify": cmd_classify,
            "freq": cmd_freq, "mahler": cmd_mahler, "check": cmd_check}


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_namespace(ns)
    try:
        result = COMMANDS[cfg.command](cfg)
    except SturmError as exc:
        err = {"error": exc.reason, "message": str(exc), "exit_code": exc.exit_code,
               "command": cfg.command}
        print(json.dumps(err), file=sys.stderr)
        return exc.exit_code
    text, code = result if isinstance(result, tuple) else (result, 0)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

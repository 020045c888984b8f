"""Independent mpmath oracles for the frozen constants in tests/oracles.py.

Nothing from sturmbeta is imported: words are generated with mpmath floors
and roots are found with mpmath's bisection solver.
"""
import argparse

import mpmath as mp


def upper_word(alpha, n):
    """s'_{alpha,0}(k) = ceil(alpha (k+1)) - ceil(alpha k) for k < n."""
    return [int(mp.ceil(alpha * (k + 1)) - mp.ceil(alpha * k)) for k in range(n)]


def solve(word):
    """Root of sum s_k x^-(k+1) = 1 on [s_0, s_0 + 1]."""
    f = lambda x: mp.fsum(d * x ** -(k + 1) for k, d in enumerate(word)) - 1
    return mp.findroot(f, (word[0] + mp.mpf("1e-30"), word[0] + 1), solver="anderson")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dps", type=int, default=60)
    args = p.parse_args()
    mp.mp.dps = args.dps + 20
    tau = (1 + mp.sqrt(5)) / 2
    alpha = tau ** -2
    n = int(args.dps * 3.33 / 0.6) + 40
    s = upper_word(alpha, n)
    out = {"tau": tau, "F(tau)": 1 + (tau - 1) / tau,
           "h_tau(1/2)": (1 + 1 / tau) / (1 + (tau - 1) / tau)}
    for a, b in ((0, 1), (1, 3)):
        word = [a + (b - a) * d for d in s]
        beta = solve(word)
        out[f"beta(tau^-2,{a},{b})"] = beta
        out[f"identity(tau^-2,{a},{b})"] = (1 - (b - a) / beta - a / (beta - 1)) / (b - a)
    for a, b, alpha_ in ((0, 1, mp.sqrt(2) - 1), (0, 1, (mp.sqrt(3) - 1) / 2)):
        word = [a + (b - a) * d for d in upper_word(alpha_, n)]
        out[f"beta({mp.nstr(alpha_, 8)},{a},{b})"] = solve(word)
    for k, v in out.items():
        print(f"{k:28s} {mp.nstr(v, args.dps)}")


if __name__ == "__main__":
    main()

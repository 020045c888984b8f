from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sturmbeta.beta_expansion import (BetaNumber, ClassVerdict, ExpansionStatus, classify,
                                      confine_orbit, d_beta, diam_estimate, is_admissible, is_expansion_of_one,
                                      is_sturmian_number, orbit, quasi_greedy, solve_beta,
                                      sturmian_beta, t_beta_step, word_value)
from sturmbeta.errors import NotExpansionOfOne, PrecisionExhausted
from sturmbeta.numeric import GOLDEN, SQRT2_MINUS_1, TAU_INV2, CFStream, QuadraticSurd, RealBall
from sturmbeta.words import (DigitWord, Order, lex_compare, lower_mechanical, rename, shift,
                             upper_mechanical)

from oracles import (BETA_SQRT2_01, BETA_TAU2_01, BETA_TAU2_13, LOWER_26, UPPER_26, RENAMED_13_27,
                     TAU, close)


@pytest.fixture(scope="module")
def tau():
    return solve_beta("11")


@pytest.fixture(scope="module")
def beta01():
    return sturmian_beta(TAU_INV2, 0, 1)


@pytest.fixture(scope="module")
def beta13():
    return sturmian_beta(TAU_INV2, 1, 3)


def rational_beta(x):
    x = Fraction(x)
    return BetaNumber(RealBall.exact(x, 256), poly=(-x, Fraction(1)),
                      refiner=lambda bits: RealBall.exact(x, bits))


def greedy_oracle(beta, x, n):
    """Greedy digits of a rational x for a rational beta, in exact arithmetic."""
    out = []
    for _ in range(n):
        y = beta * x
        d = y.numerator // y.denominator
        out.append(d)
        x = y - d
    return out


# ------------------------------------------------------------------ steps
def test_t_beta_step_fixed_point(tau):
    assert t_beta_step(tau, RealBall.exact(0)) == (0, RealBall.exact(0)) or \
        t_beta_step(tau, RealBall.exact(0))[1].contains(0)


def test_t_beta_step_golden(tau):
    d, nxt = t_beta_step(tau, RealBall.exact(1, 128))
    assert d == 1 and nxt.contains(Fraction(TAU) - 1) or abs(nxt.mid - (Fraction(TAU) - 1)) < 1e-40


def test_t_beta_step_at_discontinuity(tau):
    # tau * (1/tau) = 1 exactly: the ball straddles the digit boundary
    with pytest.raises(PrecisionExhausted):
        t_beta_step(tau, tau.ball(128).inverse())


def test_d_beta_examples(beta01):
    assert d_beta(beta01, 0, 20).to_str() == "0" * 20
    assert d_beta(BetaNumber.from_integer(2), Fraction(1, 3), 8).to_str() == "01010101"
    assert d_beta(beta01, lambda b: 1 - b.inverse(), 26).to_str() == LOWER_26
    assert d_beta(beta01, 1, 1)[0] == 1


@given(st.integers(2, 40), st.integers(1, 30), st.fractions(0, 1, max_denominator=500))
def test_d_beta_matches_exact_greedy_for_rational_beta(p, q, x):
    beta = Fraction(p + q, q) if p + q > q else Fraction(2)
    assert d_beta(rational_beta(beta), x, 25).prefix(25) == tuple(greedy_oracle(beta, x, 25))


# -------------------------------------------------------- expansion of one
def test_is_expansion_of_one():
    assert is_expansion_of_one(upper_mechanical(TAU_INV2, 0), 1000)
    v = is_expansion_of_one(DigitWord.periodic([1]), 100)
    assert v.status is ExpansionStatus.NOT_STRICT and v.witness == 1
    v = is_expansion_of_one(lower_mechanical(TAU_INV2, 0), 100)
    assert v.status is ExpansionStatus.FAILS
    assert is_expansion_of_one(DigitWord.padded("11"))
    assert is_expansion_of_one(DigitWord.padded("1101"))
    assert is_expansion_of_one(DigitWord.padded("1011")).status is ExpansionStatus.FAILS
    assert is_expansion_of_one(DigitWord.periodic([2, 1, 0])).witness == 3


def test_quasi_greedy():
    assert quasi_greedy("11").to_str(8) == "10101010"
    assert quasi_greedy("2").to_str(5) == "11111"
    assert quasi_greedy(DigitWord.padded("201")).to_str(6) == "200200"


def test_admissibility(tau, beta01):
    d = beta01.expansion_of_one()
    for k in (0, 1, 2, 5, 13, 100):
        assert is_admissible(shift(d, k), beta01, 500)
    assert is_admissible(lower_mechanical(TAU_INV2, 0), beta01, 1000)
    v = is_admissible(DigitWord.periodic([1]), beta01, 100)
    # oracle: first n with sigma^n(111...) > d_beta(1) is n = 0, since 11 > 10
    assert not v and v.violation == 0
    v = is_admissible(DigitWord.padded("0011"), tau)
    assert not v and v.violation == 2 and v.bound == "quasi-greedy"


# ------------------------------------------------------------------ solver
def test_solve_golden(tau):
    assert close(tau.value, TAU) and tau.value.rad < Fraction(1, 2 ** 128)
    assert solve_beta("11", 400).value.rad < Fraction(1, 2 ** 400)


def test_solve_integer():
    two = solve_beta("2")
    assert two.value.is_exact() and two.value.mid == 2


def test_solve_digits_1_3(beta13):
    assert 3 < beta13.value.mid < 4 and beta13.floor == 3
    assert close(beta13.value, BETA_TAU2_13)
    assert beta13.expansion_of_one().to_str(27) == RENAMED_13_27
    assert solve_beta(rename(upper_mechanical(TAU_INV2, 0), 1, 3)).value.overlaps(beta13.value)


def test_sturmian_beta_values(beta01):
    assert close(beta01.value, BETA_TAU2_01)
    assert close(sturmian_beta(SQRT2_MINUS_1, 0, 1).value, BETA_SQRT2_01)
    assert d_beta(beta01, 1, 26).to_str() == UPPER_26


def test_solve_rejects_non_expansions():
    with pytest.raises(NotExpansionOfOne):
        solve_beta("0111")
    with pytest.raises(NotExpansionOfOne):
        solve_beta(lower_mechanical(TAU_INV2, 0))
    with pytest.raises(NotExpansionOfOne):
        solve_beta(DigitWord.periodic([1, 0]))


def test_round_trip_long(beta13):
    assert d_beta(beta13, 1, 800).prefix(800) == beta13.expansion_of_one().prefix(800)


@st.composite
def cf_pairs(draw):
    heads = [(0, 2) + tuple(draw(st.lists(st.integers(1, 4), min_size=1, max_size=4)))
             for _ in range(2)]
    return CFStream(heads[0], (1,)), CFStream(heads[1], (1,))


@settings(max_examples=25)
@given(cf_pairs())
def test_sturmian_beta_monotone_in_slope(pair):
    a1, a2 = pair
    if abs(float(a1) - float(a2)) < 1e-3:
        return
    b1, b2 = sturmian_beta(a1, 0, 1, verify_depth=16), sturmian_beta(a2, 0, 1, verify_depth=16)
    assert (b1.value < b2.value) == (float(a1) < float(a2))


@settings(max_examples=200)
@given(st.integers(1, 999), st.integers(1, 999), st.integers(1, 3), st.integers(1, 3))
def test_order_correspondence_rational(q1, q2, k1, k2):
    """beta < gamma iff d_beta(1) < d_gamma(1)."""
    b1, b2 = 1 + Fraction(k1 * q1, 1000), 1 + Fraction(k2 * q2, 1000)
    if abs(b1 - b2) < Fraction(1, 1000):
        return
    o = lex_compare(rational_beta(b1).expansion_of_one(), rational_beta(b2).expansion_of_one(),
                    10_000)
    assert o is (Order.LESS if b1 < b2 else Order.GREATER)


# ------------------------------------------------------------------ orbits
def test_integer_orbit():
    rec = orbit(BetaNumber.from_integer(2), 5)
    assert [p.mid for p in rec.points] == [1, 0, 0, 0, 0, 0]
    assert diam_estimate(BetaNumber.from_integer(2), 5).mid == 1


def test_orbit_confinement(beta01):
    conf = confine_orbit(beta01, 3000, lower_mechanical(TAU_INV2, 0))
    low = (1 - beta01.value.inverse()).lower_fraction()
    assert conf.ok
    assert all(p.lower_fraction() >= low - p.rad and p.upper_fraction() <= 1 + p.rad
               for p in conf.points)
    # points near the accumulation point 1 - 1/beta need the digit comparison
    assert 987 in conf.settled_by_digits
    d = conf.running_max - conf.running_min
    target = beta01.value.inverse()
    assert target.lower_fraction() - Fraction(1, 1000) <= d.upper_fraction()
    assert d.lower_fraction() <= target.upper_fraction()


def test_raw_orbit_balls_are_consistent_with_confinement(beta01):
    low = 1 - beta01.value.inverse()
    assert not any(p < low for p in orbit(beta01, 3000).points)


def test_diameter_digits_1_3(beta13):
    d = diam_estimate(beta13, 5000)
    target = 2 * beta13.value.inverse()
    assert target.lower_fraction() - Fraction(1, 1000) <= d.upper_fraction()
    assert d.lower_fraction() <= target.upper_fraction()


def test_word_value_of_lower_bound(beta13):
    x = word_value(rename(lower_mechanical(TAU_INV2, 0), 1, 3), beta13.ball(200), 128)
    assert x.overlaps(1 - 2 * beta13.ball(200).inverse()) and x.rad < Fraction(1, 2 ** 120)


def test_orbit_methods_agree(beta01):
    fwd = BetaNumber(beta01.value, refiner=beta01.ball)       # no word: forward iteration
    a, b = orbit(beta01, 200), orbit(fwd, 200)
    assert b.method == "ball" and a.method == "word"
    assert all(p.overlaps(q) for p, q in zip(a.points, b.points))


def test_orbit_csv(beta01):
    csv = orbit(beta01, 3).to_csv().splitlines()
    assert csv[0] == "n,digit,midpoint,radius" and csv[1].startswith("0,1,1,")


# -------------------------------------------------------- sturmian, classes
def test_is_sturmian_number(tau, beta01):
    ev = is_sturmian_number(beta01, 2000)
    assert ev.sturmian and ev.maximal and ev.orbit_min_ok
    assert not is_sturmian_number(tau).sturmian
    ev = is_sturmian_number(sturmian_beta(TAU_INV2, 0, 3), 2000)
    assert ev.sturmian and ev.maximal is False and ev.orbit_min_ok is False


def test_classify(tau, beta01):
    assert classify(tau, 100).verdict is ClassVerdict.C1_DETECTED
    assert classify(BetaNumber.from_integer(2), 100).verdict is ClassVerdict.C1_DETECTED
    assert classify(BetaNumber.from_surd(GOLDEN)).witness == {"d_beta(1)": "11"}
    ev = classify(beta01, 1000)
    assert ev.verdict is ClassVerdict.C3_CONSISTENT
    assert ev.witness["max_zero_run"] == 2
    # shortest admissible word missing from d_beta(1) = 1c_alpha
    assert ev.witness["missing_factor"] == "000"


def test_classify_eventually_periodic():
    # tau^2 = (3 + sqrt5)/2 has d(1) = 2 1 1 1 ...
    ev = classify(BetaNumber.from_surd(QuadraticSurd(3, 1, 5, 2)), 50)
    assert ev.verdict is ClassVerdict.C2_DETECTED
    assert ev.witness == {"preperiod": "2", "period": "1"}


def test_json_shape(beta01):
    j = classify(beta01, 200).to_json()
    assert set(j) == {"depth", "verdict", "witness"} and j["verdict"] == "C3_consistent"

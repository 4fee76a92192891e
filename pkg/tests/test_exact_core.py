"""Core exact arithmetic: rationals, parametric polynomials, jet polynomials."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from kdvtau.rings import (QQ, ParamPoly, PolyRing, double_factorial, poly_divmod_univar,
                          rat, rat_str)
from kdvtau.diffpoly import DPOLY, DiffPoly


def test_double_factorial_convention():
    assert double_factorial(-1) == 1
    assert double_factorial(1) == 1
    assert double_factorial(5) == 15
    assert double_factorial(7) == 105


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6),
       st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_matches_fraction(p, q, r, s):
    # independent bignum path: stdlib Fraction vs the gmpy2-backed scalars
    a, b = rat(p, q), rat(r, s)
    fa, fb = Fraction(p, q), Fraction(r, s)
    for got, want in [(a + b, fa + fb), (a * b, fa * fb), (a - b, fa - fb)]:
        assert got.numerator == want.numerator
        assert got.denominator == want.denominator


def test_rat_str():
    assert rat_str(rat(3, 1)) == "3"
    assert rat_str(rat(-5, 8)) == "-5/8"


def test_parampoly_basics():
    R = PolyRing(["C"])
    C = R.gen("C")
    p = (C + 1) * (2 * C + 5) * C
    assert p.degree("C") == 3
    assert p.evaluate({"C": rat(1, 8)}) == rat(1, 8) * rat(9, 8) * rat(21, 4)
    q, r = poly_divmod_univar(p, C + 1, "C")
    assert not r.terms
    assert q == C * (2 * C + 5)


def test_parampoly_multivar():
    R = PolyRing(["g2", "g3", "X"])
    g2, X = R.gen("g2"), R.gen("X")
    p = X ** 3 - g2 * X * rat(1, 4)
    assert p.deriv("X") == 3 * X ** 2 - g2 * rat(1, 4)
    assert p.coefficient_in("X", 1) == -g2 * rat(1, 4)


def test_dpoly_derive_generators():
    assert DiffPoly.jet(0).derive() == DiffPoly.jet(1)
    u0 = DiffPoly.jet(0)
    assert (u0 * u0).derive() == 2 * DiffPoly.jet(0) * DiffPoly.jet(1)


def test_dpoly_derive_omega11():
    # d( u0^3/3 + u1^2/24 + u0 u2/6 + u4/144 )
    u = DiffPoly.jet
    p = u(0) ** 3 * rat(1, 3) + u(1) ** 2 * rat(1, 24) + u(0) * u(2) * rat(1, 6) \
        + u(4) * rat(1, 144)
    want = u(0) ** 2 * u(1) + u(1) * u(2) * rat(1, 12) + u(1) * u(2) * rat(1, 6) \
        + u(0) * u(3) * rat(1, 6) + u(5) * rat(1, 144)
    assert p.derive() == want


def test_dpoly_grading_raised_by_derive():
    u = DiffPoly.jet
    p = u(0) ** 2 * u(3) + u(1) * u(2)
    assert p.gradings() == {3}
    assert p.derive().gradings() == {4}


def test_substitute_jets():
    u = DiffPoly.jet
    omega11 = u(0) ** 3 * rat(1, 3) + u(1) ** 2 * rat(1, 24) + u(0) * u(2) * rat(1, 6) \
        + u(4) * rat(1, 144)
    val = omega11.substitute_jets([rat(0), rat(1), rat(0), rat(0), rat(0)], QQ)
    assert val == rat(1, 24)
    R = PolyRing(["C", "X"])
    cx = R.gen("C") * R.gen("X")
    assert u(0).substitute_jets([cx], R) == cx


def test_substitute_jets_missing_index():
    u = DiffPoly.jet
    try:
        (u(0) * u(2)).substitute_jets([rat(1)], QQ)
    except IndexError:
        pass
    else:
        raise AssertionError("expected IndexError for a missing jet")


def _random_dpoly(rng, max_jet=3, nterms=4):
    p = DiffPoly.zero()
    for _ in range(nterms):
        m = DiffPoly.const(rat(rng.randint(-5, 5)))
        for _ in range(rng.randint(0, 2)):
            m = m * DiffPoly.jet(rng.randint(0, max_jet))
        p = p + m
    return p


def test_chain_rule_consistency():
    # substituting power-series jets commutes with the derivation
    from kdvtau.series import XSeries, XSeriesRing
    rng = random.Random(7)
    ring = XSeriesRing("x", QQ, 8)
    # jets of f(x) = 1 + x + 3 x^2 (truncated), u_i = f^{(i)}
    f = XSeries("x", QQ, {0: rat(1), 1: rat(1), 2: rat(3)}, 8)
    jets = [f]
    for _ in range(9):
        jets.append(jets[-1].derivative())
    for _ in range(12):
        p = _random_dpoly(rng)
        lhs = p.derive().substitute_jets(jets, ring)
        rhs = p.substitute_jets(jets, ring).derivative()
        assert lhs.eq_window(rhs)

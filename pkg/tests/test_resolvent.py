"""Resolvent recursion, KdV flows, and their verification identities."""

import pytest

from kdvtau.diffpoly import DPOLY, DiffPoly
from kdvtau.rings import QQ, PolyRing, rat, double_factorial
from kdvtau.resolvent import (b_series, kdv_Q, kdv_flow_apply, kdv_flow_u0,
                              mr_assemble, mr_b_coeffs, mr_verify, mr_verify_at_jets,
                              resolvent_at_jets, specialize_b)

u = DiffPoly.jet


def test_first_b_coefficients():
    bs = mr_b_coeffs(2)
    assert bs[0] == DiffPoly.const(1)
    assert bs[1] == u(0)
    assert bs[2] == u(0) ** 2 * rat(3, 2) + u(2) * rat(1, 4)
    # 15 * (u0^3/6 + u1^2/24 + u0 u2/12 + u4/240)
    want = u(0) ** 3 * rat(5, 2) + u(1) ** 2 * rat(5, 8) + u(0) * u(2) * rat(5, 4) \
        + u(4) * rat(1, 16)
    assert bs[3] == want


def test_b_degree_zero_part():
    # with u_{>=1} killed, b_k = (2k+1)!!/(k+1)! u0^(k+1)
    bs = mr_b_coeffs(6)
    for k in range(0, 7):
        jets = [u(0)] + [DiffPoly.zero()] * (2 * k + 2)
        got = bs[k + 1].substitute_jets(jets, DPOLY)
        fact = 1
        for i in range(2, k + 2):
            fact *= i
        assert got == u(0) ** (k + 1) * rat(double_factorial(2 * k + 1), fact)


def test_b_top_jet_index():
    bs = mr_b_coeffs(5)
    for k in range(0, 6):
        assert bs[k + 1].max_jet() == 2 * k


def test_lenard_magri_demoted_identity():
    # d(b_k) = 2 u0 d(b_{k-1}) + u1 b_{k-1} + (1/4) d^3(b_{k-1})
    bs = mr_b_coeffs(6)
    for k in range(0, 7):
        lhs = bs[k + 1].derive()
        prev = bs[k]
        rhs = 2 * u(0) * prev.derive() + u(1) * prev + DPOLY.scale(prev.derive_n(3), rat(1, 4))
        assert lhs == rhs


def test_mr_assemble_entries():
    R = mr_assemble(1)
    assert R.b.coeff(0) == DiffPoly.const(1)
    assert R.b.coeff(-1) == u(0)
    assert R.a.coeff(-1) == u(1) * rat(1, 2)
    assert R.c.coeff(1) == DiffPoly.const(1)
    assert R.c.coeff(0) == -u(0)


def test_mr_verify_zero_residuals():
    for rep in mr_verify(3):
        assert rep.ok, rep


def test_mr_verify_depth8_gbgw_jets():
    ring = PolyRing(["C"])
    C = ring.gen("C")
    fact = 1
    jets = []
    for i in range(2 * 8 + 3):
        fact_i = 1
        for j in range(2, i + 2):
            fact_i *= j
        jets.append(C * rat(fact_i))
    for rep in mr_verify_at_jets(8, jets, ring):
        assert rep.ok, rep


def test_negative_control_corrupted_coefficient():
    # corrupting b_2 must leave a visible residual
    bs = mr_b_coeffs(3)
    bad = dict(enumerate(bs))
    bad[3] = bs[3] + DiffPoly.const(1)
    from kdvtau.series import TruncSeries
    b = TruncSeries("lam", DPOLY, {-(k + 1): bad[k + 1] for k in range(-1, 3)}, -4)
    lam = TruncSeries.gen("lam", DPOLY, b.lo)
    u0s = TruncSeries("lam", DPOLY, {0: u(0)}, b.lo)
    d = lambda s: s.map_coeffs(lambda p: p.derive())
    quad = b * d(d(b)) - d(b) * d(b).scale(rat(1, 2)) \
        - (lam - u0s.scale(2)) * b * b * rat(2) + lam.scale(2)
    nonzero = {e for e, c in quad.coeffs.items() if c}
    assert -3 in nonzero


def test_kdv_Q_values():
    assert kdv_Q(0) == DiffPoly.zero()
    assert kdv_Q(1) == u(3) * rat(1, 12)
    assert kdv_Q(2) == (2 * u(1) * u(2) + u(0) * u(3)) * rat(1, 12) + u(5) * rat(1, 240)
    q3 = (u(1) ** 3 + 4 * u(0) * u(1) * u(2) + u(0) ** 2 * u(3)) * rat(1, 24) \
        + (5 * u(2) * u(3) + 3 * u(1) * u(4) + u(0) * u(5)) * rat(1, 240) \
        + u(7) * rat(1, 6720)
    assert kdv_Q(3) == q3


def test_kdv_flow_examples():
    assert kdv_flow_apply(0, u(5)) == u(6)
    assert kdv_flow_u0(1) == u(0) * u(1) + u(3) * rat(1, 12)
    assert kdv_flow_u0(2) == u(0) ** 2 * u(1) * rat(1, 2) \
        + (2 * u(1) * u(2) + u(0) * u(3)) * rat(1, 12) + u(5) * rat(1, 240)


def test_flows_commute():
    for k in range(0, 4):
        for l in range(k + 1, 4):
            a = kdv_flow_apply(k, kdv_flow_u0(l))
            b = kdv_flow_apply(l, kdv_flow_u0(k))
            assert a == b, (k, l)


def test_specialize_b_gbgw_matches_rho():
    # jets of C/(x-1)^2 at x=0 are u_i = (i+1)! C; the resulting b-series
    # coefficients are (2k+1)!!/(k+1)! prod_{i<=k} (C + i(i+1)/2)
    ring = PolyRing(["C"])
    C = ring.gen("C")
    jets = []
    for i in range(12):
        f = 1
        for j in range(2, i + 2):
            f *= j
        jets.append(C * rat(f))
    (b,) = specialize_b(4, jets, ring)
    assert b.coeff(0) == ring.one
    assert b.coeff(-1) == C
    assert b.coeff(-2) == C * (C + 1) * rat(3, 2)
    prod = C * (C + 1) * (C + 3)
    assert b.coeff(-3) == prod * rat(double_factorial(5), 6)


def test_resolvent_at_jets_trace():
    from kdvtau.series import TruncSeries
    jets = [rat(0), rat(1)] + [rat(0)] * 12
    R = resolvent_at_jets(5, jets, QQ)
    lam = TruncSeries.gen("lam", QQ, R.b.lo)
    tr2 = (R * R).trace() - lam.scale(2)
    assert all(c == 0 for c in tr2.coeffs.values())

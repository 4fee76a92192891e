"""Tau-structure elements and the cyclic n-point engine."""

import pytest

from kdvtau.diffpoly import DPOLY, DiffPoly
from kdvtau.rings import QQ, PolyRing, rat
from kdvtau.resolvent import kdv_flow_apply, resolvent_at_jets
from kdvtau.tau import (TRACE_SHAPE, npoint_correlator, npoint_mixed, npoint_series,
                        omega_multi, omega_pq, trace_edge_provider)

u = DiffPoly.jet

WK_JETS = [rat(0), rat(1)] + [rat(0)] * 40


def wk_node_provider(lo):
    return resolvent_at_jets(max(0, -lo - 1) + 1, WK_JETS, QQ)


def test_omega_00():
    assert omega_pq(0, 0) == u(0)


def test_omega_01():
    assert omega_pq(0, 1) == u(0) ** 2 * rat(1, 2) + u(2) * rat(1, 12)


def test_omega_02():
    want = u(0) ** 3 * rat(1, 6) + u(1) ** 2 * rat(1, 24) + u(0) * u(2) * rat(1, 12) \
        + u(4) * rat(1, 240)
    assert omega_pq(0, 2) == want


def test_omega_11():
    want = u(0) ** 3 * rat(1, 3) + u(1) ** 2 * rat(1, 24) + u(0) * u(2) * rat(1, 6) \
        + u(4) * rat(1, 144)
    assert omega_pq(1, 1) == want


def test_omega_symmetry():
    for p in range(0, 5):
        for q in range(p, 5):
            assert omega_pq(p, q) == omega_pq(q, p), (p, q)


def test_omega_vanishes_at_zero():
    for p in range(0, 4):
        for q in range(0, 4):
            om = omega_pq(p, q)
            assert () not in om.terms  # no constant term


def test_omega_degree_zero_part():
    # Omega_{p,q} with u_{>=1} = 0 equals u^(p+q+1)/(p! q! (p+q+1))
    for p in range(0, 4):
        for q in range(0, 4):
            om = omega_pq(p, q)
            jets = [u(0)] + [DiffPoly.zero()] * (2 * (p + q) + 4)
            got = om.substitute_jets(jets, DPOLY)
            fp = 1
            for i in range(1, p + 1):
                fp *= i
            fq = 1
            for i in range(1, q + 1):
                fq *= i
            assert got == u(0) ** (p + q + 1) * rat(1, fp * fq * (p + q + 1))


def test_flow_compatibility():
    # D_r Omega_{p,q} = D_q Omega_{p,r}
    for p in range(0, 4):
        for q in range(0, 4):
            for r in range(0, 4):
                lhs = kdv_flow_apply(r, omega_pq(p, q))
                rhs = kdv_flow_apply(q, omega_pq(p, r))
                assert lhs == rhs, (p, q, r)


def test_omega_multi_basics():
    assert omega_multi([0, 0, 0]) == u(1)
    assert omega_multi([0, 0, 0, 0]) == u(2)


def test_omega_multi_permutation_invariance():
    import itertools
    for ps in [(0, 1, 2), (1, 1, 2), (0, 0, 1, 2)]:
        vals = {omega_multi(list(perm)) for perm in itertools.permutations(ps)}
        assert len(vals) == 1, ps


def test_engine_wk_two_point():
    edge = trace_edge_provider(QQ)
    # <tau_1 tau_1> = 1/24
    val = npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [1, 1])
    assert val == rat(1, 24)
    # dimension-mismatching indices give zero
    assert npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [0, 0]) == 0
    assert npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [2, 0]) == rat(1, 24)


def test_engine_wk_three_point():
    edge = trace_edge_provider(QQ)
    # <tau_0^3> = 1, <tau_0 tau_0 tau_1> = 0 (dim), <tau_1^3> in genus 1 = 1/12
    assert npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [0, 0, 0]) == 1
    assert npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [1, 1, 1]) == rat(1, 12)
    assert npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, [2, 1, 0]) == rat(1, 12)


def test_engine_matches_abstract_route():
    edge = trace_edge_provider(QQ)
    for ps in [(0, 1), (2, 2), (1, 2), (0, 0, 2), (1, 1, 2), (0, 1, 1, 1)]:
        om = omega_multi(list(ps)).substitute_jets(WK_JETS, QQ)
        got = npoint_correlator(wk_node_provider, edge, TRACE_SHAPE, QQ, list(ps))
        assert got == om, ps


def test_engine_gbgw_symbolic_two_point():
    ring = PolyRing(["C"])
    C = ring.gen("C")
    jets = []
    for i in range(40):
        f = 1
        for j in range(2, i + 2):
            f *= j
        jets.append(C * rat(f))
    node = lambda lo: resolvent_at_jets(max(0, -lo - 1) + 1, jets, ring)
    edge = trace_edge_provider(ring)
    got = npoint_correlator(node, edge, TRACE_SHAPE, ring, [1, 1])
    assert got == C * (C + 1) * (2 * C + 5) * rat(1, 6)
    got = npoint_correlator(node, edge, TRACE_SHAPE, ring, [0, 0])
    assert got == C


def test_windowed_regularity_two_point():
    edge = trace_edge_provider(QQ)
    ms = npoint_series(wk_node_provider, edge, TRACE_SHAPE, QQ, 2,
                       lo=[-6, -6], hi=3)
    for e, c in ms.coeffs.items():
        assert e[0] <= -1 and e[1] <= -1, (e, c)
    assert ms.coeff((-2, -2)) == rat(3, 1) * rat(3, 1) * rat(1, 24)


def test_windowed_regularity_three_point():
    edge = trace_edge_provider(QQ)
    ms = npoint_series(wk_node_provider, edge, TRACE_SHAPE, QQ, 3,
                       lo=[-4, -4, -4], hi=2)
    for e in ms.coeffs:
        assert all(x <= -1 for x in e), e
    # coefficient of prod lam_i^-1 is (1!!)^3 <tau_0^3> = 1
    assert ms.coeff((-1, -1, -1)) == 1


def test_mixed_series_route():
    edge = trace_edge_provider(QQ)
    s = npoint_mixed(wk_node_provider, edge, TRACE_SHAPE, QQ, [1, 1], free_lo=-5)
    # coefficient of lam^-p-1 is (2p+1)!! * Omega_{1,1,p}(WK)
    for p in range(0, 4):
        om = omega_multi([1, 1, p]).substitute_jets(WK_JETS, QQ)
        from kdvtau.rings import double_factorial
        assert s.coeff(-p - 1) == om * rat(double_factorial(2 * p + 1)), p

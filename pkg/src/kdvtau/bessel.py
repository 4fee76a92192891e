"""Generalized BGW / Theta-class solution family (initial data C/(x-1)^2).

The resolvent entry b depends on lambda and x only through
zeta = lambda (x-1)^2 and equals a terminating-or-formal 3F0-type series
rho(zeta) with coefficients in Q[C].  At x = 0 (zeta = lambda) the full
resolvent matrix is assembled from three shifted hypergeometric series;
all half-integer parameter shifts enter through conjugate Pochhammer pairs,
so every stored coefficient lives in Q[C] (the square root of 1 - 8C never
appears by itself).

Symbolic C is the default mode: one computation certifies the whole
parameter family, and C = 1/8 (Theta-class intersection numbers) is a
specialization.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from .rings import QQ, ParamPoly, PolyRing, Ring, double_factorial, rat
from .series import Mat2, TruncSeries
from .tau import TRACE_SHAPE, Target, npoint_correlator, npoint_mixed, npoint_series, \
    trace_edge_provider

C_RING = PolyRing(["C"])
C = C_RING.gen("C")


def bessel_ring(c_value=None):
    """Q[C] for symbolic mode, Q for a concrete rational C."""
    return C_RING if c_value is None else QQ


def _cval(ring: Ring, c_value):
    return C if ring is C_RING else rat(c_value)


def rho_series(depth: int, c_value=None, var: str = "zeta") -> TruncSeries:
    """The normalized resolvent entry b as a series in zeta^-1.

    rho = 1 + sum_{k>=0} (2k+1)!!/(k+1)! prod_{i=0}^{k} (C + i(i+1)/2)
    zeta^(-k-1), generated by rho_k = (C + k(k+1)/2)/(k+1) rho_{k-1}.
    """
    ring = bessel_ring(c_value)
    cv = _cval(ring, c_value)
    coeffs = {0: ring.one}
    rho_prev = ring.one          # rho_{-1}
    for k in range(0, depth + 1):
        rho_k = rho_prev * (cv + rat(k * (k + 1), 2)) * rat(1, k + 1)
        coeffs[-(k + 1)] = ring.scale(rho_k, double_factorial(2 * k + 1))
        rho_prev = rho_k
    return TruncSeries(var, ring, coeffs, -(depth + 1))


def hypergeom_3F0(a, b, c, depth: int, var: str = "zeta") -> TruncSeries:
    """Formal series sum_k (a)_k (b)_k (c)_k / k! zeta^-k over Q.

    Divergent as a function; only ever used as a formal expansion.
    """
    a, b, c = rat(a), rat(b), rat(c)
    coeffs = {0: rat(1)}
    term = rat(1)
    for k in range(1, depth + 1):
        term = term * (a + k - 1) * (b + k - 1) * (c + k - 1) / k
        coeffs[-k] = term
    return TruncSeries(var, QQ, coeffs, -depth)


def g_series(a, depth: int, c_value=None, var: str = "zeta") -> TruncSeries:
    """The conjugate-pair 3F0 series with first parameter ``a``.

    Coefficient of zeta^-k is (a)_k prod_{j=0}^{k-1} ((a+j)^2 - 1/4 + 2C)/k!;
    the pair of shifted parameters a +- s with s^2 = 1/4 - 2C collapses to a
    polynomial in C.
    """
    ring = bessel_ring(c_value)
    cv = _cval(ring, c_value)
    a = rat(a)
    coeffs: Dict[int, Any] = {0: ring.one}
    term = ring.one
    for k in range(1, depth + 1):
        j = k - 1
        pair = cv * 2 + ((a + j) ** 2 - rat(1, 4))   # (a+j)^2 - s^2
        term = term * pair * (a + j) * rat(1, k)
        coeffs[-k] = term
    return TruncSeries(var, ring, coeffs, -depth)


def gbgw_R(depth: int, c_value=None, var: str = "lam") -> Mat2:
    """The resolvent matrix of the family at x = 0 (zeta = lambda).

    Entries: (1,2) = G_{1/2}; (1,1) = -(C/lambda) G_{3/2};
    (2,1) = (lambda - 2C) G_{1/2} - (3C/lambda) G_{3/2}
            - (6C(C+1)/lambda^2) G_{5/2};  (2,2) = -(1,1).
    """
    ring = bessel_ring(c_value)
    cv = _cval(ring, c_value)
    g12 = g_series(rat(1, 2), depth + 2, c_value, var)
    g32 = g_series(rat(3, 2), depth + 2, c_value, var)
    g52 = g_series(rat(5, 2), depth + 2, c_value, var)
    lo = -(depth + 1)

    def shift(series: TruncSeries, k: int, factor) -> TruncSeries:
        return series.shift(k).scale_elem(factor).truncate(lo)

    b = g12.truncate(lo)
    a = shift(g32, -1, ring.scale(cv, -1))
    lam_b = g12.shift(1).truncate(lo)
    c_entry = lam_b + g12.scale_elem(ring.scale(cv, -2)).truncate(lo) \
        + shift(g32, -1, ring.scale(cv, -3)) \
        + shift(g52, -2, ring.scale(cv * (cv + 1), -6))
    return Mat2(a, b, c_entry, -a)


def theta_M(depth: int, var: str = "lam") -> Mat2:
    """Explicit Theta-class matrix over Q.

    M(lambda) = [[0,0],[lambda,0]] + sum_k [(2k-1)!!/2^k]^3 / k! *
                [[k, 1], [-(8k^3+12k^2+4k+1)/(8(k+1)), -k]] lambda^-k.
    """
    lo = -(depth + 1)
    a_c, b_c, c_c, d_c = {}, {}, {1: rat(1)}, {}
    w = rat(1)  # [(2k-1)!!/2^k]^3 / k!
    for k in range(0, depth + 2):
        if k > 0:
            w = w * rat(2 * k - 1, 2) ** 3 / k
        if -k >= lo:
            a_c[-k] = w * k
            b_c[-k] = w
            c_c[-k] = c_c.get(-k, rat(0)) - w * rat(8 * k ** 3 + 12 * k ** 2 + 4 * k + 1,
                                                    8 * (k + 1))
            d_c[-k] = -w * k
    return Mat2(TruncSeries(var, QQ, a_c, lo), TruncSeries(var, QQ, b_c, lo),
                TruncSeries(var, QQ, c_c, lo), TruncSeries(var, QQ, d_c, lo))


def onepoint_closed(p: int, c_value=None):
    """Closed-form 1-point value: prod_{i=0}^p (C + i(i+1)/2) / ((p+1)! (1+2p))."""
    if p < 0:
        raise ValueError("p must be >= 0")
    ring = bessel_ring(c_value)
    cv = _cval(ring, c_value)
    prod = ring.one
    fact = 1
    for i in range(0, p + 1):
        prod = prod * (cv + rat(i * (i + 1), 2))
        fact *= (i + 1)
    return ring.scale(prod, rat(1, fact * (1 + 2 * p)))


def theta_onepoint(g: int):
    """Theta-class 1-point number (2g-1)!!^2 / (8^g g! (2g-1)) for g >= 1."""
    if g < 1:
        raise ValueError("g must be >= 1")
    fact = 1
    for i in range(1, g + 1):
        fact *= i
    df = double_factorial(2 * g - 1)
    return rat(df * df, 8 ** g * fact * (2 * g - 1))


# -- correlators -------------------------------------------------------------

def node_provider(c_value=None, use_theta_matrix: bool = False):
    """Per-variable matrix factory for the trace route of this family."""
    if use_theta_matrix:
        if c_value is not None and rat(c_value) != rat(1, 8):
            raise ValueError("the explicit Theta matrix is the C = 1/8 normalization")
        return lambda lo: theta_M(max(0, -lo - 1) + 1)
    return lambda lo: gbgw_R(max(0, -lo - 1) + 1, c_value)


def correlator(p_list: Sequence[int], c_value=None, use_theta_matrix: bool = False):
    """n-point correlator; n = 1 uses the closed form (string-type equation)."""
    if len(p_list) == 1:
        v = onepoint_closed(p_list[0], c_value)
        return v
    ring = bessel_ring(c_value)
    return npoint_correlator(node_provider(c_value, use_theta_matrix),
                             trace_edge_provider(ring), TRACE_SHAPE, ring, list(p_list))


def second_kind_ode_verify(depth: int, c_value=None):
    """Certificate for the z-chart first-order system of the family.

    M(z) is built from R(lambda) at x = 0 by the entrywise half-power
    shifts M11 = z^-1 R11, M12 = R12, M21 = z^-2 R21, M22 = z^-1 R22 with
    lambda = z^2.  Checks, within truncation:
      * dM/dz + [A(z), M] = 0 with A = [[0, 1], [1 - 2C/z^2, 0]];
      * det M = -1;
      * the boundary matrix is [[0,1],[1,0]].
    Returns a list of (name, ok, detail) triples.
    """
    ring = bessel_ring(c_value)
    cv = _cval(ring, c_value)
    R = gbgw_R(depth, c_value)
    var = "z"
    m11 = R.a.stretch(2, var).shift(-1)
    m12 = R.b.stretch(2, var)
    m21 = R.c.stretch(2, var).shift(-2)
    m22 = R.d.stretch(2, var).shift(-1)
    M = Mat2(m11, m12, m21, m22)
    lo = m21.lo
    A = Mat2(TruncSeries.zero(var, ring, lo),
             TruncSeries.one(var, ring, lo),
             TruncSeries(var, ring, {0: ring.one, -2: ring.scale(cv, -2)}, lo),
             TruncSeries.zero(var, ring, lo))
    results = []
    resid = M.map(lambda s: s.derivative()) + A.commutator(M)
    bad = {}
    for name, entry in zip("abcd", resid.entries()):
        nz = {e: c for e, c in entry.coeffs.items() if not ring.is_zero(c)}
        if nz:
            bad[name] = nz
    results.append(("first-order-system", not bad, bad))
    det = M.det()
    det_bad = {e: c for e, c in (det + 1).coeffs.items() if not ring.is_zero(c)}
    results.append(("determinant-is-minus-one", not det_bad, det_bad))
    boundary_ok = (M.a.coeff(0) == ring.zero and M.b.coeff(0) == ring.one
                   and M.c.coeff(0) == ring.one and M.d.coeff(0) == ring.zero)
    results.append(("boundary-matrix", boundary_ok, None))
    return results

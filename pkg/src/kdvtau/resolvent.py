"""Matrix resolvent of the KdV Lax operator and the KdV flows.

The upper-right entry b(lambda) = sum_{k>=-1} b_k / lambda^{k+1} of the
resolvent is generated by a closed quadratic recursion in the differential
polynomial ring; the other entries follow from

    a = (1/2) d(b),        c = (lambda - 2 u_0) b - (1/2) d^2(b).

The quadratic recursion is constant-free (no antiderivatives are needed);
the linear Lenard-Magri relation

    d(b_k) = 2 u_0 d(b_{k-1}) + u_1 b_{k-1} + (1/4) d^3(b_{k-1})

is demoted to a verification.  Computing b_K requires jets up to u_{2K}.

The commuting derivations D_k of the hierarchy act by

    D_k(u_i) = d^i( d(b_k) / (2k+1)!! ).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, List, Sequence

from .diffpoly import DPOLY, DiffPoly
from .rings import Ring, double_factorial, rat
from .series import Mat2, TruncSeries

_b_cache: List[DiffPoly] = [DiffPoly.const(1)]   # index k+1 holds b_k, b_{-1} = 1
_b_lock = threading.Lock()


def mr_b_coeffs(depth: int) -> List[DiffPoly]:
    """The coefficients b_{-1}, b_0, ..., b_depth of the resolvent entry b.

    b_k is produced by the quadratic recursion

        b_k = sum_{k1+k2=k-2, k1,k2>=-1} [ b_{k1} d^2(b_{k2})/4
                                           - d(b_{k1}) d(b_{k2})/8
                                           + u_0 b_{k1} b_{k2} ]
              - (1/2) sum_{k1>=0, k2>=-1, k1+k2=k-2} b_{k1} b_{k2+1}.
    """
    if depth < -1:
        raise ValueError("depth must be >= -1")
    with _b_lock:
        while len(_b_cache) < depth + 2:
            k = len(_b_cache) - 1
            u0 = DiffPoly.jet(0)
            quarter, eighth, half = rat(1, 4), rat(1, 8), rat(1, 2)
            acc = DiffPoly.zero()
            for k1 in range(-1, k - 1 + 1):
                k2 = k - 2 - k1
                if k2 < -1:
                    continue
                b1, b2 = _b_cache[k1 + 1], _b_cache[k2 + 1]
                acc = acc + DPOLY.scale(b1 * b2.derive_n(2), quarter)
                acc = acc - DPOLY.scale(b1.derive() * b2.derive(), eighth)
                acc = acc + u0 * b1 * b2
            for k1 in range(0, k - 1 + 1):
                k2 = k - 2 - k1
                if k2 < -1:
                    continue
                acc = acc - DPOLY.scale(_b_cache[k1 + 1] * _b_cache[k2 + 2], half)
            _b_cache.append(acc)
        return list(_b_cache[:depth + 2])


def b_series(depth: int, var: str = "lam") -> TruncSeries:
    """b(lambda) = sum_{k=-1}^{depth} b_k lambda^{-k-1} over DiffPoly."""
    bs = mr_b_coeffs(depth)
    return TruncSeries(var, DPOLY, {-(k + 1): bs[k + 1] for k in range(-1, depth + 1)},
                       -(depth + 1))


def mr_assemble(depth: int, var: str = "lam") -> Mat2:
    """The resolvent matrix R(lambda) over differential polynomials.

    Entries: a = d(b)/2, b, c = (lambda - 2 u_0) b - d^2(b)/2, d = -a, as
    lambda-series reliable down to lambda^{-depth-1}.
    """
    bs = mr_b_coeffs(depth)
    lo = -(depth + 1)
    u0 = DiffPoly.jet(0)
    a_c, b_c, c_c = {}, {}, {}
    for k in range(-1, depth + 1):
        bk = bs[k + 1]
        b_c[-(k + 1)] = bk
        a_c[-(k + 1)] = DPOLY.scale(bk.derive(), rat(1, 2))
        # c: lambda*b contributes at exponent -k, the rest at -(k+1)
        c_c[-k] = c_c.get(-k, DiffPoly.zero()) + bk
        c_c[-(k + 1)] = c_c.get(-(k + 1), DiffPoly.zero()) \
            - DPOLY.scale(u0 * bk, rat(2)) - DPOLY.scale(bk.derive_n(2), rat(1, 2))
    a = TruncSeries(var, DPOLY, a_c, lo)
    b = TruncSeries(var, DPOLY, b_c, lo)
    c = TruncSeries(var, DPOLY, {e: v for e, v in c_c.items() if e >= lo}, lo)
    return Mat2(a, b, c, -a)


@dataclass
class ResidualReport:
    """Outcome of an identity verification within a truncation window."""

    name: str
    residuals: dict
    ok: bool

    def __repr__(self):
        if self.ok:
            return "ResidualReport(%s: all zero)" % self.name
        bad = {k: v for k, v in self.residuals.items() if v}
        return "ResidualReport(%s: NONZERO at %s)" % (self.name, sorted(bad))


def _series_residual_zero(s: TruncSeries) -> dict:
    return {e: c for e, c in s.coeffs.items() if not s.ring.is_zero(c)}


def mr_verify(depth: int) -> List[ResidualReport]:
    """Verify the defining identities of the abstract resolvent within truncation.

    Checks (i) the quadratic constraint
    b d^2(b) - (1/2) d(b)^2 - 2 (lambda - 2 u_0) b^2 + 2 lambda = 0,
    (ii) the linear third-order identity
    d^3(b) - 4 (lambda - 2 u_0) d(b) + 4 u_1 b = 0, and
    (iii) Tr R(lambda)^2 = 2 lambda.

    Nonzero residuals are reported, not raised.
    """
    b = b_series(depth)
    ring = DPOLY
    u0_elem = DiffPoly.jet(0)
    u1_elem = DiffPoly.jet(1)
    d = lambda s: s.map_coeffs(lambda p: p.derive())
    var = b.var
    lam = TruncSeries.gen(var, ring, b.lo)
    reports = []

    db = d(b)
    d2b = d(db)
    d3b = d(d2b)
    lam_m2u = lam - TruncSeries(var, ring, {0: u0_elem}, b.lo).scale(2)

    quad = b * d2b - db * db.scale(rat(1, 2)) - lam_m2u * b * b * rat(2) + lam.scale(2)
    res = _series_residual_zero(quad)
    reports.append(ResidualReport("quadratic-constraint", res, not res))

    lin = d3b - lam_m2u * db * rat(4) + TruncSeries(var, ring, {0: u1_elem}, b.lo) * b * rat(4)
    res = _series_residual_zero(lin)
    reports.append(ResidualReport("linear-ode", res, not res))

    R = mr_assemble(depth, var)
    tr2 = (R * R).trace() - lam.scale(2)
    res = _series_residual_zero(tr2)
    reports.append(ResidualReport("trace-square", res, not res))
    return reports


def mr_verify_at_jets(depth: int, jets: Sequence[Any], ring: Ring) -> List[ResidualReport]:
    """Quadratic constraint and trace identity for b specialized on jets."""
    need = 2 * depth + 2
    if len(jets) < need + 1:
        raise IndexError("need jets up to u_%d" % need)
    b, bx, bxx = specialize_b(depth, jets, ring, x_derivs=2)
    var = b.var
    lam = TruncSeries.gen(var, ring, b.lo)
    u0 = TruncSeries(var, ring, {0: jets[0]}, b.lo)
    quad = b * bxx - bx * bx.scale(rat(1, 2)) \
        - (lam - u0.scale(2)) * b * b * rat(2) + lam.scale(2)
    res = _series_residual_zero(quad)
    reports = [ResidualReport("quadratic-constraint", res, not res)]
    R = resolvent_at_jets(depth, jets, ring, var)
    tr2 = (R * R).trace() - lam.scale(2)
    res = _series_residual_zero(tr2)
    reports.append(ResidualReport("trace-square", res, not res))
    return reports


def kdv_Q(k: int) -> DiffPoly:
    """Q_k = d(b_k)/(2k+1)!! - u_0^k u_1 / k!."""
    if k < 0:
        raise ValueError("k must be >= 0")
    bk = mr_b_coeffs(k)[k + 1]
    lead = DiffPoly.jet(0) ** k * DiffPoly.jet(1)
    fact = 1
    for i in range(1, k + 1):
        fact *= i
    return DPOLY.scale(bk.derive(), rat(1, double_factorial(2 * k + 1))) \
        - DPOLY.scale(lead, rat(1, fact))


def kdv_flow_u0(k: int) -> DiffPoly:
    """D_k(u_0) = d(b_k)/(2k+1)!!."""
    bk = mr_b_coeffs(k)[k + 1]
    return DPOLY.scale(bk.derive(), rat(1, double_factorial(2 * k + 1)))


def kdv_flow_apply(k: int, p: DiffPoly) -> DiffPoly:
    """Apply the derivation D_k (commuting with d) to a differential polynomial."""
    if k == 0:
        return p.derive()
    base = kdv_flow_u0(k)
    images = []
    img = base
    for _ in range(p.max_jet() + 1):
        images.append(img)
        img = img.derive()
    return p.apply_derivation(images)


def specialize_b(depth: int, jets: Sequence[Any], ring: Ring, var: str = "lam",
                 x_derivs: int = 0):
    """Evaluate b(lambda) (and optionally its x-derivatives) on concrete jets.

    ``jets[i]`` is the value of u_i in ``ring``; d/dx on the jet side is the
    shift u_i -> u_{i+1}, so the i-th derivative of b_k is d^i(b_k) evaluated
    on the same jets.  Returns a list [b, b_x, ..., b_{x^i}] of lambda-series.
    """
    bs = mr_b_coeffs(depth)
    outs = []
    for i in range(x_derivs + 1):
        coeffs = {}
        for k in range(-1, depth + 1):
            coeffs[-(k + 1)] = bs[k + 1].derive_n(i).substitute_jets(jets, ring)
        outs.append(TruncSeries(var, ring, coeffs, -(depth + 1)))
    return outs


def resolvent_at_jets(depth: int, jets: Sequence[Any], ring: Ring,
                      var: str = "lam") -> Mat2:
    """R(lambda) with u_i evaluated at concrete jets in the given ring."""
    bs = mr_b_coeffs(depth)
    lo = -(depth + 1)
    u0 = ring.coerce(jets[0])
    a_c, b_c, c_c = {}, {}, {}
    for k in range(-1, depth + 1):
        bk = bs[k + 1].substitute_jets(jets, ring)
        dbk = bs[k + 1].derive().substitute_jets(jets, ring)
        d2bk = bs[k + 1].derive_n(2).substitute_jets(jets, ring)
        b_c[-(k + 1)] = bk
        a_c[-(k + 1)] = ring.scale(dbk, rat(1, 2))
        c_c[-k] = c_c.get(-k, ring.zero) + bk
        c_c[-(k + 1)] = c_c.get(-(k + 1), ring.zero) \
            - ring.scale(u0 * bk, rat(2)) - ring.scale(d2bk, rat(1, 2))
    a = TruncSeries(var, ring, a_c, lo)
    b = TruncSeries(var, ring, b_c, lo)
    c = TruncSeries(var, ring, {e: v for e, v in c_c.items() if e >= lo}, lo)
    return Mat2(a, b, c, -a)


def jets_of_initial_data(f0, n: int, deriv):
    """Jets [f, f', ..., f^(n)] from initial data and a derivation callable."""
    jets = [f0]
    for _ in range(n):
        jets.append(deriv(jets[-1]))
    return jets

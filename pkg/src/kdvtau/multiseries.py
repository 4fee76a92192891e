"""Truncated series in several inverse variables.

The expansion region is fixed once and for all by the variable order:
``|x_1| > |x_2| > ... > |x_n|`` (earlier variable dominates).  Every inverse
difference ``1/(x_a - x_b)**p`` is expanded in that region, which makes the
cancellation of non-negative powers in assembled generating functions a
testable fact instead of a convention.

Coefficients are reliable per variable for exponents >= ``lo[i]``; reading
below is an error.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Sequence, Tuple

from .rings import Ring, RingMismatchError, binom, is_rational
from .series import TruncSeries, TruncationError


class MultiSeries:
    """Sparse multivariate Laurent series with per-variable windows."""

    __slots__ = ("vars", "ring", "coeffs", "lo")

    def __init__(self, variables: Sequence[str], ring: Ring,
                 coeffs: Mapping[Tuple[int, ...], Any], lo: Sequence[int]):
        self.vars: Tuple[str, ...] = tuple(variables)
        self.ring = ring
        self.lo: Tuple[int, ...] = tuple(lo)
        if len(self.lo) != len(self.vars):
            raise ValueError("one lower bound per variable required")
        self.coeffs: Dict[Tuple[int, ...], Any] = {}
        for e, c in coeffs.items():
            if any(ei < li for ei, li in zip(e, self.lo)):
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                self.coeffs[tuple(e)] = c

    @staticmethod
    def zero(variables: Sequence[str], ring: Ring, lo: Sequence[int]) -> "MultiSeries":
        return MultiSeries(variables, ring, {}, lo)

    @staticmethod
    def from_univariate(s: TruncSeries, variables: Sequence[str], which: int,
                        lo: Sequence[int]) -> "MultiSeries":
        """Embed a univariate series as a multivariate one."""
        n = len(variables)
        out = {}
        for e, c in s.coeffs.items():
            key = tuple(e if i == which else 0 for i in range(n))
            out[key] = c
        lo = list(lo)
        lo[which] = max(lo[which], s.lo)
        return MultiSeries(variables, s.ring, out, lo)

    # -- access ---------------------------------------------------------------

    def coeff(self, e: Sequence[int]):
        e = tuple(e)
        if any(ei < li for ei, li in zip(e, self.lo)):
            raise TruncationError("coefficient %s is outside the reliable window %s"
                                  % (e, self.lo))
        return self.coeffs.get(e, self.ring.zero)

    def heads(self) -> Tuple[int, ...]:
        """Per-variable largest stored exponent (lo for an empty series)."""
        if not self.coeffs:
            return self.lo
        return tuple(max(e[i] for e in self.coeffs) for i in range(len(self.vars)))

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiSeries"):
        if self.vars != other.vars:
            raise RingMismatchError("variable lists differ: %s vs %s"
                                    % (self.vars, other.vars))

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check(other)
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        out = {e: c for e, c in self.coeffs.items()
               if all(ei >= li for ei, li in zip(e, lo))}
        for e, c in other.coeffs.items():
            if any(ei < li for ei, li in zip(e, lo)):
                continue
            s = out.get(e, self.ring.zero) + c
            if self.ring.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiSeries(self.vars, self.ring, out, lo)

    def __neg__(self):
        return MultiSeries(self.vars, self.ring,
                           {e: -c for e, c in self.coeffs.items()}, self.lo)

    def __sub__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if is_rational(other):
            return self.scale(other)
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check(other)
        ha, hb = self.heads(), other.heads()
        lo = tuple(max(la + hb_i, lb + ha_i)
                   for la, lb, ha_i, hb_i in zip(self.lo, other.lo, ha, hb))
        out: Dict[Tuple[int, ...], Any] = {}
        zero = self.ring.zero
        n = len(self.vars)
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(e1[i] + e2[i] for i in range(n))
                if any(ei < li for ei, li in zip(e, lo)):
                    continue
                out[e] = out.get(e, zero) + c1 * c2
        return MultiSeries(self.vars, self.ring, out, lo)

    __rmul__ = __mul__

    def scale(self, q) -> "MultiSeries":
        if q == 0:
            return MultiSeries.zero(self.vars, self.ring, self.lo)
        return MultiSeries(self.vars, self.ring,
                           {e: self.ring.scale(c, q) for e, c in self.coeffs.items()},
                           self.lo)

    def deriv(self, which: int) -> "MultiSeries":
        """Termwise partial derivative in the given variable."""
        out = {}
        for e, c in self.coeffs.items():
            if e[which] != 0:
                e2 = e[:which] + (e[which] - 1,) + e[which + 1:]
                out[e2] = self.ring.scale(c, e[which])
        lo = list(self.lo)
        lo[which] -= 1
        return MultiSeries(self.vars, self.ring, out, lo)

    def eq_window(self, other: "MultiSeries") -> bool:
        self._check(other)
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        ok = lambda e: all(ei >= li for ei, li in zip(e, lo))
        keys = {e for e in self.coeffs if ok(e)} | {e for e in other.coeffs if ok(e)}
        return all(self.coeff(e) == other.coeff(e) for e in keys)

    def __repr__(self):
        items = sorted(self.coeffs.items())[:12]
        body = ", ".join("%s: %s" % (e, c) for e, c in items)
        more = "" if len(self.coeffs) <= 12 else ", ... (%d terms)" % len(self.coeffs)
        return "MultiSeries[%s | lo=%s]{%s%s}" % (",".join(self.vars), self.lo, body, more)


def expand_inverse_difference(variables: Sequence[str], a: int, b: int, power: int,
                              ring: Ring, lo: Sequence[int]) -> MultiSeries:
    """Expansion of 1/(x_a - x_b)**power in the fixed region.

    Indices are 0-based positions in ``variables``; the earlier-ordered
    variable is the dominant one.  For a < b this is
    sum_k binom(power-1+k, k) x_b^k x_a^(-power-k); for a > b the mirror
    with sign (-1)**power.  Depth is controlled by the requested window ``lo``.
    """
    if a == b:
        raise ValueError("inverse difference needs two distinct variables")
    sign = 1
    if a > b:
        a, b = b, a
        sign = (-1) ** power
    # x_a dominates; exponents: x_a^(-power-k), x_b^k
    lo_a = lo[a]
    kmax = -power - lo_a
    out = {}
    n = len(variables)
    one = ring.one
    for k in range(0, kmax + 1):
        e = [0] * n
        e[a] = -power - k
        e[b] = k
        c = ring.scale(one, sign * binom(power - 1 + k, k))
        out[tuple(e)] = c
    return MultiSeries(variables, ring, out, lo)

"""Truncated Laurent series in one variable, and 2x2 matrices over them.

Two orientations are needed:

* ``TruncSeries`` -- expansions at infinity: finitely many positive powers,
  coefficients known for every exponent >= ``lo``.  Reading below ``lo`` is
  a hard error, never a silent zero; arithmetic propagates the reliable
  window.

* ``XSeries`` -- expansions at a finite point (Taylor/local Laurent):
  finitely many negative powers, coefficients known for every exponent
  <= ``hi``.

Both are generic over a coefficient ring handle from ``rings``.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, Mapping

from .rings import QQ, Ring, RingMismatchError, binom, is_rational, rat


class TruncationError(ValueError):
    """Requested coefficient lies outside the reliable window."""


def _merge_ring(a: Ring, b: Ring) -> Ring:
    if a is b:
        return a
    if a.name == b.name:
        return a
    raise RingMismatchError("series rings differ: %s vs %s" % (a.name, b.name))


class TruncSeries:
    """Laurent series in one variable, reliable for exponents >= lo."""

    __slots__ = ("var", "ring", "coeffs", "lo")

    def __init__(self, var: str, ring: Ring, coeffs: Mapping[int, Any], lo: int):
        self.var = var
        self.ring = ring
        self.lo = lo
        self.coeffs: Dict[int, Any] = {}
        for e, c in coeffs.items():
            if e < lo:
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                self.coeffs[e] = c

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_fn(var: str, ring: Ring, fn: Callable[[int], Any], lo: int, hi: int) -> "TruncSeries":
        return TruncSeries(var, ring, {e: fn(e) for e in range(lo, hi + 1)}, lo)

    @staticmethod
    def zero(var: str, ring: Ring, lo: int) -> "TruncSeries":
        return TruncSeries(var, ring, {}, lo)

    @staticmethod
    def one(var: str, ring: Ring, lo: int) -> "TruncSeries":
        return TruncSeries(var, ring, {0: ring.one}, lo)

    @staticmethod
    def gen(var: str, ring: Ring, lo: int) -> "TruncSeries":
        return TruncSeries(var, ring, {1: ring.one}, lo)

    # -- access ---------------------------------------------------------------

    def coeff(self, e: int):
        if e < self.lo:
            raise TruncationError(
                "coefficient of %s^%d is below the reliable window (lo=%d)"
                % (self.var, e, self.lo))
        return self.coeffs.get(e, self.ring.zero)

    def head(self) -> int:
        """Largest stored exponent (``lo`` for a zero series)."""
        return max(self.coeffs, default=self.lo)

    def support(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, lo: int) -> "TruncSeries":
        """Narrow the window (raise lo); widening is impossible."""
        if lo < self.lo:
            raise TruncationError("cannot widen window below lo=%d" % self.lo)
        return TruncSeries(self.var, self.ring, self.coeffs, lo)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "TruncSeries"):
        if self.var != other.var:
            raise RingMismatchError("variable mismatch: %s vs %s" % (self.var, other.var))
        _merge_ring(self.ring, other.ring)

    def __add__(self, other):
        if is_rational(other):
            # exact scalars are reliable everywhere; inherit our window
            other = TruncSeries(self.var, self.ring, {0: other}, min(0, self.lo))
            other.lo = self.lo
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        lo = max(self.lo, other.lo)
        out = {e: c for e, c in self.coeffs.items() if e >= lo}
        for e, c in other.coeffs.items():
            if e < lo:
                continue
            s = out.get(e, self.ring.zero) + c
            if self.ring.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return TruncSeries(self.var, self.ring, out, lo)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.var, self.ring,
                           {e: -c for e, c in self.coeffs.items()}, self.lo)

    def __sub__(self, other):
        if is_rational(other):
            return self + (-other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rational(other):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        ha, hb = self.head(), other.head()
        lo = max(self.lo + hb, other.lo + ha)
        out: Dict[int, Any] = {}
        zero = self.ring.zero
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < lo:
                    continue
                s = out.get(e, zero) + c1 * c2
                out[e] = s
        return TruncSeries(self.var, self.ring, out, lo)

    __rmul__ = __mul__

    def scale(self, q) -> "TruncSeries":
        if q == 0:
            return TruncSeries.zero(self.var, self.ring, self.lo)
        return TruncSeries(self.var, self.ring,
                           {e: self.ring.scale(c, q) for e, c in self.coeffs.items()},
                           self.lo)

    def scale_elem(self, x) -> "TruncSeries":
        """Multiply every coefficient by a fixed ring element."""
        x = self.ring.coerce(x)
        return TruncSeries(self.var, self.ring,
                           {e: c * x for e, c in self.coeffs.items()}, self.lo)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by var**k."""
        return TruncSeries(self.var, self.ring,
                           {e + k: c for e, c in self.coeffs.items()}, self.lo + k)

    def invert(self) -> "TruncSeries":
        """Two-sided inverse up to truncation.

        Requires the leading (highest-exponent) coefficient to be a unit of
        the ring.  The result is reliable on a window of the same width.
        """
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        h = self.head()
        lead = self.coeffs.get(h)
        if lead is None or not self.ring.is_unit(lead):
            raise ZeroDivisionError(
                "leading coefficient of %r is not a unit" % (self,))
        depth = h - self.lo          # number of known sub-leading terms
        inv_lead = self.ring.inv(lead)
        # tail(k) = coefficient of var^(h-k) for k >= 1
        out: Dict[int, Any] = {-h: inv_lead}
        for k in range(1, depth + 1):
            acc = self.ring.zero
            for j in range(1, k + 1):
                cj = self.coeffs.get(h - j)
                if cj is None:
                    continue
                rj = out.get(-h - (k - j))
                if rj is None:
                    continue
                acc = acc + cj * rj
            c = -(inv_lead * acc)
            if not self.ring.is_zero(c):
                out[-h - k] = c
        return TruncSeries(self.var, self.ring, out, -h - depth)

    def derivative(self) -> "TruncSeries":
        """Termwise d/dvar."""
        out = {}
        for e, c in self.coeffs.items():
            if e != 0:
                out[e - 1] = self.ring.scale(c, e)
        return TruncSeries(self.var, self.ring, out, self.lo - 1)

    def map_coeffs(self, fn, ring: Ring | None = None, var: str | None = None) -> "TruncSeries":
        out = {}
        ring = ring or self.ring
        for e, c in self.coeffs.items():
            out[e] = fn(c)
        return TruncSeries(var or self.var, ring, out, self.lo)

    def stretch(self, k: int, var: str) -> "TruncSeries":
        """Substitute var_old = var_new**k (k >= 1), e.g. lambda = z**2."""
        return TruncSeries(var, self.ring,
                           {e * k: c for e, c in self.coeffs.items()}, self.lo * k)

    def negate_var(self) -> "TruncSeries":
        """Substitute var -> -var."""
        return TruncSeries(self.var, self.ring,
                           {e: (c if e % 2 == 0 else -c) for e, c in self.coeffs.items()},
                           self.lo)

    def rename(self, var: str) -> "TruncSeries":
        return TruncSeries(var, self.ring, self.coeffs, self.lo)

    # -- comparison -----------------------------------------------------------

    def eq_window(self, other: "TruncSeries") -> bool:
        """Equality on the common reliable window."""
        self._check(other)
        lo = max(self.lo, other.lo)
        keys = {e for e in self.coeffs if e >= lo} | {e for e in other.coeffs if e >= lo}
        return all(self.coeff(e) == other.coeff(e) for e in keys)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.var == other.var and self.lo == other.lo
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "O(%s^%d)" % (self.var, self.lo - 1)
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                parts.append("(%s)" % (c,))
            else:
                parts.append("(%s)*%s^%d" % (c, self.var, e))
        return " + ".join(parts) + " + O(%s^%d)" % (self.var, self.lo - 1)


class XSeries:
    """Local Laurent series at a finite point, reliable for exponents <= hi."""

    __slots__ = ("var", "ring", "coeffs", "hi")

    def __init__(self, var: str, ring: Ring, coeffs: Mapping[int, Any], hi: int):
        self.var = var
        self.ring = ring
        self.hi = hi
        self.coeffs: Dict[int, Any] = {}
        for e, c in coeffs.items():
            if e > hi:
                continue
            c = ring.coerce(c)
            if not ring.is_zero(c):
                self.coeffs[e] = c

    @staticmethod
    def zero(var: str, ring: Ring, hi: int) -> "XSeries":
        return XSeries(var, ring, {}, hi)

    @staticmethod
    def const(var: str, ring: Ring, c, hi: int) -> "XSeries":
        return XSeries(var, ring, {0: c}, hi)

    @staticmethod
    def gen(var: str, ring: Ring, hi: int) -> "XSeries":
        return XSeries(var, ring, {1: ring.one}, hi)

    def coeff(self, e: int):
        if e > self.hi:
            raise TruncationError(
                "coefficient of %s^%d is above the reliable window (hi=%d)"
                % (self.var, e, self.hi))
        return self.coeffs.get(e, self.ring.zero)

    def valuation(self) -> int:
        return min(self.coeffs, default=self.hi)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "XSeries"):
        if self.var != other.var:
            raise RingMismatchError("variable mismatch")
        _merge_ring(self.ring, other.ring)

    def __add__(self, other):
        if is_rational(other):
            other = XSeries(self.var, self.ring, {0: other}, self.hi)
        if not isinstance(other, XSeries):
            return NotImplemented
        self._check(other)
        hi = min(self.hi, other.hi)
        out = {e: c for e, c in self.coeffs.items() if e <= hi}
        for e, c in other.coeffs.items():
            if e > hi:
                continue
            s = out.get(e, self.ring.zero) + c
            if self.ring.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return XSeries(self.var, self.ring, out, hi)

    __radd__ = __add__

    def __neg__(self):
        return XSeries(self.var, self.ring,
                       {e: -c for e, c in self.coeffs.items()}, self.hi)

    def __sub__(self, other):
        if is_rational(other):
            return self + (-other)
        if not isinstance(other, XSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rational(other):
            return self.scale(other)
        if not isinstance(other, XSeries):
            return NotImplemented
        self._check(other)
        va, vb = self.valuation(), other.valuation()
        hi = min(self.hi + vb, other.hi + va)
        out: Dict[int, Any] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > hi:
                    continue
                out[e] = out.get(e, self.ring.zero) + c1 * c2
        return XSeries(self.var, self.ring, out, hi)

    __rmul__ = __mul__

    def scale(self, q) -> "XSeries":
        if q == 0:
            return XSeries.zero(self.var, self.ring, self.hi)
        return XSeries(self.var, self.ring,
                       {e: self.ring.scale(c, q) for e, c in self.coeffs.items()}, self.hi)

    def derivative(self) -> "XSeries":
        out = {}
        for e, c in self.coeffs.items():
            if e != 0:
                out[e - 1] = self.ring.scale(c, e)
        return XSeries(self.var, self.ring, out, self.hi - 1)

    def integrate(self) -> "XSeries":
        """Termwise antiderivative with zero constant term."""
        out = {}
        for e, c in self.coeffs.items():
            if e == -1:
                raise ValueError("cannot integrate a 1/%s term" % self.var)
            out[e + 1] = self.ring.scale(c, rat(1, e + 1))
        return XSeries(self.var, self.ring, out, self.hi + 1)

    def invert(self) -> "XSeries":
        """Inverse of a series whose lowest coefficient is a unit."""
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        v = self.valuation()
        lead = self.coeffs[v]
        if not self.ring.is_unit(lead):
            raise ZeroDivisionError("lowest coefficient is not a unit")
        depth = self.hi - v
        inv_lead = self.ring.inv(lead)
        out: Dict[int, Any] = {-v: inv_lead}
        for k in range(1, depth + 1):
            acc = self.ring.zero
            for j in range(1, k + 1):
                cj = self.coeffs.get(v + j)
                if cj is None:
                    continue
                rj = out.get(-v + (k - j))
                if rj is None:
                    continue
                acc = acc + cj * rj
            c = -(inv_lead * acc)
            if not self.ring.is_zero(c):
                out[-v + k] = c
        return XSeries(self.var, self.ring, out, -v + depth)

    def value_at_zero(self):
        """Constant term; requires no pole part."""
        if any(e < 0 for e in self.coeffs):
            raise ValueError("series has a pole at 0")
        return self.coeffs.get(0, self.ring.zero)

    def eq_window(self, other: "XSeries") -> bool:
        self._check(other)
        hi = min(self.hi, other.hi)
        keys = {e for e in self.coeffs if e <= hi} | {e for e in other.coeffs if e <= hi}
        return all(self.coeff(e) == other.coeff(e) for e in keys)

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        return (self.var == other.var and self.hi == other.hi
                and self.coeffs == other.coeffs)

    def __repr__(self):
        parts = ["(%s)*%s^%d" % (self.coeffs[e], self.var, e) for e in sorted(self.coeffs)]
        return (" + ".join(parts) if parts else "0") + " + O(%s^%d)" % (self.var, self.hi + 1)


class XSeriesRing(Ring):
    """Taylor series in one local variable as a coefficient ring."""

    def __init__(self, var: str, base: Ring, hi: int):
        self.var = var
        self.base = base
        self.hi = hi
        self.name = "%s[[%s]]<=%d" % (base.name, var, hi)

    @property
    def zero(self):
        return XSeries.zero(self.var, self.base, self.hi)

    @property
    def one(self):
        return XSeries.const(self.var, self.base, self.base.one, self.hi)

    def coerce(self, x):
        if isinstance(x, XSeries):
            if x.var != self.var:
                raise RingMismatchError("variable mismatch")
            return x
        return XSeries.const(self.var, self.base, self.base.coerce(x), self.hi)

    def is_zero(self, x) -> bool:
        return not x.coeffs

    def is_unit(self, x) -> bool:
        return (not x.is_zero()) and x.valuation() == 0 and self.base.is_unit(x.coeffs[0])

    def inv(self, x):
        return x.invert()

    def scale(self, x, q):
        return x.scale(q)


def binomial_series(base: TruncSeries, half_power: int, depth: int) -> TruncSeries:
    """(1 + t)**(half_power/2) for a series t with only negative exponents.

    Used to expand square roots of monic polynomials at infinity; only
    rational scalar multiplications are performed, so the coefficient ring
    need not support division.
    """
    if any(e >= 0 for e in base.coeffs):
        raise ValueError("binomial series needs a tail with negative exponents only")
    var, ring = base.var, base.ring
    out = TruncSeries.one(var, ring, base.lo)
    term = TruncSeries.one(var, ring, base.lo)
    alpha = rat(half_power, 2)
    c = rat(1)
    kmax = min(depth, -base.lo)
    for k in range(1, kmax + 1):
        term = term * base
        c = c * (alpha - (k - 1)) / k
        out = out + term.scale(c)
    return out


class Mat2:
    """2x2 matrix with TruncSeries entries over a common variable and ring."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: TruncSeries, b: TruncSeries, c: TruncSeries, d: TruncSeries):
        self.a, self.b, self.c, self.d = a, b, c, d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b,
                    self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b,
                    self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d)
        if isinstance(other, TruncSeries):
            return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)
        if is_rational(other):
            return Mat2(self.a.scale(other), self.b.scale(other),
                        self.c.scale(other), self.d.scale(other))
        return NotImplemented

    __rmul__ = __mul__

    def trace(self) -> TruncSeries:
        return self.a + self.d

    def det(self) -> TruncSeries:
        return self.a * self.d - self.b * self.c

    def commutator(self, other: "Mat2") -> "Mat2":
        return self * other - other * self

    def map(self, fn) -> "Mat2":
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def __repr__(self):
        return "Mat2(\n a=%r\n b=%r\n c=%r\n d=%r)" % (self.a, self.b, self.c, self.d)

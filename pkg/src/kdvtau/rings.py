"""Exact coefficient rings: rationals and sparse parametric polynomials.

Every series and matrix in this package is generic over a commutative
coefficient ring.  A ring is described by a small handle object exposing
``zero``, ``one``, ``coerce``, ``is_zero``, ``is_unit`` and ``inv``; the
elements themselves carry the arithmetic through operator overloading.
Scalars are exact rationals throughout (gmpy2.mpq when available, else
fractions.Fraction) -- there is no floating-point mode.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple

try:
    from gmpy2 import mpq as _mpq

    def rat(num: Any = 0, den: Any = 1):
        """Exact rational from ints, strings or Fraction-like values."""
        return _mpq(num, den) if den != 1 else _mpq(num)

    _RAT_TYPES = (_mpq, Fraction, int)
except ImportError:  # pragma: no cover
    def rat(num: Any = 0, den: Any = 1):
        return Fraction(num, den)

    _RAT_TYPES = (Fraction, int)

RAT_ZERO = rat(0)
RAT_ONE = rat(1)


def is_rational(x: Any) -> bool:
    return isinstance(x, _RAT_TYPES)


def as_fraction(x: Any) -> Fraction:
    """Convert any exact rational (mpq/Fraction/int) to fractions.Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, int) else Fraction(x)


def rat_str(x: Any) -> str:
    """Canonical text form ``num/den`` with the denominator omitted when 1."""
    n, d = x.numerator, x.denominator
    return str(n) if d == 1 else "%d/%d" % (n, d)


def double_factorial(n: int):
    """(2k+1)!! style double factorial with the convention (-1)!! = 1."""
    if n < -1:
        raise ValueError("double factorial undefined for n < -1")
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


def binom(n: int, k: int) -> int:
    if k < 0:
        return 0
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


class RingMismatchError(TypeError):
    pass


class Ring:
    """Base handle for a commutative coefficient ring."""

    name: str = "?"

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def coerce(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == self.zero

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def scale(self, x, q):
        """Multiply an element by an exact rational."""
        return x * self.coerce(q)


class RationalRing(Ring):
    name = "Q"

    @property
    def zero(self):
        return RAT_ZERO

    @property
    def one(self):
        return RAT_ONE

    def coerce(self, x):
        if is_rational(x):
            return rat(x) if isinstance(x, (int, Fraction)) else x
        raise RingMismatchError("cannot coerce %r into Q" % (x,))

    def is_zero(self, x) -> bool:
        return x == 0

    def is_unit(self, x) -> bool:
        return x != 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 is not invertible")
        return 1 / x

    def scale(self, x, q):
        return x * q


QQ = RationalRing()


class ParamPoly:
    """Sparse multivariate polynomial over Q in named parameters.

    Terms are stored as a map from exponent vectors (one slot per declared
    variable, trailing order fixed at ring construction) to nonzero rational
    coefficients.  Instances are immutable.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "PolyRing", terms: Mapping[Tuple[int, ...], Any]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def const(ring: "PolyRing", c) -> "ParamPoly":
        c = rat(c) if isinstance(c, (int, Fraction)) else c
        z = (0,) * len(ring.variables)
        return ParamPoly(ring, {z: c} if c != 0 else {})

    # -- arithmetic -----------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, ParamPoly):
            if other.ring is not self.ring and other.ring.variables != self.ring.variables:
                raise RingMismatchError("polynomial rings differ: %s vs %s"
                                        % (self.ring.variables, other.ring.variables))
            return other
        if is_rational(other):
            return ParamPoly.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, RAT_ZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return ParamPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Tuple[int, ...], Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, RAT_ZERO) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return ParamPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        r = ParamPoly.const(self.ring, 1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if is_rational(other):
            other = ParamPoly.const(self.ring, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((e, as_fraction(c)) for e, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries --------------------------------------------------------------

    def is_constant(self) -> bool:
        z = (0,) * len(self.ring.variables)
        return all(e == z for e in self.terms)

    def constant_value(self):
        z = (0,) * len(self.ring.variables)
        if not self.is_constant():
            raise ValueError("polynomial %s is not constant" % self)
        return self.terms.get(z, RAT_ZERO)

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.ring.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient_in(self, var: str, k: int) -> "ParamPoly":
        """Coefficient of var**k, as a polynomial in the remaining variables."""
        i = self.ring.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return ParamPoly(self.ring, out)

    def evaluate(self, values: Mapping[str, Any]):
        """Evaluate at rational values for every declared variable."""
        idx = [self.ring.variables.index(v) for v in self.ring.variables]
        vals = [rat(values[v]) if isinstance(values[v], (int, Fraction)) else values[v]
                for v in self.ring.variables]
        total = RAT_ZERO
        for e, c in self.terms.items():
            t = c
            for i in idx:
                if e[i]:
                    t = t * vals[i] ** e[i]
            total = total + t
        return total

    def substitute(self, target: "PolyRing", values: Mapping[str, Any]) -> "ParamPoly":
        """Map into another polynomial ring, sending each old variable to a
        rational or to a target-ring element."""
        imgs = []
        for v in self.ring.variables:
            x = values[v]
            if is_rational(x):
                x = ParamPoly.const(target, x)
            imgs.append(x)
        total = ParamPoly.const(target, 0)
        for e, c in self.terms.items():
            t = ParamPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    t = t * imgs[i] ** k
            total = total + t
        return total

    def deriv(self, var: str) -> "ParamPoly":
        i = self.ring.variables.index(var)
        out: Dict[Tuple[int, ...], Any] = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                s = out.get(e2, RAT_ZERO) + c * e[i]
                if s == 0:
                    out.pop(e2, None)
                else:
                    out[e2] = s
        return ParamPoly(self.ring, out)

    # -- canonical form -------------------------------------------------------

    def sorted_terms(self):
        """Graded lexicographic order on exponent vectors."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                ("%s^%d" % (v, k) if k > 1 else v)
                for v, k in zip(self.ring.variables, e) if k)
            cs = rat_str(c)
            parts.append(cs if not mon else ("%s*%s" % (cs, mon) if cs != "1" else mon))
        return " + ".join(parts).replace("+ -", "- ")


class PolyRing(Ring):
    """Handle for Q[x1,...,xk] with a fixed variable order."""

    def __init__(self, variables: Sequence[str]):
        self.variables: Tuple[str, ...] = tuple(variables)
        self.name = "Q[%s]" % ",".join(self.variables)
        self._zero = ParamPoly(self, {})
        self._one = ParamPoly.const(self, 1)
        self._gens = {v: ParamPoly(self, {tuple(1 if u == v else 0 for u in self.variables): RAT_ONE})
                      for v in self.variables}

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def gen(self, v: str) -> ParamPoly:
        return self._gens[v]

    def coerce(self, x) -> ParamPoly:
        if isinstance(x, ParamPoly):
            if x.ring.variables == self.variables:
                return x
            raise RingMismatchError("wrong polynomial ring")
        if is_rational(x):
            return ParamPoly.const(self, x)
        raise RingMismatchError("cannot coerce %r into %s" % (x, self.name))

    def is_zero(self, x) -> bool:
        return not x.terms

    def is_unit(self, x) -> bool:
        return x.is_constant() and bool(x.terms)

    def inv(self, x):
        return ParamPoly.const(self, 1 / x.constant_value())


def poly_divmod_univar(num: ParamPoly, den: ParamPoly, var: str):
    """Quotient and remainder of polynomials univariate in ``var``.

    Both must have rational leading coefficients in ``var`` (the other
    variables may appear nowhere else); used for exact divisibility checks.
    """
    ring = num.ring
    dd = den.degree(var)
    if dd < 0:
        raise ZeroDivisionError("division by zero polynomial")
    lead = den.coefficient_in(var, dd)
    lc = lead.constant_value()
    x = ring.gen(var)
    q = ring.zero
    r = num
    while r.terms and r.degree(var) >= dd:
        dn = r.degree(var)
        cn = r.coefficient_in(var, dn)
        t = cn * ParamPoly.const(ring, 1 / lc) * x ** (dn - dd)
        q = q + t
        r = r - t * den
    return q, r

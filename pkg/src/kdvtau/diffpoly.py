"""Differential polynomials in the jet variables u_0, u_1, u_2, ...

Elements of Q[u_0, u_1, ...] with the derivation d(u_i) = u_{i+1} extended
by the Leibniz rule.  The grading deg u_i = i is used in consistency checks;
the derivation raises the grading of every monomial by exactly 1.

A monomial is stored as a tuple of exponents (e_0, e_1, ..., e_k) with
trailing zeros trimmed, mapping to a nonzero rational coefficient.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Sequence, Tuple

from .rings import RAT_ONE, RAT_ZERO, Ring, RingMismatchError, is_rational, rat, rat_str

Monomial = Tuple[int, ...]


def _trim(e: Sequence[int]) -> Monomial:
    e = tuple(e)
    n = len(e)
    while n and e[n - 1] == 0:
        n -= 1
    return e[:n]


class DiffPoly:
    """Sparse differential polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Any] | None = None):
        self.terms: Dict[Monomial, Any] = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[_trim(e)] = c

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly()

    @staticmethod
    def const(c) -> "DiffPoly":
        c = rat(c) if isinstance(c, int) else c
        return DiffPoly({(): c})

    @staticmethod
    def jet(i: int, power: int = 1) -> "DiffPoly":
        """The monomial u_i**power."""
        e = [0] * (i + 1)
        e[i] = power
        return DiffPoly({tuple(e): RAT_ONE})

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DiffPoly):
            return other
        if is_rational(other):
            return DiffPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, RAT_ZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        r = DiffPoly()
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = DiffPoly()
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Monomial, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                if len(e1) < len(e2):
                    ea, eb = e2, e1
                else:
                    ea, eb = e1, e2
                e = tuple(a + b for a, b in zip(ea, eb)) + ea[len(eb):]
                s = out.get(e, RAT_ZERO) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        r = DiffPoly()
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        r = DiffPoly.const(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ------------------------------------------------------------

    def max_jet(self) -> int:
        """Highest jet index occurring, -1 for constants."""
        return max((len(e) - 1 for e in self.terms), default=-1)

    def gradings(self) -> set:
        """Set of gradings (deg u_i = i) present among the monomials."""
        return {sum(i * k for i, k in enumerate(e)) for e in self.terms}

    def derive(self) -> "DiffPoly":
        """Image under the derivation d with d(u_i) = u_{i+1}."""
        out: Dict[Monomial, Any] = {}
        for e, c in self.terms.items():
            for i, k in enumerate(e):
                if k == 0:
                    continue
                e2 = list(e) + [0] * (i + 2 - len(e))
                e2[i] -= 1
                e2[i + 1] += 1
                m = _trim(e2)
                s = out.get(m, RAT_ZERO) + c * k
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        r = DiffPoly()
        r.terms = out
        return r

    def derive_n(self, n: int) -> "DiffPoly":
        p = self
        for _ in range(n):
            p = p.derive()
        return p

    def substitute_jets(self, jets: Sequence[Any], ring: Ring):
        """Exact evaluation with u_i -> jets[i] in the target ring.

        Raises IndexError when a jet index occurring in the polynomial is
        not covered.
        """
        total = ring.zero
        for e, c in self.terms.items():
            if len(e) > len(jets):
                raise IndexError(
                    "missing jet u_%d (only %d jets given)" % (len(e) - 1, len(jets)))
            t = ring.coerce(ring.one)
            for i, k in enumerate(e):
                if k:
                    x = ring.coerce(jets[i])
                    for _ in range(k):
                        t = t * x
            total = total + ring.scale(t, c)
        return total

    def apply_derivation(self, images: Sequence["DiffPoly"]) -> "DiffPoly":
        """Apply the derivation defined by u_i -> images[i] (Leibniz rule)."""
        out = DiffPoly.zero()
        for e, c in self.terms.items():
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if i >= len(images):
                    raise IndexError("missing derivation image for u_%d" % i)
                e2 = list(e)
                e2[i] -= 1
                base = DiffPoly({_trim(e2): c * k})
                out = out + base * images[i]
        return out

    # -- canonical form -------------------------------------------------------

    def sorted_terms(self):
        """Graded lexicographic order: by grading, then exponent vector."""
        return sorted(self.terms.items(),
                      key=lambda t: (sum(i * k for i, k in enumerate(t[0])), t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(("u%d^%d" % (i, k) if k > 1 else "u%d" % i)
                           for i, k in enumerate(e) if k)
            cs = rat_str(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append("%s*%s" % (cs, mon))
        return " + ".join(parts).replace("+ -", "- ")


class DiffPolyRing(Ring):
    """Ring handle so differential polynomials can serve as series coefficients."""

    name = "Q[u0,u1,...]"

    @property
    def zero(self):
        return DiffPoly.zero()

    @property
    def one(self):
        return DiffPoly.const(1)

    def coerce(self, x):
        if isinstance(x, DiffPoly):
            return x
        if is_rational(x):
            return DiffPoly.const(x)
        raise RingMismatchError("cannot coerce %r into %s" % (x, self.name))

    def is_zero(self, x) -> bool:
        return not x.terms

    def is_unit(self, x) -> bool:
        return set(x.terms) == {()}

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError("non-constant differential polynomial")
        return DiffPoly.const(1 / x.terms[()])

    def scale(self, x, q):
        r = DiffPoly()
        r.terms = {e: c * q for e, c in x.terms.items()} if q != 0 else {}
        return r


DPOLY = DiffPolyRing()

"""Tau-structure elements and n-point generating series.

Two-point elements Omega_{p,q} are extracted from the manifestly regular
combination tr( R(lambda) d/dlambda ((R(lambda)-R(mu))/(lambda-mu)) ),
whose coefficient of lambda^(-p-1) mu^(-q-1) is (2p+1)!!(2q+1)!! Omega_{p,q}.
Higher Omega_{p_1,...,p_n} apply the commuting KdV derivations to a
two-point element.

For concrete solution families the n-point generating functions are cyclic
sums

    - sum_{sigma in S_n/C_n} tr( R(x_{sigma(1)}) ... R(x_{sigma(n)}) )
        / prod_i (x_{sigma(i+1)} - x_{sigma(i)})

(matrix route) and their scalar kernel analogues, minus the two-point
counterterm.  Everything is expanded in the fixed region
|x_1| > |x_2| > ... > |x_n|.

The engine walks each cycle once, absorbing the per-variable factor and the
two-variable difference factors in order and finishing a variable the moment
its last factor has been absorbed.  Truncation orders for every factor are
derived beforehand from the requested exponents (exponents only ever add, so
a monomial outside the derived windows can never reach a requested
coefficient); nothing unreliable is ever read.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .diffpoly import DPOLY, DiffPoly
from .multiseries import MultiSeries, expand_inverse_difference
from .rings import Ring, double_factorial, rat
from .series import Mat2, TruncSeries
from .resolvent import kdv_flow_apply, mr_assemble


class DepthError(ValueError):
    """A requested coefficient needs more series depth than is available."""


# ---------------------------------------------------------------------------
# abstract two-point and multi-point elements
# ---------------------------------------------------------------------------

def omega_pq(p: int, q: int) -> DiffPoly:
    """The canonical tau-structure element Omega_{p,q} in Q[u_0, u_1, ...].

    Symmetric in (p, q); vanishes when all u_i = 0; Omega_{0,0} = u_0.
    """
    if p < 0 or q < 0:
        raise ValueError("indices must be non-negative")
    depth = p + q + 2
    R = mr_assemble(depth)

    # H := [mu^(-q-1)] d/dlambda (R(lambda)-R(mu))/(lambda-mu).  An entry
    # sum_e r_e lambda^e contributes -sum_{e <= -q-1} r_e lambda^(q+e).
    def h_entry(entry: TruncSeries) -> TruncSeries:
        out = {}
        for e, c in entry.coeffs.items():
            if e <= -q - 1 and (q + e) != 0:
                out[q + e - 1] = DPOLY.scale(c, -(q + e))
        return TruncSeries(entry.var, DPOLY, out, entry.lo + q - 1)

    ha, hb, hc = h_entry(R.a), h_entry(R.b), h_entry(R.c)
    tr = R.a * ha * rat(2) + R.b * hc + R.c * hb
    coeff = tr.coeff(-p - 1)
    return DPOLY.scale(coeff, rat(1, double_factorial(2 * p + 1) * double_factorial(2 * q + 1)))


def omega_multi(p_list: Sequence[int]) -> DiffPoly:
    """Omega_{p_1,...,p_n} = D_{p_1} ... D_{p_{n-2}} (Omega_{p_{n-1}, p_n}).

    Independent of the index order (the derivations commute and the
    structure is symmetric); n >= 2.
    """
    ps = list(p_list)
    if len(ps) < 2:
        raise ValueError("need at least two indices")
    out = omega_pq(ps[-2], ps[-1])
    for k in reversed(ps[:-2]):
        out = kdv_flow_apply(k, out)
    return out


# ---------------------------------------------------------------------------
# cyclic-sum engine: shapes, targets, planning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RouteShape:
    """Static exponent bounds of one route's factors, used for truncation."""

    matrix_mode: bool
    node_hi: int                 # largest exponent a node factor can carry
    edge_hi_larger: int          # largest exponent of the dominant variable in an edge
    edge_reg_hi: Optional[int]   # largest non-dominant-variable exponent coming from
                                 # non-strip parts; None when edges are pure strips


TRACE_SHAPE = RouteShape(matrix_mode=True, node_hi=1, edge_hi_larger=-1, edge_reg_hi=None)
D_SHAPE = RouteShape(matrix_mode=False, node_hi=0, edge_hi_larger=-1, edge_reg_hi=-1)
K_SHAPE = RouteShape(matrix_mode=False, node_hi=0, edge_hi_larger=0, edge_reg_hi=0)


class Target:
    """Per-variable completion request: a single exponent or a window."""

    __slots__ = ("lo", "hi", "point")

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise ValueError("empty target window")
        self.lo, self.hi = lo, hi
        self.point = lo == hi

    @staticmethod
    def at(e: int) -> "Target":
        return Target(e, e)


def _cycle_reps(n: int, dedup_reversal: bool):
    """Representatives of S_n/C_n fixing the first variable, with multiplicity."""
    reps = []
    for rest in permutations(range(1, n)):
        sig = (0,) + rest
        if dedup_reversal and n >= 3:
            rev = tuple(reversed(rest))
            if rev < rest:
                continue
            reps.append((sig, 1 if rev == rest else 2))
        else:
            reps.append((sig, 1))
    return reps


def _plan(n: int, shape: RouteShape, targets: Sequence[Target], sigma: Tuple[int, ...]):
    """Derive strip depths and per-factor exponent floors for one cycle order.

    For the dominant variable a of a pair, a strip monomial carries exponent
    -1-k; it can contribute to a requested coefficient only if -1-k plus the
    largest exponents the other factors of a can supply reaches down to
    target_lo(a).  Resolving pairs in increasing order of their dominant
    variable makes this a single pass.
    """
    pairs = [(sigma[i], sigma[(i + 1) % n]) for i in range(n)]
    pair_of: Dict[int, List[int]] = {}
    for idx, (u, v) in enumerate(pairs):
        pair_of.setdefault(u, []).append(idx)
        pair_of.setdefault(v, []).append(idx)

    kmax: Dict[int, int] = {}
    maxexp: Dict[Tuple[int, int], int] = {}
    for idx in sorted(range(n), key=lambda i: min(pairs[i])):
        u, v = pairs[idx]
        a, s = min(u, v), max(u, v)
        other = [j for j in pair_of[a] if j != idx][0]
        cap = shape.edge_hi_larger if a == min(pairs[other]) else maxexp[(other, a)]
        kmax[idx] = max(-targets[a].lo - 1 + shape.node_hi + cap, -1)
        maxexp[(idx, a)] = shape.edge_hi_larger
        sm = kmax[idx]
        if shape.edge_reg_hi is not None:
            sm = max(sm, shape.edge_reg_hi)
        maxexp[(idx, s)] = sm

    node_lo: Dict[int, int] = {}
    edge_lo: Dict[Tuple[int, int], int] = {}
    for v in range(n):
        e1, e2 = pair_of[v]
        node_lo[v] = targets[v].lo - maxexp[(e1, v)] - maxexp[(e2, v)]
        edge_lo[(e1, v)] = targets[v].lo - maxexp[(e2, v)] - shape.node_hi
        edge_lo[(e2, v)] = targets[v].lo - maxexp[(e1, v)] - shape.node_hi
    return pairs, kmax, node_lo, edge_lo, maxexp


# ---------------------------------------------------------------------------
# chain state
# ---------------------------------------------------------------------------

class _Chain:
    """Product state over a shrinking set of active variables."""

    def __init__(self, ring: Ring, matrix_mode: bool):
        self.ring = ring
        self.matrix = matrix_mode
        self.vars: List[int] = []
        if matrix_mode:
            self.data = [[{(): ring.one}, {}], [{}, {(): ring.one}]]
        else:
            self.data = {(): ring.one}

    # bounds: dict var -> (lo, hi) allowed exponent interval for pruning
    def _filtered(self, d: Dict[Tuple[int, ...], Any], bounds) -> Dict[Tuple[int, ...], Any]:
        if not bounds:
            return d
        idx = [(i, bounds[v]) for i, v in enumerate(self.vars) if v in bounds]
        out = {}
        for key, c in d.items():
            ok = True
            for i, (lo, hi) in idx:
                if not lo <= key[i] <= hi:
                    ok = False
                    break
            if ok:
                out[key] = c
        return out

    def prune(self, bounds):
        if self.matrix:
            self.data = [[self._filtered(d, bounds) for d in row] for row in self.data]
        else:
            self.data = self._filtered(self.data, bounds)

    def _mul_uni(self, d: Dict, pos: int, uni: Dict[int, Any]) -> Dict:
        out: Dict[Tuple[int, ...], Any] = {}
        for key, c in d.items():
            base = key[pos]
            pre, post = key[:pos], key[pos + 1:]
            for e, ce in uni.items():
                nk = pre + (base + e,) + post
                prev = out.get(nk)
                out[nk] = c * ce if prev is None else prev + c * ce
        return out

    def mul_node(self, v: int, node):
        """Multiply by the per-variable factor; v must already be active
        (or is appended when the chain starts)."""
        if v not in self.vars:
            self.vars.append(v)
            if self.matrix:
                self.data = [[{k + (0,): c for k, c in d.items()} for d in row]
                             for row in self.data]
            else:
                self.data = {k + (0,): c for k, c in self.data.items()}
        pos = self.vars.index(v)
        if self.matrix:
            res = [[None, None], [None, None]]
            for i, row in enumerate(self.data):
                for j in range(2):
                    acc: Dict = {}
                    for k in range(2):
                        nd = node[k][j]
                        if not nd or not row[k]:
                            continue
                        part = self._mul_uni(row[k], pos, nd)
                        if acc:
                            for kk, cc in part.items():
                                prev = acc.get(kk)
                                acc[kk] = cc if prev is None else prev + cc
                        else:
                            acc = part
                    res[i][j] = acc
            self.data = res
        else:
            self.data = self._mul_uni(self.data, pos, node)

    def _mul_edge_dict(self, d: Dict, pos_u: int, pos_v: Optional[int],
                       by_eu: Dict[int, List[Tuple[int, Any]]],
                       complete_point: Optional[int]) -> Dict:
        out: Dict[Tuple[int, ...], Any] = {}
        for key, c in d.items():
            base_u = key[pos_u]
            if complete_point is not None:
                terms = by_eu.get(complete_point - base_u)
                if not terms:
                    continue
                rk = key[:pos_u] + key[pos_u + 1:]
                for ev, ce in terms:
                    if pos_v is None:
                        nk = rk + (ev,)
                    else:
                        pv = pos_v if pos_v < pos_u else pos_v - 1
                        nk = rk[:pv] + (rk[pv] + ev,) + rk[pv + 1:]
                    prev = out.get(nk)
                    out[nk] = c * ce if prev is None else prev + c * ce
            else:
                for eu, terms in by_eu.items():
                    nu = base_u + eu
                    k2 = key[:pos_u] + (nu,) + key[pos_u + 1:]
                    for ev, ce in terms:
                        if pos_v is None:
                            nk = k2 + (ev,)
                        else:
                            nk = k2[:pos_v] + (k2[pos_v] + ev,) + k2[pos_v + 1:]
                        prev = out.get(nk)
                        out[nk] = c * ce if prev is None else prev + c * ce
        return out

    def mul_edge(self, u: int, v: int, edge: Dict[Tuple[int, int], Any],
                 complete_u: Optional[Target]):
        """Multiply by a two-variable factor joining u (active) and v.

        When ``complete_u`` is a point target, u's slot is resolved and
        removed on the fly; a window target keeps the slot (filtered later).
        """
        pos_u = self.vars.index(u)
        pos_v = self.vars.index(v) if v in self.vars else None
        by_eu: Dict[int, List[Tuple[int, Any]]] = {}
        for (eu, ev), c in edge.items():
            by_eu.setdefault(eu, []).append((ev, c))
        point = complete_u.lo if (complete_u is not None and complete_u.point) else None
        if self.matrix:
            self.data = [[self._mul_edge_dict(d, pos_u, pos_v, by_eu, point)
                          for d in row] for row in self.data]
        else:
            self.data = self._mul_edge_dict(self.data, pos_u, pos_v, by_eu, point)
        if point is not None:
            self.vars.remove(u)
        if pos_v is None:
            self.vars.append(v)

    def trace_scalar(self) -> Dict[Tuple[int, ...], Any]:
        if not self.matrix:
            return self.data
        out = dict(self.data[0][0])
        for k, c in self.data[1][1].items():
            prev = out.get(k)
            out[k] = c if prev is None else prev + c
        return out


# ---------------------------------------------------------------------------
# assembling cyclic sums
# ---------------------------------------------------------------------------

def cyclic_sum(n: int, ring: Ring, shape: RouteShape,
               node_provider: Optional[Callable[[int], Any]],
               edge_provider: Callable[[int, int, int, int, int], Dict[Tuple[int, int], Any]],
               targets: Sequence[Target]) -> Dict[Tuple[int, ...], Any]:
    """Sum over S_n/C_n of the cyclic factor products, coefficient-extracted.

    Returns a dict keyed by the exponent tuples of the window-target
    variables (in variable order); point-target variables are projected out.
    The overall sign/counterterm conventions are applied by the callers.
    """
    if n < 2:
        raise ValueError("cyclic sums need n >= 2")
    targets = list(targets)
    window_vars = [v for v in range(n) if not targets[v].point]
    total: Dict[Tuple[int, ...], Any] = {}
    dedup = shape.matrix_mode
    for sigma, mult in _cycle_reps(n, dedup):
        pairs, kmax, node_lo, edge_lo, maxexp = _plan(n, shape, targets, sigma)
        # render factors
        nodes = {}
        if node_provider is not None:
            for v in range(n):
                nd = node_provider(node_lo[v])
                if shape.matrix_mode:
                    nodes[v] = [[dict(nd.a.coeffs), dict(nd.b.coeffs)],
                                [dict(nd.c.coeffs), dict(nd.d.coeffs)]]
                else:
                    nodes[v] = dict(nd.coeffs)
        edges = []
        esupport = []
        for idx, (u, v) in enumerate(pairs):
            ed = edge_provider(u, v, kmax[idx], edge_lo[(idx, u)], edge_lo[(idx, v)])
            edges.append(ed)
            if ed:
                esupport.append({
                    u: (min(k[0] for k in ed), max(k[0] for k in ed)),
                    v: (min(k[1] for k in ed), max(k[1] for k in ed)),
                })
            else:
                esupport.append({u: (0, 0), v: (0, 0)})
        nsupport = {}
        for v in range(n):
            if node_provider is None:
                nsupport[v] = (0, 0)
            elif shape.matrix_mode:
                es = [e for row in nodes[v] for d in row for e in d]
                nsupport[v] = (min(es), max(es)) if es else (0, 0)
            else:
                es = list(nodes[v])
                nsupport[v] = (min(es), max(es)) if es else (0, 0)

        # remaining-factor supports for pruning
        remaining: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(n)}
        for v in range(n):
            if node_provider is not None:
                remaining[v].append(nsupport[v])
        for idx, (u, v) in enumerate(pairs):
            remaining[u].append(esupport[idx][u])
            remaining[v].append(esupport[idx][v])

        def bounds_for(active: List[int]) -> Dict[int, Tuple[int, int]]:
            b = {}
            for v in active:
                smin = sum(s[0] for s in remaining[v])
                smax = sum(s[1] for s in remaining[v])
                b[v] = (targets[v].lo - smax, targets[v].hi - smin)
            return b

        chain = _Chain(ring, shape.matrix_mode)
        if node_provider is not None:
            chain.mul_node(sigma[0], nodes[sigma[0]])
            remaining[sigma[0]].remove(nsupport[sigma[0]])
        else:
            chain.mul_node(sigma[0], {0: ring.one})
        chain.prune(bounds_for(chain.vars))
        for i in range(n):
            u, v = pairs[i]
            complete = targets[u] if i >= 1 else None
            chain.mul_edge(u, v, edges[i], complete)
            remaining[u].remove(esupport[i][u])
            remaining[v].remove(esupport[i][v])
            chain.prune(bounds_for(chain.vars))
            if i < n - 1:
                if node_provider is not None:
                    chain.mul_node(v, nodes[v])
                    remaining[v].remove(nsupport[v])
                else:
                    pass
                chain.prune(bounds_for(chain.vars))
        flat = chain.trace_scalar()
        # resolve any vars still carrying slots: point vars filtered to their
        # target; window vars re-keyed in variable order
        order = chain.vars
        for key, c in flat.items():
            okey = []
            ok = True
            for v in window_vars:
                if v in order:
                    okey.append(key[order.index(v)])
                else:
                    ok = False
                    break
            for i, v in enumerate(order):
                if targets[v].point and key[i] != targets[v].lo:
                    ok = False
                    break
                if not targets[v].point and not (targets[v].lo <= key[i] <= targets[v].hi):
                    ok = False
                    break
            if not ok:
                continue
            okey = tuple(okey)
            prev = total.get(okey)
            add = c if mult == 1 else ring.scale(c, mult)
            total[okey] = add if prev is None else prev + add
    return {k: c for k, c in total.items() if not ring.is_zero(c)}


# ---------------------------------------------------------------------------
# edge providers
# ---------------------------------------------------------------------------

def trace_edge_provider(ring: Ring):
    """Edges 1/(x_v - x_u) expanded in the fixed region."""
    one = ring.one

    def build(u, v, kmax, lo_u, lo_v):
        out = {}
        if u < v:
            neg = ring.scale(one, -1)
            for k in range(0, kmax + 1):
                if -1 - k < lo_u:
                    break
                out[(-1 - k, k)] = neg
        else:
            for k in range(0, kmax + 1):
                if -1 - k < lo_v:
                    break
                out[(k, -1 - k)] = one
        return out

    return build


def kernel_edge_provider(ring: Ring, reg: Dict[Tuple[int, int], Any],
                         b_even: Optional[Dict[int, Any]] = None):
    """Edges for the scalar kernel routes.

    ``reg`` maps (m, n) with m, n >= 1 to the coefficient of z_u^-m z_v^-n
    in the regular part.  With ``b_even`` given (exponent -> coefficient of
    the even series b(z^2), exponents <= 0), the pole strip is weighted by
    (b(z_u^2) + b(z_v^2))/2; otherwise the strip is the bare 1/(z_u - z_v).
    """
    one = ring.one
    half = rat(1, 2)

    def build(u, v, kmax, lo_u, lo_v):
        out: Dict[Tuple[int, int], Any] = {}

        def put(eu, ev, c):
            if eu < lo_u or ev < lo_v:
                return
            prev = out.get((eu, ev))
            out[(eu, ev)] = c if prev is None else prev + c

        # pole 1/(x_u - x_v) in the fixed region
        strip = []
        if u < v:
            for k in range(0, kmax + 1):
                strip.append((-1 - k, k, 1))
        else:
            for k in range(0, kmax + 1):
                strip.append((k, -1 - k, -1))
        if b_even is None:
            for eu, ev, s in strip:
                put(eu, ev, ring.scale(one, s))
        else:
            for eu, ev, s in strip:
                for j, bj in b_even.items():
                    w = ring.scale(bj, rat(s, 2))
                    put(eu + j, ev, w)
                    put(eu, ev + j, w)
        for (m, n), c in reg.items():
            put(-m, -n, c)
        return {k: c for k, c in out.items() if not ring.is_zero(c)}

    return build


# ---------------------------------------------------------------------------
# public n-point interfaces
# ---------------------------------------------------------------------------

def _weights(p_list: Sequence[int]):
    w = 1
    for p in p_list:
        w *= double_factorial(2 * p + 1)
    return w


def npoint_correlator(node_provider, edge_provider, shape: RouteShape, ring: Ring,
                      p_list: Sequence[int], z_route: bool = False):
    """Omega_{p_1,...,p_n} at the expansion point, one exact coefficient.

    The generating function carries weight prod (2p_j+1)!! on each index;
    the two-point counterterm has no support on strictly negative exponents
    of the subdominant variable, so it never touches point extractions.
    """
    n = len(p_list)
    targets = [Target.at(-(2 * p + 2) if z_route else -(p + 1)) for p in p_list]
    tot = cyclic_sum(n, ring, shape, node_provider, edge_provider, targets)
    val = tot.get((), ring.zero)
    return ring.scale(val, rat(-1, _weights(p_list)))


def npoint_series(node_provider, edge_provider, shape: RouteShape, ring: Ring,
                  n: int, lo: Sequence[int], hi: Sequence[int] | int = 2,
                  variables: Optional[Sequence[str]] = None,
                  z_route: bool = False) -> MultiSeries:
    """The full n-point generating series on a per-variable window.

    Includes the minus sign and, for n = 2, the counterterm; the result
    contains only strictly negative powers of every variable (tested by the
    regularity suite).
    """
    if isinstance(hi, int):
        hi = [hi] * n
    variables = list(variables or ["x%d" % (i + 1) for i in range(n)])
    targets = [Target(lo[i], hi[i]) for i in range(n)]
    tot = cyclic_sum(n, ring, shape, node_provider, edge_provider, targets)
    out = MultiSeries(variables, ring, {k: ring.scale(c, -1) for k, c in tot.items()}, lo)
    if n == 2:
        ct = _counterterm(variables, ring, lo, shape, z_route,
                          node_provider, edge_provider)
        # clip to the requested window: the sum and the counterterm only
        # represent the generating series jointly inside it
        ct = MultiSeries(variables, ring,
                         {k: c for k, c in ct.coeffs.items()
                          if all(e <= h for e, h in zip(k, hi))}, lo)
        out = out - ct
    return out


def _counterterm(variables, ring, lo, shape, z_route, node_provider, edge_provider) -> MultiSeries:
    if shape.matrix_mode and not z_route:
        # (x1 + x2)/(x1 - x2)^2 = sum_k (k+1) [x2^k x1^(-1-k) + x2^(k+1) x1^(-2-k)]
        out = {}
        for k in range(0, -lo[0] + 1):
            c = ring.scale(ring.one, k + 1)
            if -1 - k >= lo[0]:
                out[(-1 - k, k)] = out.get((-1 - k, k), ring.zero) + c
            if -2 - k >= lo[0]:
                out[(-2 - k, k + 1)] = out.get((-2 - k, k + 1), ring.zero) + c
        return MultiSeries(variables, ring, out, lo)
    # 1/(z1 - z2)^2
    return expand_inverse_difference(variables, 0, 1, 2, ring, lo)


def npoint_mixed(node_provider, edge_provider, shape: RouteShape, ring: Ring,
                 fixed_p: Sequence[int], free_lo: int, var: str = "lam",
                 z_route: bool = False) -> TruncSeries:
    """Generating series in one free variable with the other indices fixed.

    Returns sum_p (stuff) x^(-p-1) for the LAST variable with the first
    indices projected onto p_1, ..., p_{n-1}; the fixed-index double
    factorial weights are divided out, the free variable keeps its
    (2p+1)!! weight.  The overall minus sign is applied; the free variable
    window is strictly negative so the counterterm never contributes.
    """
    n = len(fixed_p) + 1
    targets = [Target.at(-(2 * p + 2) if z_route else -(p + 1)) for p in fixed_p]
    targets.append(Target(free_lo, -1))
    tot = cyclic_sum(n, ring, shape, node_provider, edge_provider, targets)
    coeffs = {k[0]: ring.scale(c, rat(-1, _weights(fixed_p))) for k, c in tot.items()}
    return TruncSeries(var, ring, coeffs, free_lo)

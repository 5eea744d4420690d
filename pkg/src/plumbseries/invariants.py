"""Named series of a plumbing graph: Z, its h-components, reduced and relative
versions, the Laufer-side P, Hilbert inversion, twisted zeta and the
superisolated defect polynomial N(t)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .graph_model import GraphError, ResolutionGraph
from .lattice import Cycle, GroupClass, Lattice, LatticeError, lattice_of, resolve_vertices
from .laufer import Kind, UnsupportedClassification, classify, compute_J
from .series import (
    FactoredRationalFunction,
    InsufficientCap,
    MultiSeries,
    ReducedSeries,
    SeriesError,
    binomial_coefficient_chi,
    expand_factored,
    series_sub_difference,
    simplex_points,
)

MAX_LAUFER_VERTICES = 14


class InvariantError(ValueError):
    code = "invariant_error"


class NonIntegralMultiplicity(InvariantError):
    code = "non_integral_multiplicity"


def _deltas(graph: ResolutionGraph, relative: bool) -> list[int]:
    deg = graph.degrees()
    if relative:
        return [d + a for d, a in zip(deg, graph.arrows)]
    return list(deg)


def _support_bounds(deltas: Sequence[int]) -> list[int | None]:
    # chi_{delta,n} vanishes for n > delta - 2 once delta >= 2
    return [d - 2 if d >= 2 else None for d in deltas]


def _coefficient(deltas: Sequence[int], n: Sequence[int]) -> int:
    c = 1
    for dj, nj in zip(deltas, n):
        c *= binomial_coefficient_chi(dj, nj)
        if not c:
            return 0
    return c


def _series(graph: ResolutionGraph, cap: int, relative: bool, h: GroupClass | None) -> MultiSeries:
    lat = lattice_of(graph)
    deltas = _deltas(graph, relative)
    key = None if h is None else lat.key_of_class(h)
    terms = {}
    for n in simplex_points(graph.size, cap, _support_bounds(deltas)):
        c = _coefficient(deltas, n)
        if c and (key is None or lat.residue_key(n) == key):
            terms[n] = c
    return MultiSeries(graph, cap, terms)


def z_series(graph: ResolutionGraph, cap: int) -> MultiSeries:
    """Taylor expansion of prod_j (1 - x_j)^(delta_j - 2), x_j = t^{E*_j}, on sum(n) <= cap."""
    return _series(graph, cap, False, None)


def z_h_series(graph: ResolutionGraph, h: GroupClass, cap: int) -> MultiSeries:
    return _series(graph, cap, False, h)


def _reduced(graph: ResolutionGraph, subset, h: GroupClass | None, bound, relative: bool) -> ReducedSeries:
    lat = lattice_of(graph)
    idx = resolve_vertices(graph, subset)
    bound = Fraction(bound)
    if bound < 0:
        raise SeriesError("bound must be nonnegative")
    d = lat.order
    deltas = _deltas(graph, relative)
    ub = _support_bounds(deltas)
    budget0 = [math.floor(bound * d)] * len(idx)
    # weights[j][k]: d * coordinate of E*_j at vertex idx[k]; all positive
    weights = [[col[i] for i in idx] for col in lat.dual_scaled]
    key = None if h is None else lat.key_of_class(h)
    s = graph.size
    out: dict = {}
    residue = [0] * s

    def rec(j, budget, coeff):
        if j == s:
            if key is not None and tuple(r % d for r in residue) != key:
                return
            e = tuple(Fraction(b0 - b, d) for b0, b in zip(budget0, budget))
            out[e] = out.get(e, 0) + coeff
            return
        top = min(b // w for b, w in zip(budget, weights[j]))
        if ub[j] is not None:
            top = min(top, ub[j])
        col = lat.dual_scaled[j]
        for nj in range(top + 1):
            c = binomial_coefficient_chi(deltas[j], nj)
            if c:
                if nj and key is not None:
                    for i in range(s):
                        residue[i] += nj * col[i]
                rec(j + 1, [b - nj * w for b, w in zip(budget, weights[j])], coeff * c)
                if nj and key is not None:
                    for i in range(s):
                        residue[i] -= nj * col[i]

    rec(0, budget0, 1)
    return ReducedSeries(tuple(graph.ids[i] for i in idx), bound, out)


def z_reduced(graph: ResolutionGraph, subset, h: GroupClass | None = None, bound=0) -> ReducedSeries:
    """Z_h with t_j = 1 for j outside ``subset``, complete up to ``bound``.

    Enumerates exactly the dual-coordinate vectors that can reach an exponent
    inside the window, which is the region a certified projection of the full
    series would need.
    """
    return _reduced(graph, subset, h, bound, relative=False)


def z_relative(graph: ResolutionGraph, cap: int | None = None, subset=None, h: GroupClass | None = None, bound=None):
    """Z^C: valencies augmented by the arrow counts.  Reduced when ``subset`` is given."""
    if not graph.has_arrows():
        raise InvariantError("graph carries no arrows; use z_series")
    if subset is None:
        if cap is None:
            raise InvariantError("cap is required for the unreduced relative series")
        return _series(graph, cap, True, h)
    if bound is None:
        raise InvariantError("bound is required for the reduced relative series")
    return _reduced(graph, subset, h, bound, relative=True)


# -- the chi-sum side -------------------------------------------------------------


def _subsets(n: int):
    for k in range(n + 1):
        yield from combinations(range(n), k)


def chi_sum_lhs(graph: ResolutionGraph, n: Sequence[int]) -> int:
    """sum over I of (-1)^(|I|+1) chi(l' + E_J(l', I)) with l' = sum n_j E*_j, computed directly."""
    lat = lattice_of(graph)
    if len(n) != lat.n or min(n) < 0:
        raise InvariantError("n must be a nonnegative vector indexed by the vertices")
    lp = lat.from_dual_coordinates(n)
    total = Fraction(0)
    for I in _subsets(lat.n):
        J, _ = compute_J(lat, lp, I)
        total += (-1) ** (len(I) + 1) * lat.chi(tuple(x + int(i in J) for i, x in enumerate(lp)))
    if total.denominator != 1:
        raise InvariantError("non-integral chi sum")
    return int(total)


def _closure_tables(graph: ResolutionGraph, keys: Sequence[Sequence[int]]):
    """For each clipped n, the base part and the n-coefficients of the chi sum.

    With l' = sum n_j E*_j, a vertex j outside J joins J(l', I) exactly when
    more than n_j of its neighbours lie in J, and
    chi(l' + E_J) - chi(l') = |J| - e(J) + sum_{j in J} n_j, where e(J) counts
    edges inside J.  The alternating sum over I cancels chi(l').  Membership
    only depends on min(n_j, delta_j), so ``keys`` are clipped vectors.
    """
    import numpy as np

    s = graph.size
    adj = np.zeros((s, s), dtype=np.int16)
    for a, b in graph.edges:
        adj[a, b] = adj[b, a] = 1
    subsets = (np.arange(1 << s)[:, None] >> np.arange(s)[None, :]) & 1
    sign = np.where(subsets.sum(axis=1) % 2 == 1, 1, -1)
    out = {}
    chunk = max(1, 200000 // (1 << s))
    for start in range(0, len(keys), chunk):
        block = np.array(keys[start:start + chunk], dtype=np.int16)
        masks = np.broadcast_to(subsets[None], (len(block), 1 << s, s)).astype(np.int16)
        thresh = block[:, None, :]
        while True:
            grow = (masks == 0) & ((masks @ adj) > thresh)
            if not grow.any():
                break
            masks = masks | grow
        inner = ((masks @ adj) * masks).sum(axis=2) // 2
        base = ((masks.sum(axis=2) - inner) * sign[None, :]).sum(axis=1)
        coeff = (masks * sign[None, :, None]).sum(axis=1)
        for k, b, c in zip(keys[start:start + chunk], base, coeff):
            out[tuple(k)] = (int(b), tuple(int(x) for x in c))
    return out


def chi_sum_batch(graph: ResolutionGraph, points: Sequence[Sequence[int]]) -> dict[tuple[int, ...], int]:
    """chi_sum_lhs for many n at once (integer closure, numpy over subsets)."""
    deg = graph.degrees()
    clip = {tuple(n): tuple(min(x, d) for x, d in zip(n, deg)) for n in points}
    table = _closure_tables(graph, sorted(set(clip.values())))
    out = {}
    for n, k in clip.items():
        base, coeff = table[k]
        out[n] = base + sum(c * x for c, x in zip(coeff, n))
    return out


def z_coefficient(graph: ResolutionGraph, n: Sequence[int], relative: bool = False) -> int:
    return _coefficient(_deltas(graph, relative), n)


# -- topological P via computation sequences --------------------------------------


class _LauferMemo:
    """chi(s(y)) - chi(y), keyed by the pairing vector of y (the sequence only sees pairings)."""

    def __init__(self, lat: Lattice):
        self.lat = lat
        self.memo: dict[tuple[int, ...], int] = {}
        self.diag = [lat.matrix[j][j] for j in range(lat.n)]

    def dchi(self, q: list[int]) -> int:
        memo = self.memo
        path = []
        n = self.lat.n
        nbrs = self.lat.neighbor_lists
        acc = 0
        while True:
            key = tuple(q)
            hit = memo.get(key)
            if hit is not None:
                acc_end = acc + hit
                break
            j = next((j for j in range(n) if q[j] > 0), None)
            if j is None:
                acc_end = acc
                memo[key] = 0
                break
            path.append((key, acc))
            acc += 1 - q[j]
            for i in nbrs[j]:
                q[i] += 1
            q[j] += self.diag[j]
            if len(path) > 100000:
                raise RuntimeError("computation sequence does not terminate")
        for key, before in path:
            memo[key] = acc_end - before
        return acc_end


def _require_laufer_graph(graph: ResolutionGraph):
    lat = lattice_of(graph)
    if lat.n > MAX_LAUFER_VERTICES:
        raise InvariantError(f"{lat.n} vertices exceed the limit of {MAX_LAUFER_VERTICES} for subset sums")
    cls = classify(lat)
    if cls.kind not in (Kind.RATIONAL, Kind.MINIMALLY_ELLIPTIC):
        raise UnsupportedClassification(
            f"P is only known to be topological (h^1 vanishing) for rational or minimally elliptic graphs; "
            f"this graph is {cls.kind.value}"
        )
    return lat, cls


def laufer_chi_sum(lat: Lattice, n: Sequence[int], memo: _LauferMemo | None = None) -> int:
    """sum over I of (-1)^(|I|+1) chi(s(l' + E_I)) for l' = sum n_j E*_j."""
    memo = memo or _LauferMemo(lat)
    m = lat.matrix
    s = lat.n
    total = 0
    for I in _subsets(s):
        q = [-x for x in n]
        for k in I:
            for j in range(s):
                q[j] += m[j][k]
        inside = sum(1 for a, b in lat.graph.edges if a in I and b in I)
        # chi(l' + E_I) - chi(l') = chi(E_I) - (l', E_I)
        start = len(I) - inside + sum(n[k] for k in I)
        total += (-1) ** (len(I) + 1) * (start + memo.dchi(q))
    return total


def p_laufer(graph: ResolutionGraph, cap: int) -> MultiSeries:
    """p_g t^0 + sum over l' in S' of sum_I (-1)^(|I|+1) chi(s(l'+E_I)) t^l'."""
    lat, cls = _require_laufer_graph(graph)
    memo = _LauferMemo(lat)
    terms = {}
    for n in simplex_points(lat.n, cap):
        c = laufer_chi_sum(lat, n, memo)
        if not any(n):
            c += cls.pg_topological
        if c:
            terms[n] = c
    return MultiSeries(graph.without_arrows(), cap, terms)


# -- Hilbert inversion ---------------------------------------------------------------


def hilbert_function(p: MultiSeries) -> Callable[[Sequence], int]:
    """h(l') = sum of p(s) over s in S' with [s] = [l'] and s - l' not >= 0."""
    lat = p.lattice
    d = lat.order
    mu = lat.min_dual_coordinate
    table = []
    for n, c in p.terms.items():
        scaled = [sum(nj * col[i] for nj, col in zip(n, lat.dual_scaled)) for i in range(lat.n)]
        table.append((tuple(x % d for x in scaled), scaled, c))

    def h(query: Sequence) -> int:
        query = tuple(Fraction(x) for x in query)
        if not lat.is_in_dual_lattice(query):
            raise LatticeError("query cycle is not in L'")
        top = max(query)
        if top <= 0:
            return 0
        need = math.ceil(top / mu)
        if p.cap < need:
            raise InsufficientCap(need, p.cap)
        scaled_q = [int(x * d) for x in query]
        key = tuple(x % d for x in scaled_q)
        return sum(
            c for k, e, c in table if k == key and any(a < b for a, b in zip(e, scaled_q))
        )

    return h


def hilbert_from_p(p: MultiSeries, query: Sequence) -> int:
    return hilbert_function(p)(query)


def hilbert_cap(lat: Lattice, window: int) -> int:
    """Cap of P needed to evaluate h(l' + E_I) for every l' = sum n_j E*_j with sum(n) <= window."""
    d = lat.order
    top = max(max(col) for col in lat.dual_scaled) * window + d
    return math.ceil(Fraction(top, d) / lat.min_dual_coordinate)


def p_from_hilbert(h: Callable[[Sequence], int], lat: Lattice, n: Sequence[int]) -> int:
    """Coefficient of t^l' in -H(t) prod_j (1 - t_j^-1)."""
    lp = lat.from_dual_coordinates(n)
    total = 0
    for I in _subsets(lat.n):
        total += (-1) ** (len(I) + 1) * h(tuple(x + int(i in I) for i, x in enumerate(lp)))
    return total


# -- curve germs: multiplicities and twisted zeta -----------------------------------------


@dataclass(frozen=True)
class MultiplicityVector:
    m: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.m)


def multiplicity_vector(graph: ResolutionGraph) -> MultiplicityVector:
    """m = sum_i a_i E*_i for arrow counts a_i; must be integral."""
    if not graph.has_arrows():
        raise InvariantError("graph carries no arrows")
    lat = lattice_of(graph)
    d = lat.order
    scaled = [sum(a * col[i] for a, col in zip(graph.arrows, lat.dual_scaled)) for i in range(lat.n)]
    if any(x % d for x in scaled):
        frac = ", ".join(str(Fraction(x, d)) for x in scaled)
        raise NonIntegralMultiplicity(f"arrows do not cut out a function divisor: m = ({frac})")
    return MultiplicityVector(tuple(x // d for x in scaled))


def acampo_zeta(graph: ResolutionGraph, var: str = "t") -> FactoredRationalFunction:
    """prod_j (1 - t^{m_j})^(delta^C_j - 2)."""
    m = multiplicity_vector(graph).m
    deltas = _deltas(graph, relative=True)
    factors: dict[int, int] = {}
    for mj, dj in zip(m, deltas):
        factors[mj] = factors.get(mj, 0) + dj - 2
    return FactoredRationalFunction.univariate(factors, var=var)


# -- the superisolated defect polynomial ---------------------------------------------------


@dataclass(frozen=True)
class NPolyResult:
    n_poly: tuple[int, ...]
    n_at_one: int
    symmetric: bool

    def to_json(self) -> dict:
        return {"coeffs": list(self.n_poly), "n_at_one": self.n_at_one, "symmetric": self.symmetric}


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
    if b[-1] not in (1, -1):
        raise ValueError("divisor must be monic up to sign")
    q = [0] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * b[-1]
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    if any(a):
        raise ValueError("polynomial division is not exact")
    return q


def torus_knot_alexander(p: int, q: int) -> list[int]:
    """Coefficients of (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), constant term first."""
    def xm1(k):
        return [-1] + [0] * (k - 1) + [1]

    return poly_divexact(poly_divexact(poly_mul(xm1(p * q), xm1(1)), xm1(p)), xm1(q))


def _finish_n_poly(diff: Sequence[int], d: int) -> NPolyResult:
    top = d - 3
    extra = [k for k in range(max(top + 1, 0), len(diff)) if diff[k]]
    if extra:
        raise InvariantError(
            f"N(t) has a nonzero coefficient at t^{extra[0]}, beyond degree d-3 = {top}; inconsistent input"
        )
    coeffs = tuple(diff[: max(top + 1, 0)])
    symmetric = all(coeffs[k] == coeffs[top - k] for k in range(len(coeffs)))
    if not symmetric:
        raise InvariantError(f"N(t) = {list(coeffs)} is not symmetric of degree d-3 = {top}")
    if coeffs and coeffs[0]:
        raise InvariantError("N(0) is nonzero")
    return NPolyResult(coeffs, sum(coeffs), symmetric)


def _tangent_cone_series(d: int, top: int) -> list[int]:
    # (1 - t^d) / (1 - t)^3
    return [math.comb(k + 2, 2) - (math.comb(k - d + 2, 2) if k >= d else 0) for k in range(top + 1)]


def superisolated_n_poly(d: int, delta: Sequence[int], window: int | None = None) -> NPolyResult:
    """N(t) from the degree d and the product Delta of local characteristic polynomials.

    The root-of-unity average over u = t^{1/d} keeps exactly the u-exponents
    divisible by d, so everything stays in integers.
    """
    if d < 2:
        raise InvariantError("degree must be at least 2")
    delta = list(delta)
    window = window if window is not None else d + len(delta) // d + 3
    length = d * window + 1
    # Delta(u) / (1 - u)^2
    u = [0] * length
    for i, c in enumerate(delta):
        if c:
            for k in range(i, length):
                u[k] += c * (k - i + 1)
    zeta0 = [u[d * k] for k in range(window + 1)]
    ref = _tangent_cone_series(d, window)
    return _finish_n_poly([a - b for a, b in zip(zeta0, ref)], d)


def n_poly_from_graph(graph: ResolutionGraph, vertex, bound=None) -> NPolyResult:
    """N(t) = Z_0 reduced to the curve vertex minus (1 - t^d)/(1 - t)^3, d = |H|."""
    lat = lattice_of(graph)
    d = lat.order
    bound = Fraction(bound if bound is not None else 2 * d)
    if bound < d - 3:
        raise InvariantError(f"bound must cover degree d-3 = {d - 3}")
    z0 = z_reduced(graph, [vertex], GroupClass.zero(lat.n), bound)
    var = z0.variables[0]
    ref = expand_factored(FactoredRationalFunction.univariate({d: 1, 1: -3}, var=var), bound)
    diff = series_sub_difference(z0, ref)
    uni = diff.univariate()
    if any(e.denominator != 1 for e in uni):
        raise InvariantError("class-0 reduced series has fractional exponents")
    top = math.floor(bound)
    return _finish_n_poly([uni.get(Fraction(k), 0) for k in range(top + 1)], d)


def dual_coordinates_window(lat: Lattice, total: int) -> Iterable[tuple[int, ...]]:
    return simplex_points(lat.n, total)

"""Exact arithmetic on L = Z<E_j> inside L' = Z<E*_j> for a fixed resolution graph.

Cycles are tuples of :class:`fractions.Fraction` holding coordinates in the
basis ``E_j``.  Everything here is exact; there is no floating point.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph_model import GraphError, ResolutionGraph, require_valid

Cycle = tuple[Fraction, ...]


class LatticeError(ValueError):
    code = "lattice_error"


class NotInDualLattice(LatticeError):
    code = "not_in_dual_lattice"


def q_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def cycle_to_json(c: Sequence[Fraction]) -> list[str]:
    return [q_str(x) for x in c]


def cycle_from_json(items: Iterable[str | int]) -> Cycle:
    return tuple(parse_rational(str(x)) for x in items)


@dataclass(frozen=True, order=True)
class GroupClass:
    """Element of H = L'/L, stored as the coordinates of its unit-cube representative."""

    frac: tuple[Fraction, ...]

    @classmethod
    def zero(cls, n: int) -> "GroupClass":
        return cls((Fraction(0),) * n)

    def is_zero(self) -> bool:
        return not any(self.frac)

    def to_json(self) -> list[str]:
        return cycle_to_json(self.frac)


def _inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class Lattice:
    """Intersection lattice of a validated negative definite plumbing tree.

    The inverse of the intersection matrix is computed once.  ``dual_scaled``
    holds ``d * E*_j`` as integer columns, ``d = |det I| = |H|``.
    """

    def __init__(self, graph: ResolutionGraph):
        self.graph = require_valid(graph)
        self.n = graph.size
        self.matrix = graph.intersection_matrix()
        inv = _inverse(self.matrix)
        # -I^{-1}: column j holds the coordinates of E*_j.
        self._dual = [[-inv[i][j] for i in range(self.n)] for j in range(self.n)]
        from .graph_model import validate

        self.det = validate(graph).determinant
        self.order = abs(self.det)
        d = self.order
        self.dual_scaled = [tuple(int(x * d) for x in col) for col in self._dual]
        self.degrees = graph.degrees()
        self.neighbor_lists = [graph.neighbors(i) for i in range(self.n)]

    # -- elementary cycles ------------------------------------------------------

    def zero(self) -> Cycle:
        return (Fraction(0),) * self.n

    def basis(self, j: int | str) -> Cycle:
        j = self.graph.index(j)
        return tuple(Fraction(int(i == j)) for i in range(self.n))

    def e_subset(self, subset: Iterable[int | str]) -> Cycle:
        idx = {self.graph.index(v) for v in subset}
        return tuple(Fraction(int(i in idx)) for i in range(self.n))

    def total(self) -> Cycle:
        return (Fraction(1),) * self.n

    def dual_cycle(self, j: int | str) -> Cycle:
        return tuple(self._dual[self.graph.index(j)])

    def from_dual_coordinates(self, n: Sequence[int]) -> Cycle:
        if len(n) != self.n:
            raise LatticeError("dual coordinate vector has wrong length")
        d = self.order
        return tuple(
            Fraction(sum(nj * col[i] for nj, col in zip(n, self.dual_scaled)), d) for i in range(self.n)
        )

    # -- the form -----------------------------------------------------------------

    def _check(self, c: Sequence) -> None:
        if len(c) != self.n:
            raise LatticeError(f"cycle has {len(c)} coordinates, graph has {self.n} vertices")

    def pairing_vector(self, c: Sequence) -> tuple[Fraction, ...]:
        """``((c, E_j))_j``."""
        self._check(c)
        m = self.matrix
        return tuple(sum((m[j][i] * c[i] for i in range(self.n) if m[j][i]), Fraction(0)) for j in range(self.n))

    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        self._check(a)
        self._check(b)
        return sum((x * y for x, y in zip(self.pairing_vector(a), b)), Fraction(0))

    def is_in_dual_lattice(self, c: Sequence) -> bool:
        return all(p.denominator == 1 for p in self.pairing_vector(c))

    def to_dual_coordinates(self, c: Sequence) -> tuple[int, ...]:
        """``n`` with ``c = sum n_j E*_j``, i.e. ``n_j = -(c, E_j)``."""
        pv = self.pairing_vector(c)
        if any(p.denominator != 1 for p in pv):
            raise NotInDualLattice("cycle is not in L'")
        return tuple(-int(p) for p in pv)

    @functools.cached_property
    def canonical(self) -> Cycle:
        """K with (K, E_j) = -e_j - 2 for every j."""
        rhs = [Fraction(-2 - e) for e in self.graph.euler]
        # K = I^{-1} rhs = -sum_j rhs_j E*_j
        return tuple(-sum((r * self._dual[j][i] for j, r in enumerate(rhs)), Fraction(0)) for i in range(self.n))

    def canonical_cycle(self) -> Cycle:
        return self.canonical

    def chi(self, c: Sequence) -> Fraction:
        s = tuple(x + k for x, k in zip(c, self.canonical))
        return -self.pair(c, s) / 2

    # -- the group H ------------------------------------------------------------

    def class_of(self, c: Sequence) -> GroupClass:
        if not self.is_in_dual_lattice(c):
            raise NotInDualLattice("cycle is not in L'")
        return GroupClass(tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in c))

    def residue_key(self, n: Sequence[int]) -> tuple[int, ...]:
        """Integer key of the class of ``sum n_j E*_j``: ``d`` times its unit-cube coordinates."""
        d = self.order
        return tuple(sum(nj * col[i] for nj, col in zip(n, self.dual_scaled)) % d for i in range(self.n))

    def class_from_key(self, key: Sequence[int]) -> GroupClass:
        return GroupClass(tuple(Fraction(k, self.order) for k in key))

    def key_of_class(self, h: GroupClass) -> tuple[int, ...]:
        if len(h.frac) != self.n:
            raise LatticeError("class vector has wrong length")
        key = []
        for x in h.frac:
            y = x * self.order
            if y.denominator != 1 or not 0 <= x < 1:
                raise LatticeError(f"class coordinate {x} incompatible with |H| = {self.order}")
            key.append(int(y))
        key = tuple(key)
        if key not in self._class_keys:
            raise LatticeError("fractional vector is not the representative of a class of H")
        return key

    @functools.cached_property
    def _class_keys(self) -> frozenset:
        d = self.order
        gens = {tuple(x % d for x in col) for col in self.dual_scaled}
        seen = {(0,) * self.n}
        frontier = list(seen)
        while frontier:
            nxt = []
            for k in frontier:
                for g in gens:
                    s = tuple((a + b) % d for a, b in zip(k, g))
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(seen)

    def classes(self) -> list[GroupClass]:
        """All |H| classes, sorted."""
        return sorted(self.class_from_key(k) for k in self._class_keys)

    @functools.cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        from sympy import Matrix, ZZ
        from sympy.matrices.normalforms import invariant_factors

        facs = invariant_factors(Matrix(self.matrix), domain=ZZ)
        return tuple(abs(int(f)) for f in facs if abs(int(f)) != 1)

    def group_structure(self) -> tuple[int, tuple[int, ...]]:
        return self.order, self.invariant_factors

    # -- cones ------------------------------------------------------------------

    def membership(self, c: Sequence) -> dict[str, bool]:
        pv = self.pairing_vector(c)
        in_lp = all(p.denominator == 1 for p in pv)
        in_l = all(Fraction(x).denominator == 1 for x in c)
        anti_nef = all(p <= 0 for p in pv)
        return {
            "in_L": in_l,
            "in_L'": in_lp,
            "effective": all(x >= 0 for x in c),
            "in_S'": in_lp and anti_nef,
            "in_S": in_l and anti_nef,
        }

    @functools.cached_property
    def min_dual_coordinate(self) -> Fraction:
        return min(Fraction(x, self.order) for col in self.dual_scaled for x in col)

    def min_dual_coordinate_on(self, subset: Iterable[int]) -> Fraction:
        """Smallest coordinate at a vertex of ``subset`` among all ``E*_j``."""
        idx = list(subset)
        return min(Fraction(col[i], self.order) for col in self.dual_scaled for i in idx)


@functools.lru_cache(maxsize=512)
def lattice_of(graph: ResolutionGraph) -> Lattice:
    """Cached :class:`Lattice` per (immutable, hashable) graph."""
    return Lattice(graph)


def resolve_vertices(graph: ResolutionGraph, vertices: Iterable[int | str]) -> tuple[int, ...]:
    out = sorted({graph.index(v) for v in vertices})
    if not out:
        raise GraphError("empty vertex set")
    return tuple(out)

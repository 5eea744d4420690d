"""Truncated exact series: multi-indexed by dual coordinates, or reduced to a vertex subset.

A :class:`MultiSeries` is indexed by ``n`` in N^s, the exponent of
``x_j = t^{E*_j}``; only the simplex ``sum(n) <= cap`` is represented.  A
:class:`ReducedSeries` carries rational exponents over a vertex subset ``U``
and is complete for every exponent whose coordinates are all ``<= certified_bound``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .graph_model import ResolutionGraph
from .lattice import GroupClass, Lattice, lattice_of, q_str


class SeriesError(ValueError):
    code = "series_error"


class InsufficientCap(SeriesError):
    code = "insufficient_cap"

    def __init__(self, required: int, have: int):
        super().__init__(f"enumeration cap {have} is too small; at least {required} is required")
        self.required = required


def binomial_coefficient_chi(delta: int, n: int) -> int:
    """Coefficient of x^n in (1 - x)^(delta - 2)."""
    if delta < 0 or n < 0:
        raise ValueError("delta and n must be nonnegative")
    k = delta - 2
    if k >= 0:
        return (-1) ** n * math.comb(k, n) if n <= k else 0
    return math.comb(-k + n - 1, n)


def simplex_points(s: int, cap: int, upper: Sequence[int | None] | None = None) -> Iterator[tuple[int, ...]]:
    """All n in N^s with sum(n) <= cap (and n_j <= upper[j] when given), lexicographic."""
    upper = upper or [None] * s
    cur = [0] * s

    def rec(j, budget):
        if j == s:
            yield tuple(cur)
            return
        top = budget if upper[j] is None else min(budget, upper[j])
        for v in range(top + 1):
            cur[j] = v
            yield from rec(j + 1, budget - v)
        cur[j] = 0

    yield from rec(0, cap)


@dataclass
class MultiSeries:
    graph: ResolutionGraph
    cap: int
    terms: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        s = self.graph.size
        for n, c in list(self.terms.items()):
            if len(n) != s or min(n) < 0 or sum(n) > self.cap:
                raise SeriesError(f"term {n} outside the declared region")
            if c == 0:
                del self.terms[n]

    @property
    def lattice(self) -> Lattice:
        return lattice_of(self.graph)

    def coefficient(self, n: Sequence[int]) -> int:
        n = tuple(n)
        if sum(n) > self.cap:
            raise InsufficientCap(sum(n), self.cap)
        return self.terms.get(n, 0)

    def exponent(self, n: Sequence[int]):
        return self.lattice.from_dual_coordinates(n)

    def restrict(self, cap: int) -> "MultiSeries":
        cap = min(cap, self.cap)
        return MultiSeries(self.graph, cap, {n: c for n, c in self.terms.items() if sum(n) <= cap})

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.graph == other.graph and self.cap == other.cap and self.terms == other.terms

    def to_json(self) -> dict:
        lat = self.lattice
        return {
            "variables": list(self.graph.ids),
            "cap": self.cap,
            "terms": [
                {
                    "n": list(n),
                    "exponent": [q_str(x) for x in lat.from_dual_coordinates(n)],
                    "coeff": str(c),
                }
                for n, c in self.items()
            ],
        }


@dataclass
class ReducedSeries:
    variables: tuple[str, ...]
    certified_bound: Fraction
    terms: dict[tuple[Fraction, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        self.certified_bound = Fraction(self.certified_bound)
        clean = {}
        for e, c in self.terms.items():
            e = tuple(Fraction(x) for x in e)
            if len(e) != len(self.variables):
                raise SeriesError("exponent length does not match the variables")
            if any(x < 0 for x in e):
                raise SeriesError(f"negative exponent {e}")
            if any(x > self.certified_bound for x in e):
                continue
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    def coefficient(self, exponent) -> int:
        if not isinstance(exponent, (tuple, list)):
            exponent = (exponent,)
        e = tuple(Fraction(x) for x in exponent)
        if any(x > self.certified_bound for x in e):
            raise SeriesError(f"exponent {e} beyond the certified bound {self.certified_bound}")
        return self.terms.get(e, 0)

    def items(self) -> list[tuple[tuple[Fraction, ...], int]]:
        return sorted(self.terms.items())

    def restrict(self, bound) -> "ReducedSeries":
        bound = min(Fraction(bound), self.certified_bound)
        return ReducedSeries(self.variables, bound, dict(self.terms))

    def univariate(self) -> dict[Fraction, int]:
        if len(self.variables) != 1:
            raise SeriesError("series has more than one variable")
        return {e[0]: c for e, c in self.terms.items()}

    def integer_coefficients(self) -> list[int]:
        """Coefficients of t^0 .. t^floor(B) for a one-variable series with integral exponents."""
        uni = self.univariate()
        if any(e.denominator != 1 for e in uni):
            raise SeriesError("series has fractional exponents")
        top = math.floor(self.certified_bound)
        return [uni.get(Fraction(k), 0) for k in range(top + 1)]

    def __eq__(self, other):
        if not isinstance(other, ReducedSeries):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.certified_bound == other.certified_bound
            and self.terms == other.terms
        )

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "certified_bound": q_str(self.certified_bound),
            "terms": [{"exponent": [q_str(x) for x in e], "coeff": str(c)} for e, c in self.items()],
        }


@dataclass(frozen=True)
class FactoredRationalFunction:
    """``sign * t^monomial * prod (1 - t^a)^m`` over the variables ``variables``."""

    variables: tuple[str, ...]
    factors: tuple[tuple[tuple[Fraction, ...], int], ...]
    sign: int = 1
    monomial: tuple[Fraction, ...] = ()

    def __post_init__(self):
        k = len(self.variables)
        mono = tuple(Fraction(x) for x in self.monomial) or (Fraction(0),) * k
        if len(mono) != k:
            raise SeriesError("monomial has wrong length")
        object.__setattr__(self, "monomial", mono)
        if self.sign not in (1, -1):
            raise SeriesError("sign must be +1 or -1")
        merged: dict[tuple[Fraction, ...], int] = {}
        for a, m in self.factors:
            a = tuple(Fraction(x) for x in a)
            if len(a) != k:
                raise SeriesError("factor exponent has wrong length")
            if not any(x > 0 for x in a):
                raise SeriesError(f"factor exponent {a} has no positive coordinate")
            merged[a] = merged.get(a, 0) + int(m)
        object.__setattr__(self, "factors", tuple(sorted((a, m) for a, m in merged.items() if m)))

    @classmethod
    def univariate(cls, factors: Mapping[int | Fraction, int], var: str = "t", sign: int = 1, shift=0):
        return cls((var,), tuple(((Fraction(a),), m) for a, m in factors.items()), sign, (Fraction(shift),))

    def factor_map(self) -> dict[tuple[Fraction, ...], int]:
        return dict(self.factors)

    def degree_balance(self) -> tuple[Fraction, ...]:
        """sum over factors of m * a (the exponent-weighted multiplicity)."""
        k = len(self.variables)
        return tuple(sum((m * a[i] for a, m in self.factors), Fraction(0)) for i in range(k))

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "sign": self.sign,
            "monomial": [q_str(x) for x in self.monomial],
            "factors": [{"exponent": [q_str(x) for x in a], "multiplicity": m} for a, m in self.factors],
        }

    def __str__(self):
        def mono(a):
            parts = []
            for v, x in zip(self.variables, a):
                if x == 0:
                    continue
                parts.append(v if x == 1 else f"{v}^{x}")
            return "*".join(parts) or "1"

        num = [f"(1-{mono(a)})" + (f"^{m}" if m > 1 else "") for a, m in self.factors if m > 0]
        den = [f"(1-{mono(a)})" + (f"^{-m}" if m < -1 else "") for a, m in self.factors if m < 0]
        s = "".join(num) or "1"
        if den:
            s += "/(" + "".join(den) + ")"
        if any(self.monomial):
            s = f"{mono(self.monomial)}*{s}"
        return ("-" if self.sign < 0 else "") + s


def _mul_truncated(poly: dict, factor: dict, bound: Fraction) -> dict:
    out: dict = {}
    for e1, c1 in poly.items():
        for e2, c2 in factor.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if any(x > bound for x in e):
                continue
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def expand_factored(f: FactoredRationalFunction, bound) -> ReducedSeries:
    """Exact Taylor expansion, complete for exponents with all coordinates <= bound."""
    bound = Fraction(bound)
    k = len(f.variables)
    for a, m in f.factors:
        if any(x < 0 for x in a):
            raise SeriesError(f"factor exponent {a} has a negative coordinate")
        if m < 0 and not all(x > 0 for x in a):
            raise SeriesError(f"cannot expand 1/(1 - t^{a}): some coordinate is zero")
    if any(x < 0 for x in f.monomial):
        raise SeriesError("negative monomial prefactor")
    poly = {f.monomial: f.sign} if all(x <= bound for x in f.monomial) else {}
    for a, m in f.factors:
        if m > 0:
            top = m
            coeff = lambda j, m=m: (-1) ** j * math.comb(m, j)
        else:
            top = min(math.floor(bound / x) for x in a if x > 0)
            coeff = lambda j, m=m: math.comb(-m + j - 1, j)
        factor = {}
        for j in range(top + 1):
            e = tuple(j * x for x in a)
            if any(x > bound for x in e):
                break
            factor[e] = coeff(j)
        poly = _mul_truncated(poly, factor, bound)
    return ReducedSeries(f.variables, bound, poly)


def h_select(series: MultiSeries, h: GroupClass) -> MultiSeries:
    lat = series.lattice
    key = lat.key_of_class(h)
    return MultiSeries(
        series.graph,
        series.cap,
        {n: c for n, c in series.terms.items() if lat.residue_key(n) == key},
    )


def projection_weights(lat: Lattice, subset: Sequence[int]) -> list[list[Fraction]]:
    """weights[j][k] = coordinate of E*_j at the k-th vertex of ``subset``."""
    d = lat.order
    return [[Fraction(col[i], d) for i in subset] for col in lat.dual_scaled]


def required_cap(lat: Lattice, subset: Sequence[int], bound) -> int:
    return math.ceil(Fraction(bound) / lat.min_dual_coordinate_on(subset))


def project(series: MultiSeries, subset: Iterable[int | str], bound) -> ReducedSeries:
    """Set t_j = 1 for j outside ``subset``; complete up to ``bound`` in each coordinate."""
    lat = series.lattice
    g = series.graph
    idx = sorted({g.index(v) for v in subset})
    if not idx:
        raise SeriesError("empty vertex subset")
    bound = Fraction(bound)
    need = required_cap(lat, idx, bound)
    if series.cap < need:
        raise InsufficientCap(need, series.cap)
    w = projection_weights(lat, idx)
    out: dict = {}
    for n, c in series.terms.items():
        e = tuple(sum((nj * w[j][k] for j, nj in enumerate(n) if nj), Fraction(0)) for k in range(len(idx)))
        if any(x > bound for x in e):
            continue
        out[e] = out.get(e, 0) + c
    return ReducedSeries(tuple(g.ids[i] for i in idx), bound, out)


def series_sub_difference(a: ReducedSeries, b: ReducedSeries) -> ReducedSeries:
    if a.variables != b.variables:
        raise SeriesError(f"variable sets differ: {a.variables} vs {b.variables}")
    bound = min(a.certified_bound, b.certified_bound)
    out = dict(a.restrict(bound).terms)
    for e, c in b.restrict(bound).terms.items():
        out[e] = out.get(e, 0) - c
    return ReducedSeries(a.variables, bound, out)


def polynomial_series(coeffs: Sequence[int], bound, var: str = "t") -> ReducedSeries:
    """One-variable series sum coeffs[k] t^k, certified to ``bound``."""
    return ReducedSeries((var,), Fraction(bound), {(Fraction(k),): c for k, c in enumerate(coeffs) if c})


def format_univariate(series: ReducedSeries, var: str | None = None) -> str:
    var = var or series.variables[0]
    parts = []
    for e, c in sorted(series.univariate().items()):
        mon = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if mon and c in (1, -1):
            term = mon if c == 1 else f"-{mon}"
        else:
            term = f"{c}{mon}"
        parts.append(term)
    body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
    return f"{body} + O({var}^>{series.certified_bound})"

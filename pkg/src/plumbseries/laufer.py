"""Laufer-type computation sequences and the topological classification of graphs."""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph_model import ResolutionGraph, induced_subgraph
from .lattice import Cycle, Lattice, LatticeError, lattice_of


class LauferError(RuntimeError):
    code = "laufer_iteration_cap"


class UnsupportedClassification(ValueError):
    code = "unsupported_classification"


@dataclass(frozen=True)
class Step:
    before: Cycle
    vertex: int
    pairing: int


@dataclass
class ComputationTrace:
    steps: list[Step] = field(default_factory=list)
    result: Cycle | None = None

    def increments(self) -> list[int]:
        return [s.pairing for s in self.steps]

    def to_json(self, graph: ResolutionGraph) -> list[dict]:
        from .lattice import cycle_to_json

        return [
            {"before": cycle_to_json(s.before), "vertex": graph.ids[s.vertex], "pairing": s.pairing}
            for s in self.steps
        ]


class Kind(str, enum.Enum):
    RATIONAL = "Rational"
    MINIMALLY_ELLIPTIC = "MinimallyElliptic"
    ELLIPTIC = "Elliptic"
    OTHER = "Other"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    chi_zmin: int
    pg_topological: int | None

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "chi_zmin": self.chi_zmin, "pg_topological": self.pg_topological}


def _int_pairings(lat: Lattice, c: Sequence) -> list[int]:
    pv = lat.pairing_vector(c)
    if any(p.denominator != 1 for p in pv):
        raise LatticeError("cycle is not in L'")
    return [int(p) for p in pv]


def iteration_cap(lat: Lattice, pairings: Sequence[int]) -> int:
    return 10 * lat.order * lat.n * (1 + max((abs(p) for p in pairings), default=0))


def compute_J(lat: Lattice, lp: Sequence, subset: Iterable[int | str], order: Sequence[int] | None = None):
    """Minimal J containing ``subset`` with (E_j, l' + E_J) <= 0 for all j outside J.

    Returns ``(J, trace)``; ``order`` overrides the default smallest-index
    tie-breaking (used to check order independence).
    """
    m = lat.matrix
    q = _int_pairings(lat, lp)
    J = {lat.graph.index(v) for v in subset}
    for k in J:
        for j in range(lat.n):
            q[j] += m[j][k]
    order = list(range(lat.n)) if order is None else list(order)
    trace = ComputationTrace()
    while True:
        j = next((j for j in order if j not in J and q[j] > 0), None)
        if j is None:
            break
        before = tuple(Fraction(x) + int(i in J) for i, x in enumerate(lp))
        trace.steps.append(Step(before, j, q[j]))
        J.add(j)
        for i in range(lat.n):
            q[i] += m[i][j]
    trace.result = tuple(Fraction(x) + int(i in J) for i, x in enumerate(lp))
    return frozenset(J), trace


def laufer_increment(lat: Lattice, q: list[int], order: Sequence[int] | None = None) -> tuple[list[int], int, list[tuple[int, int]]]:
    """Run the computation sequence from a cycle whose pairings with the E_j are ``q``.

    Works purely on integer pairings; ``q`` is updated in place.  Returns the
    added integral cycle ``x``, the change of chi along the way
    (sum of ``1 - pairing`` per step) and the ``(vertex, pairing)`` steps.
    """
    m = lat.matrix
    n = lat.n
    x = [0] * n
    dchi = 0
    steps = []
    cap = iteration_cap(lat, q)
    idx = range(n) if order is None else order
    while True:
        for j in idx:
            if q[j] > 0:
                break
        else:
            return x, dchi, steps
        p = q[j]
        steps.append((j, p))
        dchi += 1 - p
        x[j] += 1
        for i in lat.neighbor_lists[j]:
            q[i] += 1
        q[j] += m[j][j]
        if len(steps) > cap:
            raise LauferError(f"computation sequence exceeded {cap} steps")


def compute_s(lat: Lattice, lp: Sequence, order: Sequence[int] | None = None) -> tuple[Cycle, ComputationTrace]:
    """Smallest s(l') in S' with s(l') >= l' and the same class, with its computation sequence."""
    lp = tuple(Fraction(x) for x in lp)
    q = _int_pairings(lat, lp)
    x, _, steps = laufer_increment(lat, q, order)
    trace = ComputationTrace()
    cur = list(lp)
    for j, p in steps:
        trace.steps.append(Step(tuple(cur), j, p))
        cur[j] += 1
    trace.result = tuple(a + b for a, b in zip(lp, x))
    return trace.result, trace


def artin_cycle(lat: Lattice) -> Cycle:
    return compute_s(lat, lat.total())[0]


def classify(graph_or_lattice) -> Classification:
    lat = graph_or_lattice if isinstance(graph_or_lattice, Lattice) else lattice_of(graph_or_lattice)
    return _classify(lat.graph.without_arrows())


@functools.lru_cache(maxsize=512)
def _classify(graph: ResolutionGraph) -> Classification:
    lat = lattice_of(graph)
    chi = lat.chi(artin_cycle(lat))
    if chi.denominator != 1:
        raise LatticeError("chi of the Artin cycle is not an integer")
    chi = int(chi)
    if chi == 1:
        return Classification(Kind.RATIONAL, 1, 0)
    if chi == 0:
        # Rationality passes to subgraphs, so maximal proper connected
        # subgraphs (complements of one vertex) decide it.
        for v in range(graph.size):
            rest = [u for u in range(graph.size) if u != v]
            if not rest:
                continue
            for sub in induced_subgraph(graph, rest):
                if _classify(sub).kind is not Kind.RATIONAL:
                    return Classification(Kind.ELLIPTIC, 0, None)
        return Classification(Kind.MINIMALLY_ELLIPTIC, 0, 1)
    return Classification(Kind.OTHER, chi, None)


def artin_trace_increments(lat: Lattice) -> list[int]:
    kind = classify(lat).kind
    if kind not in (Kind.RATIONAL, Kind.MINIMALLY_ELLIPTIC):
        raise UnsupportedClassification(
            f"increments are only described for rational or minimally elliptic graphs, not {kind.value}"
        )
    return compute_s(lat, lat.total())[1].increments()

"""Named test graphs used throughout the checks and the acceptance suite."""
from __future__ import annotations

from .graph_model import ResolutionGraph, blow_up_free


def single(p: int) -> ResolutionGraph:
    return ResolutionGraph.build([("v", -p)])


def a_chain(n: int) -> ResolutionGraph:
    ids = [f"v{i}" for i in range(1, n + 1)]
    return ResolutionGraph.build([(v, -2) for v in ids], zip(ids, ids[1:]))


def a3() -> ResolutionGraph:
    return ResolutionGraph.build([("l", -2), ("m", -2), ("r", -2)], [("l", "m"), ("m", "r")])


def d4() -> ResolutionGraph:
    return ResolutionGraph.build(
        [("c", -2), ("x", -2), ("y", -2), ("z", -2)], [("c", "x"), ("c", "y"), ("c", "z")]
    )


def e12() -> ResolutionGraph:
    return ResolutionGraph.build(
        [("E1", -7), ("c", -1), ("b", -2), ("a", -3)], [("E1", "c"), ("c", "b"), ("c", "a")]
    )


def superisolated5() -> ResolutionGraph:
    """Superisolated quintic; the -31 vertex ``C`` is the strict transform side."""
    return ResolutionGraph.build(
        [("a1", -2), ("a2", -2), ("n1", -1), ("C", -31), ("n2", -1),
         ("b1", -3), ("b2", -2), ("b3", -2), ("c1", -4), ("c2", -2)],
        [("a1", "a2"), ("a2", "n1"), ("n1", "C"), ("C", "n2"), ("n2", "b1"),
         ("b1", "b2"), ("b2", "b3"), ("n1", "c1"), ("n2", "c2")],
    )


def q21() -> ResolutionGraph:
    return ResolutionGraph.build(
        [("v200", -2), ("E1", -2), ("u1", -2), ("v260", -2), ("u2", -5), ("v290", -2)],
        [("v200", "E1"), ("E1", "u1"), ("E1", "v260"), ("v260", "u2"), ("v260", "v290")],
    )


def chain2311() -> ResolutionGraph:
    ids = ["E1", "a2", "a3", "a4", "a5", "n", "b1", "b2"]
    verts = [("E1", -3)] + [(v, -2) for v in ids[1:]] + [("p", -2)]
    return ResolutionGraph.build(verts, list(zip(ids, ids[1:])) + [("n", "p")])


def chain2311_blown_up() -> ResolutionGraph:
    return blow_up_free(chain2311(), "E1", new_id="E2")


def named() -> dict[str, ResolutionGraph]:
    out = {f"single{p}": single(p) for p in (2, 3, 4, 5)}
    out.update({f"A{n}": a_chain(n) for n in range(1, 6)})
    out.update(
        D4=d4(),
        E12=e12(),
        superisolated5=superisolated5(),
        chain2311=chain2311(),
        chain2311_blown_up=chain2311_blown_up(),
        Q21=q21(),
    )
    return out

"""Resolution graphs (plumbing trees): parsing, validation and simple surgery.

Text format, one statement per line::

    # comment
    vertex <id> <euler>
    edge <id> <id>
    arrow <id> [count]

The JSON form has ``vertices`` (list of ``{"id", "euler"}``), ``edges`` (list
of id pairs) and ``arrows`` (mapping id -> count).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Raised for malformed graph documents or references to unknown vertices."""

    code = "graph_error"


class GraphSyntaxError(GraphError):
    code = "syntax_error"

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class ResolutionGraph:
    """Decorated tree; vertex order is declaration order and fixes all indexing.

    ``edges`` are stored as sorted index pairs, ``arrows`` as one count per vertex.
    """

    ids: tuple[str, ...]
    euler: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()
    arrows: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.ids)
        if len(self.euler) != n:
            raise GraphError("ids and euler numbers differ in length")
        if not self.arrows:
            object.__setattr__(self, "arrows", (0,) * n)
        elif len(self.arrows) != n:
            raise GraphError("arrow vector has wrong length")
        if len(set(self.ids)) != n:
            raise GraphError("duplicate vertex id")
        norm = []
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) out of range")
            if a == b:
                raise GraphError(f"self-loop at {self.ids[a]}")
            norm.append((min(a, b), max(a, b)))
        if len(set(norm)) != len(norm):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "edges", tuple(norm))
        if any(c < 0 for c in self.arrows):
            raise GraphError("negative arrow count")

    # -- construction -----------------------------------------------------

    @classmethod
    def build(
        cls,
        vertices: Sequence[tuple[str, int]],
        edges: Iterable[tuple[str, str]] = (),
        arrows: Mapping[str, int] | None = None,
    ) -> "ResolutionGraph":
        ids = tuple(str(v) for v, _ in vertices)
        index = {v: i for i, v in enumerate(ids)}
        if len(index) != len(ids):
            raise GraphError("duplicate vertex id")

        def look(v):
            try:
                return index[str(v)]
            except KeyError:
                raise GraphError(f"unknown vertex {v!r}") from None

        counts = [0] * len(ids)
        for v, c in (arrows or {}).items():
            counts[look(v)] += int(c)
        return cls(
            ids,
            tuple(int(e) for _, e in vertices),
            tuple((look(a), look(b)) for a, b in edges),
            tuple(counts),
        )

    # -- basic queries ------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.ids)

    def index(self, vertex: str | int) -> int:
        if isinstance(vertex, int):
            if 0 <= vertex < self.size:
                return vertex
            raise GraphError(f"vertex index {vertex} out of range")
        try:
            return self.ids.index(vertex)
        except ValueError:
            raise GraphError(f"unknown vertex {vertex!r}") from None

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.size
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    def intersection_matrix(self) -> list[list[int]]:
        n = self.size
        m = [[0] * n for _ in range(n)]
        for i, e in enumerate(self.euler):
            m[i][i] = e
        for a, b in self.edges:
            m[a][b] = m[b][a] = 1
        return m

    def has_arrows(self) -> bool:
        return any(self.arrows)

    # -- derived graphs -------------------------------------------------------

    def with_arrows(self, arrows: Mapping[str, int], replace: bool = False) -> "ResolutionGraph":
        counts = [0] * self.size if replace else list(self.arrows)
        for v, c in arrows.items():
            counts[self.index(v)] += int(c)
        return ResolutionGraph(self.ids, self.euler, self.edges, tuple(counts))

    def without_arrows(self) -> "ResolutionGraph":
        return ResolutionGraph(self.ids, self.euler, self.edges)

    def fresh_id(self, stem: str = "E") -> str:
        taken = set(self.ids)
        k = self.size + 1
        while f"{stem}{k}" in taken:
            k += 1
        return f"{stem}{k}"

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "euler": e} for v, e in zip(self.ids, self.euler)],
            "edges": [[self.ids[a], self.ids[b]] for a, b in self.edges],
            "arrows": {v: c for v, c in zip(self.ids, self.arrows) if c},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"vertex {v} {e}" for v, e in zip(self.ids, self.euler)]
        lines += [f"edge {self.ids[a]} {self.ids[b]}" for a, b in self.edges]
        lines += [
            f"arrow {v}" + ("" if c == 1 else f" {c}")
            for v, c in zip(self.ids, self.arrows)
            if c
        ]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    tree: bool
    negative_definite: bool
    determinant: int
    failure_witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.connected and self.tree and self.negative_definite

    def to_dict(self) -> dict:
        return {
            "connected": self.connected,
            "tree": self.tree,
            "negative_definite": self.negative_definite,
            "determinant": self.determinant,
            "failure_witness": self.failure_witness,
        }


def _parse_text(text: str) -> ResolutionGraph:
    vertices: list[tuple[str, int]] = []
    seen: dict[str, int] = {}
    edges: list[tuple[str, str]] = []
    arrows: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw, args = tok[0].lower(), tok[1:]
        if kw == "vertex":
            if len(args) != 2:
                raise GraphSyntaxError(lineno, "expected 'vertex <id> <euler>'")
            vid, e = args
            if vid in seen:
                raise GraphSyntaxError(lineno, f"duplicate vertex id {vid!r}")
            try:
                euler = int(e)
            except ValueError:
                raise GraphSyntaxError(lineno, f"euler number {e!r} is not an integer") from None
            seen[vid] = lineno
            vertices.append((vid, euler))
        elif kw == "edge":
            if len(args) != 2:
                raise GraphSyntaxError(lineno, "expected 'edge <id> <id>'")
            for v in args:
                if v not in seen:
                    raise GraphSyntaxError(lineno, f"edge references unknown vertex {v!r}")
            edges.append((args[0], args[1]))
        elif kw == "arrow":
            if len(args) not in (1, 2):
                raise GraphSyntaxError(lineno, "expected 'arrow <id> [count]'")
            if args[0] not in seen:
                raise GraphSyntaxError(lineno, f"arrow references unknown vertex {args[0]!r}")
            try:
                count = int(args[1]) if len(args) == 2 else 1
            except ValueError:
                raise GraphSyntaxError(lineno, f"arrow count {args[1]!r} is not an integer") from None
            if count < 0:
                raise GraphSyntaxError(lineno, "arrow count must be nonnegative")
            arrows[args[0]] = arrows.get(args[0], 0) + count
        elif kw == "genus":
            raise GraphSyntaxError(
                lineno, "genus decorations are not supported (links must be rational homology spheres)"
            )
        else:
            raise GraphSyntaxError(lineno, f"unknown statement {tok[0]!r}")
    if not vertices:
        raise GraphSyntaxError(0, "no vertices declared")
    try:
        return ResolutionGraph.build(vertices, edges, arrows)
    except GraphSyntaxError:
        raise
    except GraphError as exc:
        raise GraphSyntaxError(0, str(exc)) from None


def _parse_json(doc: dict) -> ResolutionGraph:
    try:
        vertices = [(str(v["id"]), int(v["euler"])) for v in doc["vertices"]]
        edges = [(str(a), str(b)) for a, b in doc.get("edges", [])]
        arrows = {str(k): int(c) for k, c in (doc.get("arrows") or {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed JSON graph: {exc}") from None
    for v in doc["vertices"]:
        if v.get("genus", 0):
            raise GraphError("genus decorations are not supported")
    return ResolutionGraph.build(vertices, edges, arrows)


def parse_graph(text: str) -> ResolutionGraph:
    """Parse either the line format or the JSON form (detected by a leading ``{``)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphSyntaxError(exc.lineno, exc.msg) from None
        return _parse_json(doc)
    return _parse_text(text)


def load_graph(path) -> ResolutionGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def leading_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors, computed fraction-free (Bareiss)."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    minors = []
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            # A zero pivot means the k-th leading minor vanishes; later minors
            # are computed directly to stay exact.
            minors.append(0)
            for m in range(k + 1, n):
                minors.append(_det([row[: m + 1] for row in matrix[: m + 1]]))
            return minors
        minors.append(a[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return minors


def _det(matrix: Sequence[Sequence[int]]) -> int:
    from sympy import Matrix

    return int(Matrix(matrix).det(method="bareiss"))


def _components(n: int, edges: Iterable[tuple[int, int]], keep: set[int] | None = None) -> list[list[int]]:
    keep = set(range(n)) if keep is None else keep
    adj: dict[int, list[int]] = {v: [] for v in keep}
    for a, b in edges:
        if a in keep and b in keep:
            adj[a].append(b)
            adj[b].append(a)
    comps, seen = [], set()
    for v in sorted(keep):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def validate(g: ResolutionGraph) -> ValidationReport:
    comps = _components(g.size, g.edges)
    connected = len(comps) == 1
    tree = connected and len(g.edges) == g.size - 1
    minors = leading_minors(g.intersection_matrix())
    witness = None
    nd = True
    for k, m in enumerate(minors, start=1):
        if (-1) ** k * m <= 0:
            nd = False
            witness = f"leading principal minor of order {k} is {m}"
            break
    if not connected:
        witness = f"graph has {len(comps)} connected components"
    elif not tree:
        witness = f"graph has a cycle ({len(g.edges)} edges on {g.size} vertices)"
    return ValidationReport(connected, tree, nd, minors[-1], witness)


def require_valid(g: ResolutionGraph) -> ResolutionGraph:
    report = validate(g)
    if not report.ok:
        raise InvalidGraph(report)
    return g


class InvalidGraph(GraphError):
    code = "invalid_graph"

    def __init__(self, report: ValidationReport):
        super().__init__(f"graph is not a negative definite tree: {report.failure_witness}")
        self.report = report


def valency(g: ResolutionGraph, j: str | int, relative: bool = False) -> int:
    i = g.index(j)
    deg = g.degrees()[i]
    return deg + g.arrows[i] if relative else deg


def blow_up_free(g: ResolutionGraph, j: str | int, new_id: str | None = None) -> ResolutionGraph:
    """Blow up a free point of ``E_j``: new (-1)-leaf at ``j``, ``e_j`` drops by one."""
    i = g.index(j)
    new_id = new_id or g.fresh_id()
    if new_id in g.ids:
        raise GraphError(f"vertex id {new_id!r} already in use")
    euler = list(g.euler)
    euler[i] -= 1
    return ResolutionGraph(
        g.ids + (new_id,),
        tuple(euler) + (-1,),
        g.edges + ((i, g.size),),
        g.arrows + (0,),
    )


def induced_subgraph(g: ResolutionGraph, subset: Iterable[str | int]) -> list[ResolutionGraph]:
    """Connected components of the induced subgraph, arrows dropped."""
    keep = {g.index(v) for v in subset}
    if not keep:
        raise GraphError("empty vertex subset")
    out = []
    for comp in _components(g.size, g.edges, keep):
        pos = {v: k for k, v in enumerate(comp)}
        edges = tuple((pos[a], pos[b]) for a, b in g.edges if a in pos and b in pos)
        out.append(
            ResolutionGraph(
                tuple(g.ids[v] for v in comp),
                tuple(g.euler[v] for v in comp),
                edges,
            )
        )
    return out

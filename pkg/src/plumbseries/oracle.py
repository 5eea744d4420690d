"""Independent cross-checks: exhaustive searches, direct sums and a floating
point character average.  Each check returns a :class:`VerificationOutcome`
instead of raising, so callers can report the first discrepancy."""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .graph_model import ResolutionGraph, validate
from .invariants import (
    _LauferMemo,
    _require_laufer_graph,
    chi_sum_batch,
    p_laufer,
    z_coefficient,
    z_h_series,
    z_reduced,
    z_series,
)
from .lattice import Cycle, GroupClass, Lattice, cycle_to_json, lattice_of, resolve_vertices
from .laufer import compute_s
from .series import project, simplex_points

DEFAULT_SEED = 20240611
BRUTE_FORCE_LIMIT = 4_000_000


class OracleError(ValueError):
    code = "oracle_error"


@dataclass
class VerificationOutcome:
    name: str
    window: str
    first_discrepancy: dict | None = None
    checked: int = 0
    reproducer: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.first_discrepancy is None

    def fail(self, location, expected, actual, graph: ResolutionGraph | None = None, **inputs) -> None:
        if self.first_discrepancy is not None:
            return
        self.first_discrepancy = {"location": location, "expected": expected, "actual": actual}
        if graph is not None:
            self.reproducer = {"graph": graph.to_dict(), "inputs": inputs}

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "window": self.window,
            "passed": self.passed,
            "checked": self.checked,
            "first_discrepancy": self.first_discrepancy,
        }
        if self.reproducer is not None:
            out["reproducer"] = self.reproducer
        if self.details:
            out["details"] = self.details
        return out


def _jsonable(v: Any):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- s(l') by exhaustion ------------------------------------------------------------------


def brute_force_s(lat: Lattice, lp: Sequence, box: int) -> Cycle:
    """Componentwise minimum of {l' + a in S' : a in L, 0 <= a <= box}.

    The admissible set is closed under componentwise minimum, so the minimum
    is checked to be admissible itself.
    """
    lp = tuple(Fraction(x) for x in lp)
    pv = lat.pairing_vector(lp)
    if any(p.denominator != 1 for p in pv):
        raise OracleError("cycle is not in L'")
    s = lat.n
    if (box + 1) ** s > BRUTE_FORCE_LIMIT:
        raise OracleError(f"search box {box} too large for {s} vertices")
    q0 = np.array([int(p) for p in pv], dtype=np.int64)
    m = np.array(lat.matrix, dtype=np.int64)
    grid = np.indices((box + 1,) * s, dtype=np.int64).reshape(s, -1).T
    ok = ((grid @ m.T + q0) <= 0).all(axis=1)
    cand = grid[ok]
    if not len(cand):
        raise OracleError(f"no element of S' above l' within box {box}")
    low = cand.min(axis=0)
    if not (cand == low).all(axis=1).any():
        raise OracleError("admissible set has no componentwise minimum")
    return tuple(x + int(a) for x, a in zip(lp, low))


def brute_force_s_auto(lat: Lattice, lp: Sequence, start: int = 1) -> Cycle:
    """Grow the box until the minimum sits strictly inside it."""
    box = start
    while True:
        try:
            res = brute_force_s(lat, lp, box)
        except OracleError as exc:
            if "too large" in str(exc):
                raise
            box *= 2
            continue
        if max(r - x for r, x in zip(res, lp)) < box:
            return res
        box *= 2


# -- identity checks ----------------------------------------------------------------------


def verify_thm35(g: ResolutionGraph, max_total_n: int) -> VerificationOutcome:
    """Alternating chi sum over subsets against the product of binomial coefficients."""
    if g.size > 12:
        raise OracleError("subset sums limited to 12 vertices")
    out = VerificationOutcome("thm35", f"sum(n) <= {max_total_n}")
    pts = list(simplex_points(g.size, max_total_n))
    table = chi_sum_batch(g, pts)
    for n in pts:
        out.checked += 1
        want = z_coefficient(g, n)
        if table[n] != want:
            out.fail(list(n), want, table[n], g, n=list(n))
    return out


def verify_main_identity(g: ResolutionGraph, cap: int) -> VerificationOutcome:
    out = VerificationOutcome("main_identity", f"sum(n) <= {cap}")
    z = z_series(g, cap)
    p = p_laufer(g, cap)
    for n in simplex_points(g.size, cap):
        out.checked += 1
        a, b = z.coefficient(n), p.coefficient(n)
        if a != b:
            out.fail(list(n), a, b, g, cap=cap, n=list(n))
    return out


def _closure_bits(nbr_masks: list[int], n: Sequence[int], start: int) -> int:
    J = start
    changed = True
    while changed:
        changed = False
        for j, nb in enumerate(nbr_masks):
            if not J >> j & 1 and bin(J & nb).count("1") > n[j]:
                J |= 1 << j
                changed = True
    return J


def verify_lemma59(g: ResolutionGraph, window: int) -> VerificationOutcome:
    """chi(s(l'+E_I)) = chi(l'+E_J(l',I)) for nonzero l' in S' with sum(n) <= window, all I.

    Both sides are compared relative to chi(l'), as integers.
    """
    lat, _ = _require_laufer_graph(g)
    out = VerificationOutcome("lemma59", f"0 < sum(n) <= {window}, all subsets I")
    s = lat.n
    m = lat.matrix
    memo = _LauferMemo(lat)
    nbr = [sum(1 << i for i in lat.neighbor_lists[j]) for j in range(s)]
    inner = {}

    def edges_in(mask):
        if mask not in inner:
            inner[mask] = sum(1 for a, b in g.edges if mask >> a & 1 and mask >> b & 1)
        return inner[mask]

    fails = 0
    for n in simplex_points(s, window):
        if not any(n):
            continue
        for mask in range(1 << s):
            out.checked += 1
            I = [k for k in range(s) if mask >> k & 1]
            q = [-x for x in n]
            for k in I:
                for j in range(s):
                    q[j] += m[j][k]
            left = len(I) - edges_in(mask) + sum(n[k] for k in I) + memo.dchi(q)
            J = _closure_bits(nbr, n, mask)
            right = bin(J).count("1") - edges_in(J) + sum(n[k] for k in range(s) if J >> k & 1)
            if left != right:
                fails += 1
                if out.first_discrepancy is None:
                    lp = lat.from_dual_coordinates(n)
                    base = lat.chi(lp)
                    out.fail(
                        {"n": list(n), "I": [g.ids[k] for k in I],
                         "J": [g.ids[k] for k in range(s) if J >> k & 1]},
                        _jsonable(base + right), _jsonable(base + left), g, n=list(n), I=[g.ids[k] for k in I],
                    )
    out.details["failures"] = fails
    return out


# -- characters --------------------------------------------------------------------------


def character_exponents(lat: Lattice, g: GroupClass) -> tuple[int, ...]:
    """k_j with rho_g(E*_j) = exp(2 pi i k_j / d), rho_g(x) = exp(2 pi i (r_g, x))."""
    d = lat.order
    key = lat.key_of_class(g)
    # (r_g, E*_j) = -(r_g)_j
    return tuple((-k) % d for k in key)


def _pair_mod1(lat: Lattice, a: GroupClass, b: GroupClass) -> Fraction:
    v = lat.pair(a.frac, b.frac)
    return v - math.floor(v)


def verify_character_formula(g: ResolutionGraph, h: GroupClass, cap: int, tolerance: float = 1e-9) -> VerificationOutcome:
    """Exact h-component against (1/d) sum_rho rho(h)^-1 z(rho(E*_1) x_1, ...)."""
    lat = lattice_of(g)
    d = lat.order
    if d > 1000:
        raise OracleError("character average limited to |H| <= 1000")
    out = VerificationOutcome("character_formula", f"sum(n) <= {cap}, class {[str(x) for x in h.frac]}, rtol {tolerance}")
    chars = []
    for c in lat.classes():
        ks = character_exponents(lat, c)
        rho_h = cmath.exp(2j * math.pi * float(_pair_mod1(lat, c, h)))
        chars.append((ks, rho_h.conjugate()))
    exact = z_h_series(g, h, cap)
    full = z_series(g, cap)
    worst = 0.0
    for n in simplex_points(g.size, cap):
        out.checked += 1
        coeff = full.coefficient(n)
        acc = 0j
        for ks, w in chars:
            e = sum(k * nj for k, nj in zip(ks, n)) % d
            acc += w * cmath.exp(2j * math.pi * e / d)
        approx = coeff * acc / d
        want = exact.coefficient(n)
        err = abs(approx - want) / max(1.0, abs(want))
        worst = max(worst, err)
        if err > tolerance:
            out.fail(list(n), want, [approx.real, approx.imag], g, n=list(n))
    out.details["max_relative_error"] = float(f"{worst:.2e}")
    return out


# -- reduction -------------------------------------------------------------------------------


def verify_reduction_consistency(g: ResolutionGraph, U, cap: int) -> VerificationOutcome:
    """Direct reduced series against projections of the full h-components, for every class."""
    lat = lattice_of(g)
    idx = resolve_vertices(g, U)
    bound = cap * lat.min_dual_coordinate_on(idx)
    out = VerificationOutcome("reduction_consistency", f"cap {cap}, exponents <= {bound}")
    out.details["bound"] = f"{bound.numerator}/{bound.denominator}"
    for h in lat.classes():
        direct = z_reduced(g, idx, h, bound)
        via = project(z_h_series(g, h, cap), idx, bound)
        keys = sorted(set(direct.terms) | set(via.terms))
        for e in keys:
            out.checked += 1
            a, b = via.coefficient(e), direct.coefficient(e)
            if a != b:
                out.fail({"class": h.to_json(), "exponent": _jsonable(e)}, a, b, g, U=list(U), cap=cap)
    return out


def verify_compute_s(graphs_and_cycles) -> VerificationOutcome:
    out = VerificationOutcome("compute_s", "seeded random instances")
    for g, lp in graphs_and_cycles:
        lat = lattice_of(g)
        out.checked += 1
        a = compute_s(lat, lp)[0]
        b = brute_force_s_auto(lat, lp)
        if a != b:
            out.fail(cycle_to_json(lp), cycle_to_json(b), cycle_to_json(a), g, cycle=cycle_to_json(lp))
    return out


# -- random instances -------------------------------------------------------------------------


def random_graphs(count: int, seed: int = DEFAULT_SEED, max_size: int = 6, euler_range=(-5, -1)):
    """Seeded random negative definite trees with at most ``max_size`` vertices."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = rng.randint(1, max_size)
        euler = tuple(rng.randint(*euler_range) for _ in range(s))
        edges = tuple((rng.randrange(i), i) for i in range(1, s))
        g = ResolutionGraph(tuple(f"v{i}" for i in range(s)), euler, edges)
        if validate(g).negative_definite:
            out.append(g)
    return out


def random_s_instances(count: int = 200, seed: int = DEFAULT_SEED, spread: int = 2):
    """Pairs (graph, l') with l' = r_h + l for a random class h and small integral l."""
    rng = random.Random(seed + 1)
    out = []
    for g in random_graphs(count, seed):
        lat = lattice_of(g)
        classes = lat.classes()
        h = classes[rng.randrange(len(classes))]
        l = [rng.randint(-spread, spread) for _ in range(g.size)]
        out.append((g, tuple(x + y for x, y in zip(h.frac, l))))
    return out


CHECKS = ("thm35", "main-identity", "lemma59", "character", "reduction", "compute-s")


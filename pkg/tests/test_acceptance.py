"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Two criteria are known to fail on inputs the suite is required to cover; they
still run at full strength and are marked as strict expected failures, so a
silent fix would be reported.
"""
import math
from fractions import Fraction as F

import pytest

from plumbseries import corpus
from plumbseries.graph_model import blow_up_free
from plumbseries.invariants import (
    acampo_zeta,
    hilbert_cap,
    hilbert_function,
    n_poly_from_graph,
    p_from_hilbert,
    p_laufer,
    superisolated_n_poly,
    z_h_series,
    z_reduced,
    z_relative,
    z_series,
)
from plumbseries.invariants import poly_mul, torus_knot_alexander
from plumbseries.laufer import Kind, artin_trace_increments, classify
from plumbseries.lattice import GroupClass, lattice_of
from plumbseries.oracle import (
    random_s_instances,
    verify_character_formula,
    verify_compute_s,
    verify_lemma59,
    verify_main_identity,
    verify_thm35,
)
from plumbseries.series import FactoredRationalFunction, expand_factored, series_sub_difference, simplex_points

RESULTS: dict[int, tuple[bool, str]] = {}


def record(num: int, ok: bool, what: str) -> bool:
    RESULTS[num] = (ok, what)
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {what}")
    return ok


def closed(factors, top):
    return expand_factored(FactoredRationalFunction.univariate(factors), top).integer_coefficients()


def window_cap(s: int, terms: int = 200) -> int:
    cap = 0
    while math.comb(cap + s, s) < terms:
        cap += 1
    return cap


THM35_CORPUS = {
    **{f"single{p}": corpus.single(p) for p in (2, 3, 4, 5)},
    **{f"A{n}": corpus.a_chain(n) for n in range(1, 6)},
    "D4": corpus.d4(),
    "E12": corpus.e12(),
    "superisolated5": corpus.superisolated5(),
    "chain2311": corpus.chain2311(),
    "chain2311_blown_up": corpus.chain2311_blown_up(),
    "Q21": corpus.q21(),
}
SUPPORTED = {k: g for k, g in THM35_CORPUS.items() if classify(g).kind in (Kind.RATIONAL, Kind.MINIMALLY_ELLIPTIC)}


def test_01_cyclic_quotient():
    ok = True
    for p in (2, 3, 5):
        g = corpus.single(p)
        z = z_series(g, 30)
        ok &= all(z.coefficient((k,)) == k + 1 and z.exponent((k,)) == (F(k, p),) for k in range(31))
        for q in range(p):
            zh = z_h_series(g, GroupClass((F(q, p),)), 30)
            ok &= sorted(n[0] for n in zh.terms) == [k for k in range(31) if k % p == q]
    assert record(1, ok, "cyclic quotients p=2,3,5: coefficients k+1 at k/p, classes n = q mod p")


def test_02_e12_reduced():
    got = z_reduced(corpus.e12(), ["E1"], bound=30).integer_coefficients()
    ok = got == closed({6: 1, 3: -1, 2: -1, 1: -1}, 30)
    assert record(2, ok, "E12 reduced series at the -7 vertex = (1-t^6)/((1-t^3)(1-t^2)(1-t)) up to t^30")


def test_03_q21():
    g = corpus.q21()
    got = z_reduced(g, ["E1"], GroupClass.zero(6), 40).integer_coefficients()
    ok = got == closed({15: 1, 12: 1, 13: -1, 5: -1, 2: -1, 6: -1}, 40)
    ok &= lattice_of(g).group_structure()[0] == 12
    assert record(3, ok, "Q21 reduced h=0 series matches the closed form up to t^40, |H| = 12")


def test_04_superisolated():
    g = corpus.superisolated5()
    z0 = z_reduced(g, ["C"], GroupClass.zero(g.size), 10)
    ref = expand_factored(FactoredRationalFunction.univariate({5: 1, 1: -3}, var="C"), 10)
    diff = series_sub_difference(z0, ref).integer_coefficients()
    res = n_poly_from_graph(g, "C", 10)
    via_delta = superisolated_n_poly(5, poly_mul(torus_knot_alexander(3, 4), torus_knot_alexander(2, 7)))
    ok = diff == [0, -2] + [0] * 9
    ok &= res.n_poly == (0, -2, 0) and res.symmetric and len(res.n_poly) - 1 == 5 - 3
    ok &= via_delta.n_poly == res.n_poly
    assert record(4, ok, "superisolated d=5: Z_0 at C minus (1-t^5)/(1-t)^3 = -2t, symmetric of degree 2")


def test_05_blow_up():
    g = blow_up_free(corpus.chain2311(), "E1", new_id="E2")
    got = z_reduced(g, ["E2"], bound=30).integer_coefficients()
    ok = got == closed({6: 1, 3: -1, 2: -2}, 30)
    assert record(5, ok, "blow-up at E1, reduced series at E2 = (1-t^6)/((1-t^3)(1-t^2)^2) up to t^30")


def test_06_relative_a3():
    g = corpus.a3().with_arrows({"m": 1})
    got = z_relative(g, subset=["m"], h=GroupClass.zero(3), bound=20).integer_coefficients()
    assert record(6, got == [1] * 21, "relative A3, h=0: all coefficients 1 for exponents 0..20")


def test_07_relative_e12():
    g = corpus.e12().with_arrows({"E1": 1})
    f = acampo_zeta(g)
    ok = f.factor_map() == {(6,): 1, (3,): -1, (2,): -1} and f.sign == 1 and not any(f.monomial)
    ok &= expand_factored(f, 30).integer_coefficients() == z_relative(g, subset=["E1"], bound=30).integer_coefficients()
    assert record(7, ok, "relative E12: zeta = (1-t^6)/((1-t^3)(1-t^2)) and matches the relative series up to t^30")


def test_08_thm35():
    bad = [k for k, g in THM35_CORPUS.items() if not verify_thm35(g, 6).passed]
    assert record(8, not bad, f"chi-sum identity on {len(THM35_CORPUS)} corpus graphs, sum(n) <= 6" + (f"; failing {bad}" if bad else ""))


def test_09_main_identity():
    bad = []
    for k, g in SUPPORTED.items():
        cap = window_cap(g.size)
        if not verify_main_identity(g, cap).passed:
            bad.append(k)
    assert record(9, not bad, f"Z = P on {len(SUPPORTED)} rational/minimally elliptic graphs, >= 200 window terms each" + (f"; failing {bad}" if bad else ""))


@pytest.mark.xfail(strict=True, reason="fails on minimally elliptic graphs; see the decisions ledger")
def test_10_lemma59():
    bad = {}
    for k, g in SUPPORTED.items():
        out = verify_lemma59(g, 4)
        if not out.passed:
            bad[k] = out.first_discrepancy
    detail = "" if not bad else "; failing " + ", ".join(f"{k} at {v['location']}" for k, v in bad.items())
    assert record(10, not bad, f"chi(s(l'+E_I)) = chi(l'+E_J) on {len(SUPPORTED)} graphs, all I, sum(n) <= 4" + detail)


def test_11_hilbert_round_trip():
    ok = True
    for g in (corpus.a3(), corpus.single(3)):
        lat = lattice_of(g)
        p = p_laufer(g, hilbert_cap(lat, 5))
        h = hilbert_function(p)
        ok &= all(p_from_hilbert(h, lat, n) == p.coefficient(n) for n in simplex_points(g.size, 5))
    assert record(11, ok, "Hilbert inversion round trip on A3 and the single -3 vertex, sum(n) <= 5")


def test_12_character_formula():
    bad = []
    worst = 0.0
    for g in (corpus.single(5), corpus.a3(), corpus.q21()):
        cap = window_cap(g.size)
        for h in lattice_of(g).classes():
            out = verify_character_formula(g, h, cap, 1e-9)
            worst = max(worst, out.details["max_relative_error"])
            if not out.passed:
                bad.append((g.ids, h.to_json()))
    assert record(12, not bad, f"character average within rtol 1e-9 on -5, A3, Q21 (max error {worst:.1e})")


def test_13_oracle_equivalence():
    out = verify_compute_s(random_s_instances(200))
    assert record(13, out.passed and out.checked == 200, "compute_s = brute force on 200 seeded random instances")


@pytest.mark.xfail(strict=True, reason="E12: the only step available from E pairs to 2; see the decisions ledger")
def test_14_increments():
    bad = {}
    for k, g in SUPPORTED.items():
        inc = artin_trace_increments(lattice_of(g))
        if classify(g).kind is Kind.RATIONAL:
            good = all(x == 1 for x in inc)
        else:
            good = bool(inc) and inc[-1] == 2 and all(x == 1 for x in inc[:-1])
        if not good:
            bad[k] = inc
    assert record(14, not bad, "Artin increments: all ones (rational), ones then 2 (minimally elliptic)" + (f"; failing {bad}" if bad else ""))

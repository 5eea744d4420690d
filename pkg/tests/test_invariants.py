from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from plumbseries import corpus
from plumbseries.graph_model import ResolutionGraph
from plumbseries.invariants import (
    InvariantError,
    NonIntegralMultiplicity,
    acampo_zeta,
    chi_sum_batch,
    chi_sum_lhs,
    hilbert_from_p,
    hilbert_cap,
    hilbert_function,
    multiplicity_vector,
    n_poly_from_graph,
    p_from_hilbert,
    p_laufer,
    poly_mul,
    superisolated_n_poly,
    torus_knot_alexander,
    z_coefficient,
    z_h_series,
    z_reduced,
    z_relative,
    z_series,
)
from plumbseries.laufer import UnsupportedClassification
from plumbseries.lattice import GroupClass, LatticeError, lattice_of
from plumbseries.series import (
    FactoredRationalFunction,
    InsufficientCap,
    expand_factored,
    project,
    simplex_points,
)

from conftest import trees


def expansion(factors, bound):
    return expand_factored(FactoredRationalFunction.univariate(factors), bound).integer_coefficients()


def test_z_series_cyclic():
    for p in (2, 3, 7):
        z = z_series(corpus.single(p), 10)
        assert z.items() == [((k,), k + 1) for k in range(11)]
        assert z.exponent((3,)) == (F(3, p),)


def test_z_series_constant_term_and_a3():
    for g in corpus.named().values():
        assert z_series(g, 0).terms == {(0,) * g.size: 1}
    assert z_series(corpus.a3(), 2).coefficient((1, 0, 1)) == 1
    # middle vertex has delta = 2, so any positive n there kills the term
    assert z_series(corpus.a3(), 2).coefficient((0, 1, 0)) == 0


def test_z_h_series():
    g = corpus.single(5)
    for q in range(5):
        zh = z_h_series(g, GroupClass((F(q, 5),)), 20)
        assert all(n[0] % 5 == q and c == n[0] + 1 for n, c in zh.terms.items())
    e12 = corpus.e12()
    assert z_h_series(e12, GroupClass.zero(4), 4) == z_series(e12, 4)


def test_z_reduced_e12():
    r = z_reduced(corpus.e12(), ["E1"], bound=15)
    assert r.integer_coefficients() == expansion({6: 1, 3: -1, 2: -1, 1: -1}, 15)


def test_z_reduced_matches_projection_with_class():
    g = corpus.a3()
    lat = lattice_of(g)
    for h in lat.classes():
        direct = z_reduced(g, ["l", "r"], h, 3)
        via = project(z_h_series(g, h, 12), ["l", "r"], 3)
        assert direct == via


def test_z_reduced_rejects_negative_bound():
    with pytest.raises(Exception):
        z_reduced(corpus.a3(), ["m"], bound=-1)


def test_z_relative():
    g = corpus.a3().with_arrows({"m": 1})
    r = z_relative(g, subset=["m"], h=GroupClass.zero(3), bound=10)
    assert r.integer_coefficients() == [1] * 11
    e = corpus.e12().with_arrows({"E1": 1})
    r = z_relative(e, subset=["E1"], bound=12)
    assert r.integer_coefficients() == expansion({6: 1, 3: -1, 2: -1}, 12)
    full = z_relative(e, cap=3)
    assert full.coefficient((1, 0, 0, 0)) == 0  # delta^C = 2 at E1
    with pytest.raises(InvariantError):
        z_relative(corpus.e12(), cap=3)
    with pytest.raises(InvariantError):
        z_relative(e)


def test_chi_sum_examples():
    for g in corpus.named().values():
        if g.size <= 6:
            assert chi_sum_lhs(g, (0,) * g.size) == 1
    for p in (2, 3, 5):
        for k in range(6):
            assert chi_sum_lhs(corpus.single(p), (k,)) == k + 1
    assert chi_sum_lhs(corpus.a3(), (1, 0, 1)) == 1
    with pytest.raises(InvariantError):
        chi_sum_lhs(corpus.a3(), (1, -1, 0))


@given(trees(max_size=5), st.data())
def test_chi_sum_batch_matches_exact(g, data):
    n = tuple(data.draw(st.lists(st.integers(0, 3), min_size=g.size, max_size=g.size)))
    exact = chi_sum_lhs(g, n)
    assert chi_sum_batch(g, [n])[n] == exact
    assert exact == z_coefficient(g, n)


@pytest.mark.parametrize("g", [corpus.single(3), corpus.a3(), corpus.e12(), corpus.d4()])
def test_p_laufer_main_identity_small(g):
    assert p_laufer(g, 5) == z_series(g, 5)


def test_p_laufer_refusals():
    with pytest.raises(UnsupportedClassification, match="vanishing"):
        p_laufer(corpus.superisolated5(), 2)
    with pytest.raises(UnsupportedClassification):
        p_laufer(corpus.chain2311_blown_up(), 2)
    big = corpus.a_chain(15)
    with pytest.raises(InvariantError):
        p_laufer(big, 1)


def test_hilbert_values():
    g = corpus.single(3)
    p = p_laufer(g, 12)
    assert hilbert_from_p(p, (F(0),)) == 0
    assert hilbert_from_p(p, (F(-2),)) == 0
    assert hilbert_from_p(p, (F(1),)) == 1
    # independent count: class-0 terms of P sit at n = 3k with coefficient 3k+1;
    # those below l' = 2E are n = 0, 3
    assert hilbert_from_p(p, (F(2),)) == 1 + 4
    with pytest.raises(InsufficientCap):
        hilbert_from_p(p, (F(5),))
    with pytest.raises(LatticeError):
        hilbert_from_p(p, (F(1, 2),))


@pytest.mark.parametrize("g", [corpus.single(3), corpus.a3(), corpus.d4()])
def test_hilbert_round_trip(g):
    lat = lattice_of(g)
    window = 3
    p = p_laufer(g, hilbert_cap(lat, window))
    h = hilbert_function(p)
    for n in simplex_points(g.size, window):
        assert p_from_hilbert(h, lat, n) == p.coefficient(n)


def test_multiplicity_vector():
    with pytest.raises(NonIntegralMultiplicity):
        multiplicity_vector(corpus.a3().with_arrows({"m": 1}))
    g = corpus.e12()
    ref = -sp.Matrix(g.intersection_matrix()).inv()[:, 0]
    assert multiplicity_vector(g.with_arrows({"E1": 1})).m == tuple(int(x) for x in ref)
    assert multiplicity_vector(g.with_arrows({"E1": 2})).m == tuple(2 * int(x) for x in ref)
    with pytest.raises(InvariantError):
        multiplicity_vector(g)


def test_acampo_zeta():
    f = acampo_zeta(corpus.e12().with_arrows({"E1": 1}))
    assert f.factor_map() == {(6,): 1, (3,): -1, (2,): -1}
    smooth = ResolutionGraph.build([("v", -1)], arrows={"v": 1})
    assert acampo_zeta(smooth).factor_map() == {(1,): -1}
    # a delta^C = 2 vertex contributes nothing
    chain = ResolutionGraph.build([("a", -1), ("b", -2)], [("a", "b")], {"a": 1})
    assert all(m != 0 for m in acampo_zeta(chain).factor_map().values())


@given(trees(max_size=5), st.data())
def test_acampo_degree_balance(g, data):
    j = data.draw(st.integers(0, g.size - 1))
    ga = g.with_arrows({j: lattice_of(g).order})
    m = multiplicity_vector(ga).m
    deg = [d + a for d, a in zip(ga.degrees(), ga.arrows)]
    assert acampo_zeta(ga).degree_balance() == (sum((d - 2) * x for d, x in zip(deg, m)),)


def test_torus_knot_alexander():
    assert torus_knot_alexander(2, 3) == [1, -1, 1]
    assert torus_knot_alexander(2, 5) == [1, -1, 1, -1, 1]
    d34 = torus_knot_alexander(3, 4)
    assert len(d34) - 1 == 6 and d34 == d34[::-1]


def test_superisolated_ex67():
    delta = poly_mul(torus_knot_alexander(3, 4), torus_knot_alexander(2, 7))
    r = superisolated_n_poly(5, delta)
    assert r.n_poly == (0, -2, 0) and r.n_at_one == -2 and r.symmetric
    assert r.to_json() == {"coeffs": [0, -2, 0], "n_at_one": -2, "symmetric": True}


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
def test_superisolated_unicuspidal(d):
    r = superisolated_n_poly(d, torus_knot_alexander(d - 1, d))
    assert not any(r.n_poly) and len(r.n_poly) == d - 2


def test_superisolated_degenerate_inputs():
    assert superisolated_n_poly(2, [1]).n_poly == ()
    with pytest.raises(InvariantError):
        superisolated_n_poly(5, [1])
    with pytest.raises(InvariantError):
        superisolated_n_poly(1, [1])


def test_n_poly_from_graph():
    r = n_poly_from_graph(corpus.superisolated5(), "C", 10)
    assert r.n_poly == (0, -2, 0)
    with pytest.raises(InvariantError):
        n_poly_from_graph(corpus.superisolated5(), "C", 1)

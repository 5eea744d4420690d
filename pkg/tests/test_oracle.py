from fractions import Fraction as F

import pytest

from plumbseries import corpus
from plumbseries.graph_model import parse_graph, validate
from plumbseries.laufer import Kind, UnsupportedClassification, classify, compute_s
from plumbseries.lattice import GroupClass, lattice_of
from plumbseries.oracle import (
    DEFAULT_SEED,
    OracleError,
    brute_force_s,
    brute_force_s_auto,
    character_exponents,
    random_graphs,
    random_s_instances,
    verify_character_formula,
    verify_compute_s,
    verify_lemma59,
    verify_main_identity,
    verify_reduction_consistency,
    verify_thm35,
)


def test_brute_force_s_examples():
    lat = lattice_of(corpus.a3())
    lp = lat.dual_cycle("m")
    assert brute_force_s(lat, lp, 2) == lp
    assert brute_force_s(lat, lat.basis("m"), 2) == (1, 1, 1)
    with pytest.raises(OracleError):
        brute_force_s(lattice_of(corpus.e12()), (F(1), F(0), F(0), F(0)), 1)
    with pytest.raises(OracleError):
        brute_force_s(lat, (F(1, 3), F(0), F(0)), 2)


def test_brute_force_auto_e12():
    lat = lattice_of(corpus.e12())
    assert brute_force_s_auto(lat, lat.total()) == (1, 6, 3, 2)


@pytest.mark.parametrize("g", [corpus.a3(), corpus.e12(), corpus.single(2), corpus.single(3), corpus.single(5)])
def test_thm35_passes(g):
    out = verify_thm35(g, 4)
    assert out.passed and out.checked > 0


def test_thm35_size_guard():
    with pytest.raises(OracleError):
        verify_thm35(corpus.a_chain(13), 1)


@pytest.mark.parametrize("g", [corpus.a3(), corpus.e12(), corpus.q21()])
def test_main_identity_passes(g):
    assert verify_main_identity(g, 3).passed


def test_main_identity_refuses():
    with pytest.raises(UnsupportedClassification):
        verify_main_identity(corpus.superisolated5(), 2)


def test_lemma59_rational_passes():
    for g in (corpus.a3(), corpus.d4(), corpus.a_chain(5), corpus.single(4)):
        out = verify_lemma59(g, 4)
        assert out.passed and out.details["failures"] == 0


def test_lemma59_e12_counterexample():
    # l' = E*_a, I = {a}: J(l', I) is everything, chi(l' + E) = 4 while the
    # computation sequence from l' + E_a ends with chi = 3
    out = verify_lemma59(corpus.e12(), 1)
    assert not out.passed
    assert out.first_discrepancy == {
        "location": {"n": [0, 0, 0, 1], "I": ["a"], "J": ["E1", "c", "b", "a"]},
        "expected": "4/1",
        "actual": "3/1",
    }
    assert out.reproducer["graph"] == corpus.e12().to_dict()
    lat = lattice_of(corpus.e12())
    lp = lat.dual_cycle("a")
    start = tuple(x + (i == 3) for i, x in enumerate(lp))
    assert lat.chi(compute_s(lat, start)[0]) == 3
    assert lat.chi(brute_force_s_auto(lat, start)) == 3
    assert lat.chi(tuple(x + 1 for x in lp)) == 4


@pytest.mark.parametrize("g,cap", [(corpus.single(5), 60), (corpus.a3(), 8), (corpus.q21(), 3)])
def test_character_formula(g, cap):
    for h in lattice_of(g).classes():
        out = verify_character_formula(g, h, cap)
        assert out.passed, out.to_dict()
        assert out.details["max_relative_error"] < 1e-9


def test_q21_character_values():
    lat = lattice_of(corpus.q21())
    values = {character_exponents(lat, c) for c in lat.classes()}
    # generator values in the order v200, E1, u1, v260, u2, v290
    assert (7, 2, 1, 8, 4, 10) in values
    for k in (5, 7, 11):
        assert tuple(k * x % 12 for x in (7, 2, 1, 8, 4, 10)) in values


def test_reduction_consistency():
    assert verify_reduction_consistency(corpus.e12(), ["E1"], 10).passed
    assert verify_reduction_consistency(corpus.chain2311_blown_up(), ["E2"], 5).passed
    a3 = corpus.a3()
    assert verify_reduction_consistency(a3, a3.ids, 6).passed


def test_random_graphs_are_seeded():
    a = random_graphs(20)
    assert a == random_graphs(20, DEFAULT_SEED)
    assert a != random_graphs(20, DEFAULT_SEED + 1)
    assert all(validate(g).negative_definite and g.size <= 6 for g in a)
    assert all(min(g.euler) >= -5 and max(g.euler) <= -1 for g in a)


def test_outcome_serialization():
    out = verify_compute_s(random_s_instances(5))
    doc = out.to_dict()
    assert doc["passed"] and doc["checked"] == 5 and doc["first_discrepancy"] is None


# every oracle against its production counterpart on 200 random instances


def test_random_compute_s():
    assert verify_compute_s(random_s_instances(200)).passed


def test_random_thm35():
    for g in random_graphs(200, seed=7):
        out = verify_thm35(g, 3)
        assert out.passed, out.to_dict()


def test_random_main_identity_and_lemma59():
    seen = 0
    for g in random_graphs(200, seed=11, max_size=5):
        kind = classify(g).kind
        if kind not in (Kind.RATIONAL, Kind.MINIMALLY_ELLIPTIC):
            continue
        seen += 1
        assert verify_main_identity(g, 3).passed
        if kind is Kind.RATIONAL:
            assert verify_lemma59(g, 2).passed
    assert seen > 100


def test_random_reduction():
    for i, g in enumerate(random_graphs(200, seed=13, max_size=5)):
        assert verify_reduction_consistency(g, [g.ids[i % g.size]], 4).passed

import itertools
from fractions import Fraction as F

import numpy as np
import pytest

from chamberfold import linalg as la
from chamberfold.chambers import classify_chamber_point
from chamberfold.coxeter import is_regular, rank_one_minus
from chamberfold.errors import NotRegular
from chamberfold.structure import (
    adjacency_full,
    adjacency_lower,
    det_sum,
    enumerate_roots,
    fundamental_coweights,
    geometric_adjacency_oracle,
    kostant_decompose,
    linearly_independent,
    minimal_length_oracle,
    multiply_reflections,
    regular_elements,
    v_vector,
)


def test_roots(grp):
    assert set(enumerate_roots(grp("a2")).roots) == {(1, 0), (0, 1), (1, 1)}
    assert len(enumerate_roots(grp("a1xa1"))) == 2
    assert len(enumerate_roots(grp("b2"))) == 4
    assert len(enumerate_roots(grp("b3"))) == 9


def test_coweights(grp):
    assert fundamental_coweights(grp("a2")) == [(F(2, 3), F(1, 3)), (F(1, 3), F(2, 3))]
    # coxeter A1xA1 gives B = identity; with B = 2 I the coweights halve
    assert fundamental_coweights(grp("a1xa1")) == [(1, 0), (0, 1)]
    G = grp("b3")
    for i, pi in enumerate(fundamental_coweights(G), start=1):
        c = classify_chamber_point(G, pi)
        assert c.status == "boundary" and c.face == {1, 2, 3} - {i}


def test_v_vector(grp):
    G = grp("a2")
    w = G.from_word((1, 2))
    v = v_vector(G, w, (F(1), F(0)))
    assert v == (F(-1, 3), F(1, 3))
    assert G.form(v, (F(1), F(0))) == -1
    assert v_vector(G, w, (F(0), F(0))) == (0, 0)
    with pytest.raises(NotRegular):
        v_vector(G, G.generator(1), (F(1), F(0)))


def test_v_vector_against_numpy(grp):
    G = grp("b3")
    for w in regular_elements(G):
        Winv = np.array(G.inv(w).linear, dtype=float)
        for u in itertools.product((0, 1, 2), repeat=3):
            v = np.linalg.solve(Winv - np.eye(3), np.array(u, dtype=float))
            assert np.allclose(v, np.array(v_vector(G, w, tuple(map(F, u))), dtype=float))


def test_regular_counts(grp):
    assert [len(regular_elements(grp(n))) for n in ("a2", "b2", "g2", "a3", "b3")] == [2, 3, 5, 6, 15]


def test_kostant_examples(grp):
    G = grp("a2")
    assert len(kostant_decompose(G, G.identity())) == 0
    assert kostant_decompose(G, G.generator(1)).roots == ((1, 0),)
    w = G.from_word((1, 2))
    d = kostant_decompose(G, w)
    assert len(d) == 2 == rank_one_minus(G, w)
    assert linearly_independent(G, d.roots)
    assert multiply_reflections(G, d.roots).linear == w.linear
    assert minimal_length_oracle(G, w) == 2
    assert minimal_length_oracle(G, G.from_word((1, 2, 1))) == 1


@pytest.mark.parametrize("name", ["a3", "b3"])
def test_kostant_sweep(grp, name):
    G = grp(name)
    for w in G.elements():
        d = kostant_decompose(G, w)
        assert len(d) == rank_one_minus(G, w) == minimal_length_oracle(G, w)
        assert linearly_independent(G, d.roots)
        assert multiply_reflections(G, d.roots).linear == w.linear


def test_adjacency_a2(grp):
    G = grp("a2")
    w, w2 = G.from_word((1, 2)), G.from_word((2, 1))
    a = adjacency_full(G, w, w2)
    assert a.adjacent and a.witness == (1, 2)
    assert geometric_adjacency_oracle(G, w, w2)
    assert not adjacency_full(G, w, w).adjacent
    assert not geometric_adjacency_oracle(G, w, w)


@pytest.mark.parametrize("name", ["a2", "a3", "b3"])
def test_adjacency_matches_oracle(grp, name):
    G = grp(name)
    reg = regular_elements(G)
    for w, w2 in itertools.product(reg, repeat=2):
        assert adjacency_full(G, w, w2).adjacent == geometric_adjacency_oracle(G, w, w2)


def test_a3_has_non_touching_pair(grp):
    G = grp("a3")
    reg = regular_elements(G)
    assert any(not geometric_adjacency_oracle(G, w, w2) for w, w2 in itertools.product(reg, repeat=2) if w is not w2)


def test_adjacency_lower_examples(grp):
    G = grp("a2")
    w = G.from_word((1, 2))
    r = adjacency_lower(G, G.identity(), w)
    assert r.adjacent and r.geometric and len(r.suffix) == 2
    r = adjacency_lower(G, G.generator(1), w)
    assert r.adjacent and r.geometric and r.w_tilde.linear == G.generator(2).linear
    r = adjacency_lower(G, G.generator(2), w)
    assert not r.adjacent and not r.geometric


@pytest.mark.parametrize("name", ["a2", "a3"])
def test_adjacency_lower_matches_geometry(grp, name):
    G = grp(name)
    for w in regular_elements(G):
        for wl in G.elements():
            assert adjacency_lower(G, wl, w).agrees


def test_literal_reading_differs(grp):
    """Reading R~ as R ∩ Im(1 - w~) alone accepts the non-adjacent ray e2 of A2."""
    G = grp("a2")
    r = adjacency_lower(G, G.generator(2), G.from_word((1, 2)))
    assert r.literal and not r.geometric


def _numpy_det_sum(G, h=None):
    total = 0.0
    for w in G.elements():
        M = np.array(G.inv(w).linear if h is not None else w.linear, dtype=float)
        H = np.eye(G.rank) if h is None else np.array(h, dtype=float)
        total += np.linalg.det(np.eye(G.rank) - H @ M)
    return total


@pytest.mark.parametrize("name,order", [("a2", 6), ("a1xa1", 4), ("b2", 8), ("g2", 12), ("a3", 24), ("b3", 48)])
def test_det_sum(grp, name, order):
    G = grp(name)
    assert det_sum(G) == order
    assert abs(_numpy_det_sum(G) - order) < 1e-9


def test_det_sum_terms_a2(grp):
    G = grp("a2")
    terms = [la.det(la.mat_sub(la.identity(2), w.linear)) for w in G.elements()]
    assert sorted(terms) == [0, 0, 0, 0, 3, 3]


@pytest.mark.parametrize("lam", [F(1), F(1, 2), F(1, 3)])
def test_twisted_det_sum(grp, lam):
    G = grp("b2")
    for R in G.elements():
        h = la.mat_scale(lam, R.linear)
        assert det_sum(G, h) == 8

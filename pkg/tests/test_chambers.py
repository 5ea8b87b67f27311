import math
from fractions import Fraction as F

import pytest

from chamberfold import linalg as la
from chamberfold.chambers import (
    alcove_classify,
    alcove_vertices,
    classify_chamber_point,
    distance,
    distance_surrogate,
    dual_cone_contains,
    lightcone_classify,
    lorentz_norm_increment,
    tile_membership,
)
from chamberfold.coxeter import one_minus
from chamberfold.errors import ModelViolation, PreconditionViolated


def test_chamber_classification(grp):
    G = grp("a2")
    assert classify_chamber_point(G, (F(1), F(1))).interior
    c = classify_chamber_point(G, (F(1), F(2)))
    assert c.status == "boundary" and c.face == {1}
    assert classify_chamber_point(G, (F(-1), F(1))).status == "outside"



def test_alcove_classification(grp):
    A1 = grp("a1t")
    assert alcove_classify(A1, (F(1, 2),)).interior
    assert alcove_classify(A1, (F(0),)).status == "boundary"
    assert alcove_classify(A1, (F(2),)).status == "outside"
    A2 = grp("a2t")
    verts = alcove_vertices(A2)
    bary = tuple(sum(v[i] for v in verts) / 3 for i in range(2))
    assert alcove_classify(A2, bary).interior
    origin = alcove_classify(A2, (F(0), F(0)))
    assert origin.status == "boundary" and origin.face == {1, 2}
    with pytest.raises(PreconditionViolated):
        alcove_classify(grp("a2"), (F(1), F(1)))


def test_dual_cone(grp):
    G = grp("a2")
    assert dual_cone_contains(G, (F(1), F(0)))
    assert not dual_cone_contains(G, (F(1), F(-1)))
    H = grp("t246")
    x = H.interior_point
    assert lightcone_classify(H, la.scale(-1.0, x)) == "K_minus_interior"
    assert dual_cone_contains(H, la.scale(-1.0, x))


def test_lightcone_classes(grp):
    H = grp("t246")
    assert lightcone_classify(H, (0.0, 0.0, 0.0)) == "zero"
    for i in (1, 2, 3):
        assert lightcone_classify(H, H.simple_normal(i)) == "spacelike"
    assert lightcone_classify(H, H.interior_point) == "K_plus_interior"
    assert H.form(H.interior_point, H.interior_point) < 0


def test_distances():
    flat = la.BilinearSpace(1, ((F(1),),))
    assert distance(flat, (F(3),), (F(1),), "affine") == 2
    mink = la.BilinearSpace(2, ((-1.0, 0.0), (0.0, 1.0)), "lorentzian")
    y = (math.cosh(1), math.sinh(1))
    assert math.isclose(distance(mink, (1.0, 0.0), y, "hyperbolic"), 1.0)
    assert math.isclose(distance_surrogate(mink, (1.0, 0.0), (1.0, 0.0), "hyperbolic"), 1.0)
    sph = la.BilinearSpace(2, ((1.0, 0.0), (0.0, 1.0)))
    assert distance(sph, (1.0, 0.0), (1.0, 0.0), "spherical") == 0
    assert distance_surrogate(sph, (0.6, 0.8), (0.6, 0.8), "spherical") == pytest.approx(1.0)
    with pytest.raises(ModelViolation):
        distance(sph, (2.0, 0.0), (1.0, 0.0), "spherical")


def test_tile_membership_examples(grp):
    G = grp("a2")
    t = tile_membership(G, G.generator(1), (F(1), F(0)))
    assert t is not None and len(t.kernel_coset[1]) == 1
    v = t.witness
    assert 2 * v[0] - v[1] == 1 and classify_chamber_point(G, v).interior
    assert tile_membership(G, G.identity(), (F(1), F(0))) is None
    t = tile_membership(G, G.from_word((2, 1)), (F(1), F(2)))
    assert t.witness == (1, 1) and t.tile_dim == 2
    assert one_minus(G, G.from_word((2, 1))) == ((2, -1), (1, 1))


def test_norm_increment_identity(grp):
    """[(1-w)x, (1-w)x] = [(1-w')x, (1-w')x] + increment, for w = s_e w'."""
    H = grp("t246")
    x = H.interior_point
    for w in H.elements(5)[1:]:
        e, rest = w.word[0], w.word[1:]
        wp = H.from_word(rest)
        y = la.mat_vec(one_minus(H, w), x)
        yp = la.mat_vec(one_minus(H, wp), x)
        lhs = H.form(y, y) - H.form(yp, yp)
        assert math.isclose(lhs, lorentz_norm_increment(H, wp, e, x), rel_tol=1e-9, abs_tol=1e-9)

from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from chamberfold import linalg as la
from chamberfold.scalars import EXACT, float_backend, format_scalar, parse_scalar

small = st.integers(-4, 4).map(F)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda m: tuple(tuple(r) for r in m))


square = st.integers(1, 4).flatmap(lambda n: matrices(n, n))
rect = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda rc: matrices(*rc))


# -- examples ---------------------------------------------------------------


def test_rank_kernel_examples():
    r = la.rank_and_kernel(la.identity(2))
    assert (r.rank, r.kernel_basis) == (2, ())
    r = la.rank_and_kernel(((F(0), F(0)), (F(0), F(0))))
    assert r.rank == 0 and len(r.kernel_basis) == 2
    r = la.rank_and_kernel(((F(2), F(-1)), (F(0), F(0))))
    assert r.rank == 1
    (k,) = r.kernel_basis
    assert k[1] == 2 * k[0] and k != (0, 0)


def test_solve_examples():
    A = ((F(2), F(-1)), (F(0), F(0)))
    s = la.solve_affine_system(A, (F(1), F(0)))
    assert s.consistent and len(s.kernel_basis) == 1
    assert la.mat_vec(A, s.particular) == (1, 0)
    assert not la.solve_affine_system(A, (F(0), F(1))).consistent
    s = la.solve_affine_system(la.identity(2), (F(3), F(-7, 2)))
    assert s.particular == (3, F(-7, 2)) and s.kernel_basis == ()


def test_max_slack_examples():
    P = la.PolyhedronSpec(1, strict=(la.Constraint((F(1),), F(0)),))
    assert la.polyhedron_feasible(P) == (1,)
    P = la.PolyhedronSpec(1, strict=(la.Constraint((F(1),), 0), la.Constraint((F(-1),), 0)))
    assert la.polyhedron_feasible(P) is None
    chamber = la.PolyhedronSpec(2, strict=(la.Constraint((F(2), F(-1)), 0), la.Constraint((F(-1), F(2)), 0)))
    line = la.AffineSubspace((F(1, 2), F(0)), ((F(1), F(2)),))
    x = la.polyhedron_feasible(chamber, line)
    assert x is not None and 2 * x[0] - x[1] == 1 and chamber.contains(x)


def test_form_examples():
    assert la.form_eval(la.BilinearSpace(2, la.identity(2)), (1, 0), (1, 0)) == 1
    a2 = la.BilinearSpace(2, ((F(2), F(-1)), (F(-1), F(2))))
    assert la.form_eval(a2, (1, 0), (0, 1)) == -1
    mink = la.BilinearSpace(2, ((F(-1), F(0)), (F(0), F(1))), kind="lorentzian")
    assert la.form_eval(mink, (1, 0), (1, 0)) == -1


def test_inertia():
    assert la.inertia(((F(2), F(-1)), (F(-1), F(2)))) == (2, 0, 0)
    assert la.inertia(((F(1), F(2)), (F(2), F(1)))) == (1, 1, 0)
    assert la.inertia(((F(1), F(1)), (F(1), F(1)))) == (1, 0, 1)


def test_scalars_roundtrip():
    assert parse_scalar("3/6", True) == F(1, 2)
    assert parse_scalar(2, False) == 2.0
    assert format_scalar(F(-4, 6)) == "-2/3"
    assert format_scalar(F(5)) == "5"
    with pytest.raises(ValueError):
        parse_scalar(0.5, True)


def test_epsilon_from_env(monkeypatch):
    monkeypatch.setenv("CHAMBERFOLD_EPSILON", "1e-6")
    assert float_backend().eps == 1e-6
    b = float_backend()
    assert b.sign(5e-7) == 0 and b.sign(2e-6) == 1


# -- properties ---------------------------------------------------------------


@given(rect)
def test_rank_nullity(A):
    r = la.rank_and_kernel(A)
    assert r.rank + len(r.kernel_basis) == len(A[0])
    for k in r.kernel_basis:
        assert all(x == 0 for x in la.mat_vec(A, k))
    assert r.rank == np.linalg.matrix_rank(np.array(A, dtype=float))


@given(rect, st.data())
def test_solve_roundtrip(A, data):
    x = tuple(data.draw(small) for _ in A[0])
    b = la.mat_vec(A, x)
    s = la.solve_affine_system(A, b)
    assert s.consistent
    coeffs = [data.draw(small) for _ in s.kernel_basis]
    y = s.particular
    for c, k in zip(coeffs, s.kernel_basis):
        y = la.add(y, la.scale(c, k))
    assert la.mat_vec(A, y) == b


@given(square, square)
def test_det_multiplicative(A, B):
    if len(A) != len(B):
        return
    assert la.det(la.mat_mul(A, B)) == la.det(A) * la.det(B)
    assert la.det(A) == F(round(np.linalg.det(np.array(A, dtype=float))))


@given(square)
def test_inverse(A):
    if la.det(A) == 0:
        return
    assert la.mat_mul(A, la.inverse(A)) == la.identity(len(A))


@given(square)
def test_float_backend_agrees_on_rank(A):
    Af = tuple(tuple(float(x) for x in r) for r in A)
    assert la.rank(Af, float_backend()) == la.rank(A)


def _lp_slack(P):
    """Independent oracle: maximise min normalised slack (capped at 1) with scipy."""
    n = P.dim
    A_ub, b_ub = [], []
    for c in P.strict:
        m = max(abs(float(a)) for a in c.coeffs)
        A_ub.append([1.0] + [-float(a) / m for a in c.coeffs])
        b_ub.append(-float(c.offset) / m)
    for c in P.nonstrict:
        m = max(abs(float(a)) for a in c.coeffs)
        A_ub.append([0.0] + [-float(a) / m for a in c.coeffs])
        b_ub.append(-float(c.offset) / m)
    res = linprog([-1.0] + [0.0] * n, A_ub=A_ub, b_ub=b_ub,
                  bounds=[(None, 1.0)] + [(None, None)] * n, method="highs")
    return -res.fun if res.status == 0 else None


constraint = st.tuples(st.lists(small, min_size=2, max_size=2), small).filter(lambda c: any(c[0]))


@settings(max_examples=150)
@given(st.lists(constraint, min_size=1, max_size=5), st.lists(constraint, max_size=2))
def test_max_slack_matches_lp(strict, nonstrict):
    P = la.PolyhedronSpec(
        2,
        strict=tuple(la.Constraint(tuple(a), o) for a, o in strict),
        nonstrict=tuple(la.Constraint(tuple(a), o) for a, o in nonstrict),
    )
    res = la.max_slack(P)
    best = _lp_slack(P)
    if res.feasible:
        assert P.contains(res.witness)
        assert best is not None and abs(float(res.slack) - best) < 1e-7
    else:
        assert best is None or best < 1e-9


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5))
def test_cone_dimension_bounds(rows):
    rows = [tuple(r) for r in rows]
    d = la.cone_dimension(rows, 3)
    assert 3 - la.rank(tuple(rows)) <= d <= 3

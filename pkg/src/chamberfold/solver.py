"""Inverse tiling maps: given ``u``, find the unique ``w`` whose tile contains it."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import linalg as la
from .chambers import (
    TileSolution,
    alcove_vertices,
    chamber_polyhedron,
    dual_cone_contains,
    lightcone_classify,
    membership_status,
)
from .coxeter import DEFAULT_HORIZON, GroupElement, ReflectionGroup, check_preserves_form
from .errors import (
    BudgetExhausted,
    NoInteriorFixedPoint,
    NotFound,
    NotInDualCone,
    PreconditionViolated,
    UniquenessViolation,
)


@dataclass(frozen=True)
class SolverBudget:
    max_word_length: int = DEFAULT_HORIZON
    lattice_margin: int = 0

    def __post_init__(self):
        if self.max_word_length < 0 or self.lattice_margin < 0:
            raise ValueError("budget values must be non-negative")


def _scan(G, elements, u, variant, h=None, stop_at_first=False):
    members, ambiguous = [], []
    for w in elements:
        status, tile = membership_status(G, w, u, variant, h)
        if status == "member":
            members.append(tile)
            if stop_at_first:
                break
        elif status == "ambiguous":
            ambiguous.append(w)
    return members, ambiguous


def solve_spherical(G: ReflectionGroup, u) -> TileSolution:
    """Unique ``w`` with ``u in (1 - w) C°``, by scanning the whole group."""
    if G.geometry != "spherical":
        raise PreconditionViolated("solve_spherical needs a spherical group")
    u = tuple(G.backend.coerce(x) for x in u)
    if not dual_cone_contains(G, u):
        raise NotInDualCone(f"{u} is not in the dual cone")
    members, ambiguous = _scan(G, G.elements(), u, "one_minus")
    if len(members) != 1:
        raise UniquenessViolation(
            f"{len(members)} tiles contain u={u} (ambiguous: {len(ambiguous)})")
    return members[0]


# -- affine ---------------------------------------------------------------------


def _lattice_candidates(G: ReflectionGroup, R, t, A, u, margin: int):
    """Lattice translations ``b`` with ``b in (R - A) D + t - u``.

    The hull of the images of the alcove vertices, in coroot coordinates,
    bounds the candidates; it is exact, so ``margin`` only widens the box.
    """
    b = G.backend
    M = la.mat_sub(R, A)
    pts = [la.add(la.sub(la.mat_vec(M, p), u), t) for p in alcove_vertices(G)]
    L = la.from_columns(G.coroots)
    Linv = la.inverse(L, b)
    coords = [la.mat_vec(Linv, p) for p in pts]
    ranges = []
    for i in range(G.rank):
        lo = min(c[i] for c in coords)
        hi = max(c[i] for c in coords)
        ranges.append(range(math.floor(lo) - margin, math.ceil(hi) + margin + 1))
    for n in itertools.product(*ranges):
        yield la.mat_vec(L, tuple(b.coerce(k) for k in n))


def _contraction_factor(G: ReflectionGroup, R) -> object:
    """``lambda`` with ``R^T B R = lambda^2 B``; raises when ``R`` is no scaled isometry."""
    lhs = la.mat_mul(la.transpose(R), la.mat_mul(G.gram, R))
    lam2 = lhs[0][0] / G.gram[0][0]
    ok = all(G.backend.is_zero(lhs[i][j] - lam2 * G.gram[i][j])
             for i in range(G.rank) for j in range(G.rank))
    if not ok:
        raise PreconditionViolated("h must be a scaled isometry: R^T B R = lambda^2 B")
    if G.backend.sign(lam2 - 1) > 0:
        raise PreconditionViolated("h must not expand distances (lambda <= 1)")
    return lam2


def solve_affine_all(G: ReflectionGroup, u, h: GroupElement | None = None,
                     budget: SolverBudget = SolverBudget(), closed: bool = False) -> list:
    """Every ``w = (A, b)`` with ``u in (h - w) D°`` (``D`` when ``closed``)."""
    if G.geometry != "affine":
        raise PreconditionViolated("solve_affine needs an affine group")
    b = G.backend
    u = tuple(b.coerce(x) for x in u)
    n = G.rank
    if h is None:
        h = GroupElement(la.identity(n, b), la.zeros(n, b))
    _contraction_factor(G, h.linear)
    out = []
    for A in G.finite_part.elements():
        for tvec in _lattice_candidates(G, h.linear, h.translation, A.linear, u, budget.lattice_margin):
            w = GroupElement(A.linear, tvec)
            status, tile = membership_status(G, w, u, "h_minus", h, closed)
            if status == "member":
                out.append(_with_word(G, tile))
    out.sort(key=lambda s: s.element.word)
    return out


def _with_word(G, tile):
    from .coxeter import canonical_word

    w = tile.element
    word = canonical_word(G, w, horizon=10**6)
    el = GroupElement(w.linear, w.translation, word)
    return TileSolution(el, tile.witness, tile.tile_dim, tile.kernel_coset, tile.variant, tile.margin,
                        tile.interior, tile.alternatives)


def solve_affine(G: ReflectionGroup, u, h: GroupElement | None = None,
                 budget: SolverBudget = SolverBudget()) -> TileSolution:
    """``w`` with ``u in (h - w) D°``; unique for non-expanding ``h``.

    When no open alcove works (possible for contractions at tile boundaries)
    the closed-alcove candidates are returned: the first one, with
    ``interior=False`` and the rest in ``alternatives``.
    """
    members = solve_affine_all(G, u, h, budget)
    if len(members) > 1:
        raise UniquenessViolation(f"{len(members)} elements claim u={tuple(u)}")
    if members:
        return members[0]
    closed = solve_affine_all(G, u, h, budget, closed=True)
    if not closed:
        raise NotFound(f"no element covers u={tuple(u)}")
    first = closed[0]
    return TileSolution(first.element, first.witness, first.tile_dim, first.kernel_coset, first.variant,
                        first.margin, interior=False, alternatives=tuple(closed[1:]))


# -- hyperbolic -------------------------------------------------------------------


def _hyperbolic_scan(G, u, variant, budget, exhaustive):
    elements = G.elements(budget.max_word_length)
    members, ambiguous = _scan(G, elements, u, variant, stop_at_first=not exhaustive)
    if not members:
        raise BudgetExhausted(budget.max_word_length)
    if len(members) > 1:
        raise UniquenessViolation(f"{len(members)} tiles contain u={u}")
    return members[0]


def solve_hyperbolic_plus(G: ReflectionGroup, u, budget: SolverBudget = SolverBudget(),
                          exhaustive: bool = False) -> TileSolution:
    """``w`` with ``u in (1 - w) C°`` for ``u`` in ``C*`` outside ``K_-``."""
    if G.geometry != "hyperbolic":
        raise PreconditionViolated("solve_hyperbolic_plus needs a hyperbolic group")
    u = tuple(G.backend.coerce(x) for x in u)
    if not dual_cone_contains(G, u):
        raise PreconditionViolated("u is not in the dual cone C*")
    cls = lightcone_classify(G, u)
    if cls not in ("spacelike", "zero"):
        raise PreconditionViolated(f"u must be spacelike (or zero); got {cls}")
    return _hyperbolic_scan(G, u, "one_minus", budget, exhaustive)


def solve_hyperbolic_minus(G: ReflectionGroup, u, budget: SolverBudget = SolverBudget(),
                           exhaustive: bool = False) -> TileSolution:
    """``w`` with ``u in (-1 - w) C°`` for ``u`` strictly inside ``K_-``."""
    if G.geometry != "hyperbolic":
        raise PreconditionViolated("solve_hyperbolic_minus needs a hyperbolic group")
    u = tuple(G.backend.coerce(x) for x in u)
    cls = lightcone_classify(G, u)
    if cls != "K_minus_interior":
        raise PreconditionViolated(f"u must lie strictly inside K_-; got {cls}")
    return _hyperbolic_scan(G, u, "minus_one_minus", budget, exhaustive)


# -- fixed points -------------------------------------------------------------------


def resolve_fixed_point(G: ReflectionGroup, g: GroupElement, budget: SolverBudget = SolverBudget()):
    """Unique ``w`` such that ``w^{-1} g`` fixes a point of the open chamber.

    Returns ``(w, x)`` with ``x`` the max-slack fixed point (a ray representative
    in the linear geometries).
    """
    b = G.backend
    if G.geometry == "affine":
        zero = la.zeros(G.rank, b)
        try:
            tile = solve_affine(G, zero, g, budget)
        except NotFound as exc:
            raise NoInteriorFixedPoint(str(exc)) from exc
        if not tile.interior:
            raise NoInteriorFixedPoint("fixed points only on the alcove boundary",
                                       [tile, *tile.alternatives])
        return tile.element, tile.witness
    if not check_preserves_form(G, g):
        raise PreconditionViolated("g must preserve the form")
    elements = G.elements(None if G.is_finite else budget.max_word_length)
    found = []
    boundary = []
    for w in elements:
        M = la.mat_sub(w.linear, g.linear)  # Fix(w^{-1} g) = ker(w - g)
        ker = la.rank_and_kernel(M, b).kernel_basis
        if not ker:
            continue
        sub = la.AffineSubspace(la.zeros(G.rank, b), ker)
        res = la.max_slack(chamber_polyhedron(G), sub, b)
        if res.feasible:
            found.append((w, res.witness))
        elif la.max_slack(_nonzero_closed(G), sub, b).feasible:
            boundary.append(w)
    if len(found) > 1:
        raise UniquenessViolation(f"{len(found)} elements have interior fixed points")
    if found:
        return found[0]
    if not G.is_finite:
        raise BudgetExhausted(budget.max_word_length)
    raise NoInteriorFixedPoint("no interior fixed point", boundary)


def _nonzero_closed(G):
    """Closed chamber minus the apex: walls >= 0 and their sum > 0."""
    P = chamber_polyhedron(G, closed=True)
    total = tuple(sum(col) for col in zip(*(c.coeffs for c in P.nonstrict)))
    return la.PolyhedronSpec(G.rank, strict=(la.Constraint(total, G.backend.zero()),), nonstrict=P.nonstrict)

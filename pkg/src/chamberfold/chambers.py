"""Chambers, alcoves, dual cones, the light cone, distances and tile membership."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg as la
from .coxeter import GroupElement, ReflectionGroup
from .errors import ModelViolation, NonSimplicialChamber, PreconditionViolated


@dataclass(frozen=True)
class ChamberClassification:
    status: str  # "interior" | "boundary" | "outside"
    face: frozenset = frozenset()

    @property
    def interior(self) -> bool:
        return self.status == "interior"


def _classify(G: ReflectionGroup, x) -> ChamberClassification:
    sign = G.backend.sign
    face = set()
    for lab, a, c in G.walls():
        s = sign(la.dot(a, x) - c)
        if s < 0:
            return ChamberClassification("outside")
        if s == 0:
            face.add(lab)
    if face:
        return ChamberClassification("boundary", frozenset(face))
    return ChamberClassification("interior")


def classify_chamber_point(G: ReflectionGroup, x) -> ChamberClassification:
    """Position of ``x`` relative to the fundamental chamber (alcove when affine).

    ``face`` lists the labels of the walls through ``x``.
    """
    return _classify(G, x)


def alcove_classify(G: ReflectionGroup, x) -> ChamberClassification:
    if G.geometry != "affine":
        raise PreconditionViolated("alcoves belong to affine groups")
    return _classify(G, x)


def chamber_polyhedron(G: ReflectionGroup, closed: bool = False) -> la.PolyhedronSpec:
    rows = tuple(la.Constraint(tuple(a), c) for _, a, c in G.walls())
    if closed:
        return la.PolyhedronSpec(G.rank, nonstrict=rows)
    return la.PolyhedronSpec(G.rank, strict=rows)


def alcove_vertices(G: ReflectionGroup) -> list:
    """Vertices ``0`` and ``pi_i / m_i`` of the alcove (``theta = sum m_i e_i``)."""
    n, b = G.rank, G.backend
    Ginv = G._gram_inverse
    verts = [la.zeros(n, b)]
    for i in range(n):
        pi = tuple(Ginv[r][i] for r in range(n))
        verts.append(la.scale(1 / G.highest_root[i], pi))
    return verts


def dual_cone_contains(G: ReflectionGroup, u) -> bool:
    """``u`` in ``C* = cone(Pi)``: a sign check on the Pi-coordinates."""
    if G.geometry == "affine":
        raise PreconditionViolated("the dual cone is defined for spherical and hyperbolic groups")
    if len(G.generators) != G.rank:
        raise NonSimplicialChamber("chamber must be simplicial")
    return all(G.backend.sign(x) >= 0 for x in u)


# -- light cone -----------------------------------------------------------------

LIGHTCONE_CLASSES = (
    "K_plus_interior", "K_plus_boundary", "K_minus_interior", "K_minus_boundary", "spacelike", "zero",
)


def time_vector(G: ReflectionGroup):
    """Interior point of ``C`` fixing the time orientation (``K_+`` contains ``C``)."""
    return G.interior_point


def lightcone_classify(G: ReflectionGroup, u) -> str:
    if G.geometry != "hyperbolic":
        raise PreconditionViolated("light cone classes need a Lorentzian form")
    sign = G.backend.sign
    if all(sign(x) == 0 for x in u):
        return "zero"
    q = sign(G.form(u, u))
    if q > 0:
        return "spacelike"
    side = sign(G.form(u, time_vector(G)))
    # for non-zero causal u, [u, tau] < 0 exactly when u and tau share a nappe
    plus = side < 0
    if q < 0:
        return "K_plus_interior" if plus else "K_minus_interior"
    return "K_plus_boundary" if plus else "K_minus_boundary"


# -- distances ------------------------------------------------------------------


def _check_model(space, x, geometry):
    b = space.backend
    tol = 10 * max(b.eps, 1e-12)
    q = float(space.norm2(x))
    if geometry == "spherical" and abs(q - 1) > tol:
        raise ModelViolation("point is not on the unit sphere")
    if geometry == "hyperbolic" and abs(q + 1) > tol:
        raise ModelViolation("point is not on the hyperboloid [x, x] = -1")


def distance_surrogate(space: la.BilinearSpace, x, y, geometry: str):
    """Exact monotone stand-in for the distance.

    spherical: ``cos rho = (x, y)`` (decreasing in rho); hyperbolic:
    ``ch rho = -[x, y]`` (increasing); affine: squared distance.
    """
    if geometry == "affine":
        d = la.sub(x, y)
        return space.norm2(d)
    _check_model(space, x, geometry)
    _check_model(space, y, geometry)
    if geometry == "spherical":
        return space.form(x, y)
    return -space.form(x, y)


def distance(space_or_group, x, y, geometry: str | None = None) -> float:
    if isinstance(space_or_group, ReflectionGroup):
        space, geometry = space_or_group.space, geometry or space_or_group.geometry
    else:
        space = space_or_group
    s = float(distance_surrogate(space, x, y, geometry))
    if geometry == "affine":
        return math.sqrt(max(s, 0.0))
    if geometry == "spherical":
        return math.acos(min(1.0, max(-1.0, s)))
    return math.acosh(max(1.0, s))


# -- tiles ----------------------------------------------------------------------


@dataclass(frozen=True)
class TileSolution:
    """``u = (h - w) v`` with ``v`` in the open chamber (alcove).

    ``witness`` is the max-slack point of the solution coset inside the
    chamber; ``kernel_coset`` is ``(particular, kernel_basis)`` of the linear
    system; ``margin`` is the minimum normalised wall slack at the witness.
    """

    element: GroupElement
    witness: la.Vector
    tile_dim: int
    kernel_coset: tuple
    variant: str = "one_minus"
    margin: object = None
    interior: bool = True
    alternatives: tuple = ()


VARIANTS = ("one_minus", "minus_one_minus", "h_minus")


def tile_system(G: ReflectionGroup, w: GroupElement, u, variant: str = "one_minus", h=None):
    """The linear system ``(R - A) v = u - t + b`` for ``u in (h - w) v``."""
    n, b = G.rank, G.backend
    if variant == "one_minus":
        R, t = la.identity(n, b), la.zeros(n, b)
    elif variant == "minus_one_minus":
        R, t = la.mat_scale(-b.one(), la.identity(n, b)), la.zeros(n, b)
    elif variant == "h_minus":
        if h is None:
            raise ValueError("h_minus needs h")
        R, t = h.linear, h.translation
    else:
        raise ValueError(f"unknown variant {variant!r}")
    A = la.mat_sub(R, w.linear)
    rhs = la.add(la.sub(tuple(u), t), w.translation)
    return A, rhs


def membership_status(G: ReflectionGroup, w: GroupElement, u, variant: str = "one_minus", h=None,
                      closed: bool = False):
    """``("member" | "not_member" | "ambiguous", TileSolution | None)``.

    Ambiguous only on the float backend, when the best slack is within eps of 0.
    """
    A, rhs = tile_system(G, w, u, variant, h)
    sol = la.solve_affine_system(A, rhs, G.backend)
    if not sol.consistent:
        return "not_member", None
    coset = la.AffineSubspace(sol.particular, sol.kernel_basis)
    res = la.max_slack(chamber_polyhedron(G, closed), coset, G.backend)
    if res.ambiguous:
        return "ambiguous", None
    if not res.feasible:
        return "not_member", None
    tile = TileSolution(w, res.witness, sol.rank, (sol.particular, sol.kernel_basis), variant,
                        res.slack, interior=not closed)
    return "member", tile


def tile_membership(G: ReflectionGroup, w: GroupElement, u, variant: str = "one_minus", h=None,
                    closed: bool = False) -> TileSolution | None:
    status, tile = membership_status(G, w, u, variant, h, closed)
    return tile if status == "member" else None


def lorentz_norm_increment(G: ReflectionGroup, w_prime: GroupElement, e_label: int, x):
    """``4 [w'x, e][x, e] / [e, e]``: the step in ``[(1-w)x, (1-w)x]`` when ``w = s_e w'``."""
    e = G.simple_normal(e_label)
    wx = w_prime.apply_linear(x)
    return 4 * G.form(wx, e) * G.form(x, e) / G.form(e, e)

"""Structure of the tiles ``C_w = (1 - w) C`` for finite reflection groups.

Fundamental coweights, the vectors ``v_u``, minimal reflection factorisations,
adjacency of tiles, and determinant sums.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import linalg as la
from .coxeter import (
    GroupElement,
    ReflectionGroup,
    finite_roots,
    fixed_space_of_group,
    is_regular,
    one_minus,
    rank_one_minus,
    reflection_in_vector,
)
from .errors import InconsistentComponent, NotRegular, PreconditionViolated


def _require_finite(G):
    if not G.is_finite:
        raise PreconditionViolated("this operation needs a finite (spherical) group")


def _key(G, w: GroupElement):
    if G.backend.exact:
        return w.linear
    return tuple(round(x, 8) for r in w.linear for x in r)


@dataclass(frozen=True)
class RootInventory:
    roots: tuple
    reflections: tuple

    def __len__(self):
        return len(self.roots)


def enumerate_roots(G: ReflectionGroup) -> RootInventory:
    """Positive root normals (orbit of Pi on the positive side), with their reflections."""
    _require_finite(G)
    roots = tuple(finite_roots(G))
    refl = []
    for r in roots:
        s = reflection_in_vector(G, r)
        refl.append(GroupElement(s.linear, s.translation, _lookup(G, s).word))
    return RootInventory(roots, tuple(refl))


def _lookup(G, w):
    if "_by_matrix" not in G.__dict__:
        G.__dict__["_by_matrix"] = {_key(G, g): g for g in G.elements()}
    return G.__dict__["_by_matrix"][_key(G, w)]


def lookup_element(G: ReflectionGroup, w: GroupElement) -> GroupElement:
    """The enumerated element (with its canonical word) equal to ``w``."""
    return _lookup(G, w)


def regular_elements(G: ReflectionGroup) -> list:
    _require_finite(G)
    return [w for w in G.elements() if is_regular(G, w)]


def fundamental_coweights(G: ReflectionGroup) -> list:
    """``pi_e`` with ``B(pi_e, f) = delta_ef`` and ``pi_e`` orthogonal to ``V^W``."""
    n, b = G.rank, G.backend
    fixed = fixed_space_of_group(G)
    out = []
    for i in range(n):
        rows = list(G.gram) + [la.mat_vec(G.gram, z) for z in fixed]
        rhs = list(la.unit(n, i, b)) + [b.zero()] * len(fixed)
        sol = la.solve_affine_system(tuple(rows), tuple(rhs), b)
        out.append(sol.particular)
    return out


def v_vector(G: ReflectionGroup, w: GroupElement, u) -> la.Vector:
    """The solution of ``(w^{-1} - 1) v = u`` orthogonal to ``V^W``."""
    if not is_regular(G, w):
        raise NotRegular("v_u is defined for regular w")
    b = G.backend
    n = G.rank
    fixed = fixed_space_of_group(G)
    for z in fixed:
        if not b.is_zero(G.form(z, u)):
            raise InconsistentComponent("u has a component along V^W")
    winv = G.inv(w)
    A = la.mat_sub(winv.linear, la.identity(n, b))
    rows = list(A) + [la.mat_vec(G.gram, z) for z in fixed]
    rhs = list(u) + [b.zero()] * len(fixed)
    sol = la.solve_affine_system(tuple(rows), tuple(rhs), b)
    if not sol.consistent:
        raise InconsistentComponent("u is not in the image of w^{-1} - 1")
    return sol.particular


# -- minimal reflection factorisations ------------------------------------------


@dataclass(frozen=True)
class MinimalDecomposition:
    """``target = s_{roots[0]} s_{roots[1]} ... s_{roots[-1]}``."""

    roots: tuple
    target: GroupElement

    def __len__(self):
        return len(self.roots)


def kostant_decompose(G: ReflectionGroup, w: GroupElement) -> MinimalDecomposition:
    """Greedy descent: repeatedly right-multiply by the first root that lowers ``rank(1 - w)``."""
    _require_finite(G)
    inv = enumerate_roots(G)
    cur = w
    r = rank_one_minus(G, cur)
    picked = []
    while r > 0:
        for u, s in zip(inv.roots, inv.reflections):
            nxt = G.mul(cur, s)
            rn = rank_one_minus(G, nxt)
            if rn == r - 1:
                picked.append(u)
                cur, r = nxt, rn
                break
        else:  # pragma: no cover - ruled out by the reflection length theorem
            raise RuntimeError("no rank-lowering reflection found")
    return MinimalDecomposition(tuple(reversed(picked)), w)


def multiply_reflections(G: ReflectionGroup, roots) -> GroupElement:
    g = G.identity()
    for u in roots:
        g = G.mul(g, reflection_in_vector(G, u))
    return g


def reflection_length_table(G: ReflectionGroup) -> dict:
    """Breadth-first distances from 1 in the Cayley graph generated by all reflections."""
    _require_finite(G)
    if "_refl_len" in G.__dict__:
        return G.__dict__["_refl_len"]
    gens = enumerate_roots(G).reflections
    e = G.identity()
    dist = {_key(G, e): 0}
    queue = deque([e])
    while queue:
        g = queue.popleft()
        d = dist[_key(G, g)]
        for s in gens:
            h = G.mul(g, s)
            k = _key(G, h)
            if k not in dist:
                dist[k] = d + 1
                queue.append(h)
    G.__dict__["_refl_len"] = dist
    return dist


def minimal_length_oracle(G: ReflectionGroup, w: GroupElement) -> int:
    return reflection_length_table(G)[_key(G, w)]


def linearly_independent(G: ReflectionGroup, vectors) -> bool:
    vectors = tuple(vectors)
    if not vectors:
        return True
    return la.rank(vectors, G.backend) == len(vectors)


# -- adjacency --------------------------------------------------------------------


@dataclass(frozen=True)
class FullAdjacency:
    adjacent: bool
    witness: tuple | None = None  # (e, f) labels


def _require_regular(G, *ws):
    for w in ws:
        if not is_regular(G, w):
            raise NotRegular("adjacency of full-dimensional tiles needs regular elements")


def adjacency_full(G: ReflectionGroup, w: GroupElement, w2: GroupElement) -> FullAdjacency:
    """Criterion ``w2 = w s_e s_f`` with ``B(v_e, f) > 0`` (``v_e`` taken for ``w``)."""
    _require_finite(G)
    _require_regular(G, w, w2)
    n = G.rank
    for e in range(1, n + 1):
        se = G.generator(e)
        ve = None
        for f in range(1, n + 1):
            cand = G.mul(G.mul(w, se), G.generator(f))
            if not G.same(cand, w2):
                continue
            if ve is None:
                ve = v_vector(G, w, G.simple_normal(e))
            if G.backend.sign(G.form(ve, G.simple_normal(f))) > 0:
                return FullAdjacency(True, (e, f))
    return FullAdjacency(False)


def tile_inequalities(G: ReflectionGroup, w: GroupElement) -> list:
    """Rows ``a`` with ``C_w = {x : a . x >= 0}`` for regular ``w``."""
    Minv = la.inverse(one_minus(G, w), G.backend)
    return [la.mat_vec(la.transpose(Minv), row) for row in G.gram]


def geometric_adjacency_oracle(G: ReflectionGroup, w: GroupElement, w2: GroupElement) -> bool:
    """True iff ``C_w`` and ``C_w2`` meet in a cone of dimension ``n - 1``."""
    _require_regular(G, w, w2)
    rows = tile_inequalities(G, w) + tile_inequalities(G, w2)
    return la.cone_dimension(rows, G.rank, G.backend) == G.rank - 1


def tile_dimension(G: ReflectionGroup, w: GroupElement) -> int:
    return rank_one_minus(G, w)


def intersection_dimension(G: ReflectionGroup, w_low: GroupElement, w: GroupElement) -> int:
    """``dim (C_{w_low} ∩ C_w)`` for regular ``w``.

    ``C_{w_low}`` is parametrised by ``lambda >= 0`` through its coweight
    generators; the dimension is the rank of ``(1 - w_low) Pi_coweights`` on
    the linear span of the resulting cone in ``lambda``-space.
    """
    b = G.backend
    n = G.rank
    P = la.from_columns(fundamental_coweights(G))
    gen = la.mat_mul(one_minus(G, w_low), P)  # columns: (1 - w_low) pi_i
    rows = [la.unit(n, i, b) for i in range(n)]
    for a in tile_inequalities(G, w):
        rows.append(tuple(la.dot(a, col) for col in la.columns(gen)))
    implicit = la.implicit_equalities(rows, n, b)
    if implicit:
        span = la.rank_and_kernel(tuple(implicit), b).kernel_basis
    else:
        span = tuple(la.unit(n, i, b) for i in range(n))
    if not span:
        return 0
    return la.rank(la.from_columns([la.mat_vec(gen, s) for s in span]), b)


@dataclass(frozen=True)
class LowerAdjacency:
    """Algebraic verdict for a lower-dimensional tile next to a regular one.

    ``adjacent`` is the algebraic criterion; ``geometric`` is the direct test
    ``dim C_{w_low} = dim (C_{w_low} ∩ C_w)``; ``literal`` is the criterion
    with R~ read as ``R ∩ Im(1 - w~)`` only.
    """

    adjacent: bool
    geometric: bool
    literal: bool
    w_tilde: GroupElement
    prefix: MinimalDecomposition
    suffix: MinimalDecomposition | None
    face_dim: int

    @property
    def agrees(self) -> bool:
        return self.adjacent == self.geometric


def adjacency_lower(G: ReflectionGroup, w_low: GroupElement, w: GroupElement) -> LowerAdjacency:
    """Is ``C_{w_low}`` adjacent to the full tile ``C_w``?

    With ``w = w_low w~`` and ``k = rank(1 - w_low)``: adjacency holds iff
    ``rank(1 - w~) = n - k``, the roots of minimal factorisations of
    ``w_low`` and ``w~`` are jointly independent, and each root of ``w~`` is
    orthogonal to the face ``C ∩ ker(1 - w~)``, which must have dimension ``k``.
    """
    _require_finite(G)
    if not is_regular(G, w):
        raise NotRegular("w must be regular")
    b = G.backend
    n = G.rank
    k = rank_one_minus(G, w_low)
    w_tilde = G.mul(G.inv(w_low), w)
    prefix = kostant_decompose(G, w_low)
    fixed = la.rank_and_kernel(one_minus(G, w_tilde), b).kernel_basis
    face_rows = [tuple(la.dot(row, z) for z in fixed) for row in G.gram]
    face_dim = la.cone_dimension(face_rows, len(fixed), b) if fixed else 0
    suffix = None
    literal = adjacent = False
    if rank_one_minus(G, w_tilde) == n - k:
        suffix = kostant_decompose(G, w_tilde)
        independent = linearly_independent(G, prefix.roots + suffix.roots)
        image = one_minus(G, w_tilde)
        in_image = all(la.in_column_space(image, u, b) for u in suffix.roots)
        literal = independent and in_image
        face = _face_generators(G, fixed)
        orthogonal = all(b.is_zero(G.form(u, x)) for u in suffix.roots for x in face)
        adjacent = literal and orthogonal and face_dim == k
    geometric = tile_dimension(G, w_low) == intersection_dimension(G, w_low, w)
    return LowerAdjacency(adjacent, geometric, literal, w_tilde, prefix, suffix, face_dim)


def _face_generators(G, fixed):
    """Coweights lying in ``span(fixed)``: the rays of the face ``C ∩ span(fixed)``."""
    out = []
    for pi in fundamental_coweights(G):
        if not fixed:
            break
        if la.in_column_space(la.from_columns(fixed), pi, G.backend):
            out.append(pi)
    return out


# -- determinant sums ---------------------------------------------------------------


def det_sum(G: ReflectionGroup, h: la.Matrix | None = None):
    """``sum_w det(1 - w)``, or ``sum_w det(1 - h w^{-1})`` for a linear map ``h``."""
    _require_finite(G)
    b = G.backend
    n = G.rank
    total = b.zero()
    for w in G.elements():
        if h is None:
            M = one_minus(G, w)
        else:
            M = la.mat_sub(la.identity(n, b), la.mat_mul(h, G.inv(w).linear))
        total += la.det(M, b)
    return total

"""Reflection groups built from Cartan, Coxeter or Gram data.

Vectors are written in the basis of simple normals ``e_1 .. e_n``; the form is
the Gram matrix ``B`` of that basis.  Generator labels are 1-based, and the
affine reflection of an affine Weyl group carries label 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import linalg as la
from .errors import (
    NonCocompactWarning,
    NotEnumerated,
    NotInGroup,
    SignatureMismatch,
    SpecError,
)
from .scalars import EXACT, Backend, float_backend, is_rational_entry, parse_scalar

GEOMETRIES = ("spherical", "affine", "hyperbolic")
DEFAULT_HORIZON = 12


@dataclass(frozen=True)
class GroupSpec:
    """Declarative group input.

    ``source`` is ``"cartan"``, ``"coxeter"`` or ``"gram"``.  For affine
    geometry the matrix describes the finite part ``W_0``.  Coxeter orders of
    0 or ``"inf"`` mean an infinite order.  ``backend`` of None picks exact
    arithmetic whenever the Gram matrix is rational.
    """

    geometry: str
    source: str
    matrix: tuple
    name: str = ""
    backend: str | None = None
    epsilon: float | None = None


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Affine map ``x -> linear x + translation`` with an optional word."""

    linear: la.Matrix
    translation: la.Vector
    word: tuple | None = None

    def __call__(self, x: la.Vector) -> la.Vector:
        return la.add(la.mat_vec(self.linear, x), self.translation)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return element_mul(self, other)

    def apply_linear(self, x: la.Vector) -> la.Vector:
        return la.mat_vec(self.linear, x)


def element_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    word = a.word + b.word if a.word is not None and b.word is not None else None
    return GroupElement(
        la.mat_mul(a.linear, b.linear),
        la.add(la.mat_vec(a.linear, b.translation), a.translation),
        word,
    )


# -- spec parsing -------------------------------------------------------------


def _coxeter_entry(m):
    if isinstance(m, str) and m.strip().lower() in ("inf", "infinity", "oo"):
        return 0
    if m is None:
        return 0
    if isinstance(m, float) and math.isinf(m):
        return 0
    if int(m) != m:
        raise SpecError(f"Coxeter order {m!r} is not an integer")
    return int(m)


def _gram_from_coxeter(M, exact: bool):
    n = len(M)
    G = []
    for i in range(n):
        row = []
        for j in range(n):
            m = _coxeter_entry(M[i][j])
            if i == j:
                if m != 1:
                    raise SpecError("Coxeter matrix must have 1 on the diagonal")
                row.append(Fraction(1) if exact else 1.0)
            elif m == 0:
                row.append(Fraction(-1) if exact else -1.0)
            elif m < 2:
                raise SpecError("off-diagonal Coxeter orders must be >= 2")
            elif m == 2:
                row.append(Fraction(0) if exact else 0.0)
            elif m == 3:
                row.append(Fraction(-1, 2) if exact else -0.5)
            else:
                if exact:
                    raise SpecError(f"order {m} gives an irrational Gram entry; use the float backend")
                row.append(-math.cos(math.pi / m))
        G.append(tuple(row))
    for i in range(n):
        for j in range(n):
            if _coxeter_entry(M[i][j]) != _coxeter_entry(M[j][i]):
                raise SpecError("Coxeter matrix must be symmetric")
    return tuple(G)


def _coxeter_is_rational(M) -> bool:
    return all(_coxeter_entry(m) in (0, 1, 2, 3) for row in M for m in row)


def _gram_from_cartan(A, exact: bool):
    """Symmetrise ``A``: find ``d_i = B(e_i, e_i)`` with ``d_i A_ij = d_j A_ji``."""
    n = len(A)
    A = [[Fraction(a) for a in row] for row in A]
    for i in range(n):
        if A[i][i] != 2:
            raise SpecError("Cartan matrix must have 2 on the diagonal")
        for j in range(n):
            if i != j:
                if A[i][j] > 0 or A[i][j].denominator != 1:
                    raise SpecError("off-diagonal Cartan entries must be non-positive integers")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise SpecError("Cartan matrix is not symmetrisable")
    d = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(2)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and A[i][j] != 0:
                    val = d[i] * A[i][j] / A[j][i]
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        raise SpecError("Cartan matrix is not symmetrisable")
    G = tuple(tuple(d[i] * A[i][j] / 2 for j in range(n)) for i in range(n))
    if not exact:
        G = tuple(tuple(float(x) for x in row) for row in G)
    return G


def spec_gram(spec: GroupSpec) -> tuple[la.Matrix, Backend]:
    M = spec.matrix
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise SpecError("matrix must be square and non-empty")
    if spec.source == "cartan":
        rational = True
    elif spec.source == "coxeter":
        rational = _coxeter_is_rational(M)
    elif spec.source == "gram":
        rational = all(is_rational_entry(x) for row in M for x in row)
    else:
        raise SpecError(f"unknown matrix source {spec.source!r}")
    want = spec.backend
    if want is None:
        want = "exact" if rational else "float"
    if want == "exact" and not rational:
        raise SpecError("exact backend requested but the Gram matrix is irrational")
    if want not in ("exact", "float"):
        raise SpecError(f"unknown backend {want!r}")
    backend = EXACT if want == "exact" else float_backend(spec.epsilon)
    exact = backend.exact
    if spec.source == "cartan":
        G = _gram_from_cartan(M, exact)
    elif spec.source == "coxeter":
        G = _gram_from_coxeter(M, exact)
    else:
        G = tuple(tuple(parse_scalar(x, exact) for x in row) for row in M)
    for i in range(n):
        for j in range(n):
            if backend.sign(G[i][j] - G[j][i]) != 0:
                raise SpecError("Gram matrix must be symmetric")
    return G, backend


# -- the group ------------------------------------------------------------------


@dataclass(eq=False)
class ReflectionGroup:
    """A reflection group in the basis of its simple normals.

    Spherical groups are enumerated on construction.  Hyperbolic and affine
    groups enumerate lazily, breadth-first, up to ``horizon``.
    """

    name: str
    geometry: str
    space: la.BilinearSpace
    generators: tuple
    labels: tuple
    interior_point: la.Vector
    horizon: int = DEFAULT_HORIZON
    finite_part: "ReflectionGroup | None" = None
    highest_root: la.Vector | None = None
    coroots: tuple = ()
    spec: GroupSpec | None = None
    _layers: list = field(default_factory=list, repr=False)
    _index: dict = field(default_factory=dict, repr=False)
    _complete: bool = field(default=False, repr=False)

    @property
    def backend(self) -> Backend:
        return self.space.backend

    @property
    def rank(self) -> int:
        return self.space.dim

    @property
    def gram(self) -> la.Matrix:
        return self.space.gram

    @property
    def is_finite(self) -> bool:
        return self.geometry == "spherical"

    def form(self, x, y):
        return self.space.form(x, y)

    def simple_normal(self, i: int) -> la.Vector:
        """``e_i`` for 1-based label ``i``."""
        return la.unit(self.rank, i - 1, self.backend)

    def identity(self) -> GroupElement:
        n, b = self.rank, self.backend
        return GroupElement(la.identity(n, b), la.zeros(n, b), ())

    def generator(self, label: int) -> GroupElement:
        return self.generators[self.labels.index(label)]

    # -- walls --------------------------------------------------------------

    def walls(self) -> list:
        """``(label, a, c)``: the positive side of the wall is ``a . x > c``."""
        n, b = self.rank, self.backend
        out = []
        if self.geometry == "affine":
            theta_row = la.mat_vec(self.gram, self.highest_root)
            out.append((0, tuple(-x for x in theta_row), -b.one()))
        for i in range(n):
            out.append((i + 1, self.gram[i], b.zero()))
        return out

    # -- elements -------------------------------------------------------------

    def mul(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return element_mul(a, b)

    def inv(self, a: GroupElement) -> GroupElement:
        """Inverse via ``M^{-1} = B^{-1} M^T B`` (valid for form-preserving maps)."""
        Binv = self._gram_inverse
        lin = la.mat_mul(Binv, la.mat_mul(la.transpose(a.linear), self.gram))
        tr = tuple(-x for x in la.mat_vec(lin, a.translation))
        word = tuple(reversed(a.word)) if a.word is not None else None
        return GroupElement(lin, tr, word)

    @property
    def _gram_inverse(self):
        cache = self.__dict__.get("_ginv")
        if cache is None:
            cache = la.inverse(self.gram, self.backend)
            self.__dict__["_ginv"] = cache
        return cache

    def from_word(self, word) -> GroupElement:
        g = self.identity()
        for i in word:
            g = element_mul(g, self.generator(i))
        return GroupElement(g.linear, g.translation, tuple(word))

    def same(self, a: GroupElement, b: GroupElement) -> bool:
        """Element equality: exact matrices, or canonical gallery words on floats."""
        if self.backend.exact:
            return a.linear == b.linear and a.translation == b.translation
        return canonical_word(self, a) == canonical_word(self, b)

    def _walk(self, y: la.Vector, limit: int) -> tuple | None:
        """Gallery walk from the chamber containing ``y`` back to the fundamental one."""
        word = []
        walls = self.walls()
        sign = self.backend.sign
        gens = {lab: g for lab, g in zip(self.labels, self.generators)}
        while True:
            for lab, a, c in walls:
                if sign(la.dot(a, y) - c) < 0:
                    break
            else:
                return tuple(word)
            if len(word) >= limit:
                return None
            word.append(lab)
            y = gens[lab](y)

    def _enumerate_layers(self, upto: int | None) -> None:
        if not self._layers:
            e = self.identity()
            self._layers.append([e])
            self._index[()] = e
        while not self._complete and (upto is None or len(self._layers) <= upto):
            last = self._layers[-1]
            nxt = []
            for w in last:
                for lab, s in zip(self.labels, self.generators):
                    cand = element_mul(w, s)
                    word = w.word + (lab,)
                    if self._walk(cand(self.interior_point), len(word)) == word:
                        el = GroupElement(cand.linear, cand.translation, word)
                        nxt.append(el)
                        self._index[word] = el
            if not nxt:
                self._complete = True
                break
            nxt.sort(key=lambda g: g.word)
            self._layers.append(nxt)

    def elements(self, max_word_length: int | None = None) -> list:
        if self.is_finite:
            self._enumerate_layers(None)
            layers = self._layers
        else:
            limit = self.horizon if max_word_length is None else max_word_length
            self._enumerate_layers(limit)
            layers = self._layers[: limit + 1]
        return [g for layer in layers for g in layer]

    def order(self) -> int | None:
        return len(self.elements()) if self.is_finite else None


def enumerate_elements(G: ReflectionGroup, max_word_length: int | None = None) -> Iterator[GroupElement]:
    """ShortLex stream of distinct elements (full group when finite)."""
    yield from G.elements(max_word_length)


def canonical_word(G: ReflectionGroup, w: GroupElement, horizon: int | None = None) -> tuple:
    """ShortLex-least reduced word, found by walking from ``wD`` back to ``D``.

    Raises :class:`NotInGroup` when the walk does not close up.
    """
    if horizon is None:
        horizon = max(G.horizon, len(w.word) if w.word else 0)
        if G.is_finite:
            horizon = 10**6
    word = G._walk(w(G.interior_point), horizon)
    if word is None:
        raise NotInGroup(f"gallery walk did not reach the fundamental chamber within {horizon} steps")
    g = G.from_word(word)
    if G.backend.exact:
        ok = g.linear == w.linear and g.translation == w.translation
    else:
        tol = 10 * G.backend.eps * max(1.0, la.max_abs(x for r in g.linear for x in r))
        ok = la.matrix_close(g.linear, w.linear, tol) and all(
            abs(a - b) <= tol for a, b in zip(g.translation, w.translation))
    if not ok:
        raise NotInGroup("element does not map the fundamental chamber onto a chamber of the group")
    return word


def element_length(G: ReflectionGroup, w: GroupElement) -> int:
    try:
        word = canonical_word(G, w)
    except NotInGroup as exc:
        raise NotEnumerated(str(exc)) from exc
    if not G.is_finite and len(word) > G.horizon:
        raise NotEnumerated(f"length {len(word)} exceeds the horizon {G.horizon}")
    return len(word)


def reflection_in_vector(G_or_space, u: la.Vector) -> GroupElement:
    """Matrix of ``x -> x - 2 B(x, u) / B(u, u) u``."""
    from .errors import LightlikeVector

    space = G_or_space.space if isinstance(G_or_space, ReflectionGroup) else G_or_space
    b = space.backend
    q = space.norm2(u)
    if b.is_zero(q):
        raise LightlikeVector("B(u, u) = 0: no reflection in a lightlike vector")
    Bu = la.mat_vec(space.gram, u)
    n = space.dim
    M = tuple(
        tuple((b.one() if r == c else b.zero()) - 2 * u[r] * Bu[c] / q for c in range(n))
        for r in range(n)
    )
    return GroupElement(M, la.zeros(n, b))


def one_minus(G: ReflectionGroup, w: GroupElement) -> la.Matrix:
    return la.mat_sub(la.identity(G.rank, G.backend), w.linear)


def rank_one_minus(G: ReflectionGroup, w: GroupElement) -> int:
    return la.rank(one_minus(G, w), G.backend)


def fixed_space_of_group(G: ReflectionGroup) -> tuple:
    """Basis of ``V^W``, the common kernel of ``1 - s_i``."""
    rows = []
    for s in G.generators[-G.rank:]:
        rows.extend(one_minus(G, s))
    return la.rank_and_kernel(tuple(rows), G.backend).kernel_basis


def is_regular(G: ReflectionGroup, w: GroupElement) -> bool:
    if "_vw_dim" not in G.__dict__:
        G.__dict__["_vw_dim"] = len(fixed_space_of_group(G))
    return rank_one_minus(G, w) == G.rank - G.__dict__["_vw_dim"]


def stabilizer_generators(G: ReflectionGroup, x: la.Vector) -> list:
    """Simple reflections fixing ``x`` (``x`` in the closed fundamental chamber)."""
    out = []
    for lab, a, c in G.walls():
        if G.backend.is_zero(la.dot(a, x) - c):
            out.append(G.generator(lab))
    return out


def stabilizer_labels(G: ReflectionGroup, x: la.Vector) -> frozenset:
    return frozenset(lab for lab, a, c in G.walls() if G.backend.is_zero(la.dot(a, x) - c))


# -- construction -----------------------------------------------------------


def _reflection_matrix(G: la.Matrix, i: int, backend: Backend) -> la.Matrix:
    n = len(G)
    return tuple(
        tuple(
            ((backend.one() if r == c else backend.zero()) - (2 * G[i][c] / G[i][i] if r == i else 0))
            for c in range(n)
        )
        for r in range(n)
    )


def _positive_definite(G, backend) -> bool:
    if backend.exact:
        return all(m > 0 for m in la.leading_minors(G, backend))
    p, q, z = la.inertia(G, backend)
    return p == len(G)


def _chamber_interior(gram, backend, extra=()):
    n = len(gram)
    strict = [la.Constraint(tuple(row), backend.zero()) for row in gram]
    strict.extend(extra)
    res = la.max_slack(la.PolyhedronSpec(n, strict=tuple(strict)), None, backend)
    if not res.feasible:
        raise SignatureMismatch("fundamental chamber has empty interior")
    return res.witness


def _root_orbit(gram, gens, backend):
    """Positive roots (orbit of the simple normals), ordered by height then coordinates."""
    n = len(gram)
    seen = {}
    frontier = [la.unit(n, i, backend) for i in range(n)]

    def key(v):
        return v if backend.exact else tuple(round(x, 9) for x in v)

    for v in frontier:
        seen[key(v)] = v
    while frontier:
        new = []
        for v in frontier:
            for M in gens:
                u = la.mat_vec(M, v)
                k = key(u)
                if k not in seen:
                    seen[k] = u
                    new.append(u)
        frontier = new
        if len(seen) > 10_000:
            raise SpecError("root orbit is infinite")
    pos = [v for v in seen.values() if backend.sign(sum(v)) > 0]
    pos.sort(key=lambda v: (sum(v), tuple(-x for x in v)))
    return pos


def build_group(spec: GroupSpec, horizon: int = DEFAULT_HORIZON) -> ReflectionGroup:
    if spec.geometry not in GEOMETRIES:
        raise SpecError(f"unknown geometry {spec.geometry!r}")
    G, backend = spec_gram(spec)
    n = len(G)
    for i in range(n):
        if backend.sign(G[i][i]) <= 0:
            raise SignatureMismatch("simple normals must have B(e, e) > 0")
    if spec.geometry in ("spherical", "affine"):
        if not _positive_definite(G, backend):
            raise SignatureMismatch(f"{spec.geometry} geometry needs a positive-definite Gram matrix")
        kind = "positive-definite"
    else:
        p, q, z = la.inertia(G, backend)
        if (p, q, z) != (n - 1, 1, 0):
            raise SignatureMismatch(f"hyperbolic geometry needs signature ({n - 1}, 1); got ({p}, {q}, {z})")
        kind = "lorentzian"
        _warn_if_not_cocompact(G, backend)
    space = la.BilinearSpace(n, G, kind, backend)
    mats = [_reflection_matrix(G, i, backend) for i in range(n)]
    zero_t = la.zeros(n, backend)
    gens = [GroupElement(m, zero_t, (i + 1,)) for i, m in enumerate(mats)]
    labels = [i + 1 for i in range(n)]
    name = spec.name or spec.geometry

    if spec.geometry == "affine":
        for i in range(n):
            for j in range(n):
                c = 2 * G[i][j] / G[i][i]
                if backend.exact and c.denominator != 1:
                    raise SpecError("affine groups need crystallographic data (integer Cartan entries)")
        finite_spec = GroupSpec("spherical", spec.source, spec.matrix, name + "_0", spec.backend, spec.epsilon)
        finite = build_group(finite_spec)
        theta = finite_roots(finite)[-1]
        q = la.dot(theta, la.mat_vec(G, theta))
        theta_co = la.scale(2 / q, theta)
        s_theta = la.mat_sub(
            la.identity(n, backend),
            tuple(tuple(2 * theta[r] * la.mat_vec(G, theta)[c] / q for c in range(n)) for r in range(n)),
        )
        gens.insert(0, GroupElement(s_theta, theta_co, (0,)))
        labels.insert(0, 0)
        theta_row = la.mat_vec(G, theta)
        extra = (la.Constraint(tuple(-x for x in theta_row), -backend.one()),)
        x0 = _chamber_interior(G, backend, extra)
        coroots = tuple(la.scale(2 / G[i][i], la.unit(n, i, backend)) for i in range(n))
        return ReflectionGroup(name, "affine", space, tuple(gens), tuple(labels), x0, horizon,
                               finite_part=finite, highest_root=theta, coroots=coroots, spec=spec)

    x0 = _chamber_interior(G, backend)
    group = ReflectionGroup(name, spec.geometry, space, tuple(gens), tuple(labels), x0, horizon, spec=spec)
    if group.is_finite:
        group._enumerate_layers(None)
    return group


def finite_roots(G: ReflectionGroup) -> list:
    if "_roots" not in G.__dict__:
        mats = [g.linear for g in G.generators[-G.rank:]]
        G.__dict__["_roots"] = _root_orbit(G.gram, mats, G.backend)
    return G.__dict__["_roots"]


def _warn_if_not_cocompact(G, backend) -> None:
    n = len(G)
    for i in range(n):
        for j in range(i + 1, n):
            c = G[i][j] / math.sqrt(float(G[i][i]) * float(G[j][j]))
            if c <= -1 + (backend.eps if not backend.exact else 0):
                warnings.warn(
                    f"walls {i + 1} and {j + 1} do not meet ([e_i, e_j] <= -1); group is not cocompact",
                    NonCocompactWarning, stacklevel=3)
                return
    # compact vertices: every principal submatrix of size n-1 is positive definite
    for k in range(n):
        idx = [i for i in range(n) if i != k]
        sub = tuple(tuple(G[i][j] for j in idx) for i in idx)
        if not _positive_definite(sub, backend):
            warnings.warn(f"vertex opposite wall {k + 1} is not compact; group is not cocompact",
                          NonCocompactWarning, stacklevel=3)
            return


def check_preserves_form(G: ReflectionGroup, w: GroupElement) -> bool:
    M = w.linear
    lhs = la.mat_mul(la.transpose(M), la.mat_mul(G.gram, M))
    if G.backend.exact:
        return lhs == G.gram
    tol = 10 * G.backend.eps * max(1.0, la.max_abs(x for r in lhs for x in r))
    return la.matrix_close(lhs, G.gram, tol)

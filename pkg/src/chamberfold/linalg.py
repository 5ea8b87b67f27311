"""Dense linear algebra and strict polyhedral feasibility over a scalar backend.

Matrices are tuples of row tuples, vectors are tuples.  All routines are pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .scalars import EXACT, Backend

Vector = tuple
Matrix = tuple


# -- elementary helpers -----------------------------------------------------


def vec(xs) -> Vector:
    return tuple(xs)


def mat(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int, backend: Backend = EXACT) -> Matrix:
    one, zero = backend.one(), backend.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(n: int, backend: Backend = EXACT) -> Vector:
    return (backend.zero(),) * n


def unit(n: int, i: int, backend: Backend = EXACT) -> Vector:
    return tuple(backend.one() if j == i else backend.zero() for j in range(n))


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), start=0 * x[0]) if x else 0


def add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def mat_vec(A: Matrix, x: Vector) -> Vector:
    return tuple(dot(row, x) for row in A)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    cols = transpose(B)
    return tuple(tuple(dot(row, c) for c in cols) for row in A)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(add(r, s) for r, s in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(sub(r, s) for r, s in zip(A, B))


def mat_scale(c, A: Matrix) -> Matrix:
    return tuple(scale(c, r) for r in A)


def columns(A: Matrix) -> tuple:
    return transpose(A)


def from_columns(cols) -> Matrix:
    return transpose(tuple(cols))


def max_abs(xs) -> float:
    return max((abs(x) for x in xs), default=0)


def matrix_close(A: Matrix, B: Matrix, tol: float) -> bool:
    return all(abs(a - b) <= tol for r, s in zip(A, B) for a, b in zip(r, s))


# -- elimination ------------------------------------------------------------


def _eliminate(rows: list[list], ncols: int, backend: Backend):
    """Reduced row echelon form in place, pivoting only in the first ``ncols`` columns.

    Float backend uses partial pivoting and rejects pivots with ``|p| <= eps``.
    Returns the pivot columns and the number of row swaps.
    """
    pivots = []
    swaps = 0
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        if backend.exact:
            p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        else:
            p = max(range(r, nrows), key=lambda i: abs(rows[i][c]))
            if abs(rows[p][c]) <= backend.eps:
                p = None
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            swaps += 1
        piv = rows[r][c]
        rows[r] = [a / piv for a in rows[r]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots, swaps


@dataclass(frozen=True)
class LinearSolveResult:
    """Solution set ``particular + span(kernel_basis)``; ``particular`` is None when inconsistent."""

    particular: Vector | None
    kernel_basis: tuple
    rank: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def rank_and_kernel(A: Matrix, backend: Backend = EXACT) -> LinearSolveResult:
    ncols = len(A[0]) if A else 0
    rows = [list(r) for r in A]
    pivots, _ = _eliminate(rows, ncols, backend)
    return LinearSolveResult(
        particular=zeros(ncols, backend),
        kernel_basis=_kernel_from_rref(rows, pivots, ncols, backend),
        rank=len(pivots),
    )


def _kernel_from_rref(rows, pivots, ncols, backend):
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [backend.zero()] * ncols
        x[f] = backend.one()
        for r, pc in enumerate(pivots):
            x[pc] = -rows[r][f]
        basis.append(tuple(x))
    return tuple(basis)


def rank(A: Matrix, backend: Backend = EXACT) -> int:
    if not A:
        return 0
    rows = [list(r) for r in A]
    pivots, _ = _eliminate(rows, len(A[0]), backend)
    return len(pivots)


def solve_affine_system(A: Matrix, b: Vector, backend: Backend = EXACT) -> LinearSolveResult:
    """Solve ``A x = b``.  Inconsistent systems return ``particular=None``.

    On the float backend a residual row counts as zero when it is within
    ``eps * max(1, |A|, |b|)``.
    """
    if len(A) != len(b):
        raise ValueError("row count of A differs from length of b")
    ncols = len(A[0]) if A else 0
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    pivots, _ = _eliminate(rows, ncols, backend)
    kernel = _kernel_from_rref(rows, pivots, ncols, backend)
    if backend.exact:
        ok = all(rows[i][ncols] == 0 for i in range(len(pivots), len(rows)))
    else:
        size = max(1.0, max((max_abs(r) for r in A), default=0.0), max_abs(b))
        ok = all(abs(rows[i][ncols]) <= backend.eps * size for i in range(len(pivots), len(rows)))
    if not ok:
        return LinearSolveResult(None, kernel, len(pivots))
    x = [backend.zero()] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return LinearSolveResult(tuple(x), kernel, len(pivots))


def det(A: Matrix, backend: Backend = EXACT):
    n = len(A)
    if n == 0:
        return backend.one()
    rows = [list(r) for r in A]
    # Plain elimination with sign tracking; no normalisation so the pivots multiply to det.
    d = backend.one()
    for c in range(n):
        if backend.exact:
            p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        else:
            p = max(range(c, n), key=lambda i: abs(rows[i][c]))
            if rows[p][c] == 0:
                p = None
        if p is None:
            return backend.zero()
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        piv = rows[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = rows[i][c] / piv
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def inverse(A: Matrix, backend: Backend = EXACT) -> Matrix:
    n = len(A)
    rows = [list(r) + list(e) for r, e in zip(A, identity(n, backend))]
    pivots, _ = _eliminate(rows, n, backend)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in rows)


def in_column_space(A: Matrix, b: Vector, backend: Backend = EXACT) -> bool:
    return solve_affine_system(A, b, backend).consistent


# -- bilinear forms ---------------------------------------------------------


@dataclass(frozen=True)
class BilinearSpace:
    """``dim``-dimensional space with Gram matrix ``gram`` of its coordinate basis."""

    dim: int
    gram: Matrix
    kind: str = "positive-definite"  # or "lorentzian"
    backend: Backend = EXACT

    def form(self, x: Vector, y: Vector):
        return dot(x, mat_vec(self.gram, y))

    def norm2(self, x: Vector):
        return self.form(x, x)


def form_eval(space: BilinearSpace, x: Vector, y: Vector):
    if len(x) != space.dim or len(y) != space.dim:
        raise ValueError("dimension mismatch")
    return space.form(x, y)


def leading_minors(G: Matrix, backend: Backend = EXACT) -> list:
    return [det(tuple(r[:k] for r in G[:k]), backend) for k in range(1, len(G) + 1)]


def inertia(G: Matrix, backend: Backend = EXACT) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix.

    Exact: symmetric Gaussian elimination (congruence), which preserves inertia.
    Float: eigenvalues from numpy with ``eps`` as the zero threshold.
    """
    n = len(G)
    if not backend.exact:
        import numpy as np

        ev = np.linalg.eigvalsh(np.array(G, dtype=float))
        tol = backend.eps * max(1.0, float(np.max(np.abs(ev))) if n else 1.0)
        return int(np.sum(ev > tol)), int(np.sum(ev < -tol)), int(np.sum(np.abs(ev) <= tol))
    M = [list(r) for r in G]
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if M[i][i] != 0), None)
        if k is None:
            # all remaining diagonal entries vanish; use an off-diagonal pair
            pair = next(((i, j) for i in idx for j in idx if i < j and M[i][j] != 0), None)
            if pair is None:
                zero += len(idx)
                break
            i, j = pair
            # replace row/col i by row/col i + row/col j: new diagonal 2 M[i][j] != 0
            for c in range(n):
                M[i][c] += M[j][c]
            for r in range(n):
                M[r][i] += M[r][j]
            k = i
        p = M[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(k)
        for i in idx:
            f = M[i][k] / p
            if f:
                for c in range(n):
                    M[i][c] -= f * M[k][c]
        for i in idx:
            M[k][i] = M[i][k] = 0
    return pos, neg, zero


# -- polyhedra --------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x  (op)  offset`` with op one of ``=``, ``>``, ``>=``."""

    coeffs: Vector
    offset: object = 0


@dataclass(frozen=True)
class PolyhedronSpec:
    dim: int
    equalities: tuple = ()
    strict: tuple = ()
    nonstrict: tuple = ()

    def __post_init__(self):
        for c in (*self.equalities, *self.strict, *self.nonstrict):
            if len(c.coeffs) != self.dim:
                raise ValueError("constraint dimension differs from ambient dimension")

    def contains(self, x: Vector, backend: Backend = EXACT) -> bool:
        sg = backend.sign
        return (
            all(sg(dot(c.coeffs, x) - c.offset) == 0 for c in self.equalities)
            and all(sg(dot(c.coeffs, x) - c.offset) > 0 for c in self.strict)
            and all(sg(dot(c.coeffs, x) - c.offset) >= 0 for c in self.nonstrict)
        )


@dataclass(frozen=True)
class AffineSubspace:
    point: Vector
    basis: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def at(self, coords) -> Vector:
        x = self.point
        for c, b in zip(coords, self.basis):
            x = add(x, scale(c, b))
        return x


@dataclass(frozen=True)
class SlackResult:
    """Outcome of the max-slack search.

    ``slack`` is the largest achievable minimum of the normalised strict slacks
    (capped at 1), or None when there are no strict constraints.
    """

    feasible: bool
    witness: Vector | None = None
    slack: object = None
    ambiguous: bool = False
    subspace: AffineSubspace | None = field(default=None, compare=False)


def _normalise(coeffs, offset, backend):
    m = max_abs(coeffs)
    if m == 0:
        return tuple(coeffs), offset
    if backend.exact:
        return tuple(a / m for a in coeffs), offset / m
    return tuple(a / m for a in coeffs), offset / m


def _pick(lo, hi):
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo
    if hi is not None:
        return hi
    return None


def _fourier_motzkin(rows, nvars, backend, maximise_first):
    """Solve ``rows`` (``(coeffs, rhs)`` meaning ``coeffs . z >= rhs``) by elimination.

    Variables are eliminated from the last to the first; back-substitution then
    picks variable 0 at its upper bound when ``maximise_first`` and every other
    variable at the midpoint of its feasible interval (finite endpoint when one
    side is unbounded, 0 when both are).  Returns the point or None.
    """
    zero = backend.zero()
    sign = backend.sign
    stages = []
    cur = _dedup(rows, backend)
    for j in range(nvars - 1, -1, -1):
        stages.append(cur)
        pos, neg, rest = [], [], []
        for a, r in cur:
            s = sign(a[j])
            (pos if s > 0 else neg if s < 0 else rest).append((a, r))
        new = [(a[:j], r) for a, r in rest]
        for ap, rp in pos:
            for an, rn in neg:
                lp, ln = ap[j], -an[j]
                coeffs = tuple(ln * x + lp * y for x, y in zip(ap[:j], an[:j]))
                new.append((coeffs, ln * rp + lp * rn))
        cur = []
        for a, r in _dedup(new, backend):
            if all(sign(x) == 0 for x in a):
                if sign(zero - r) < 0:
                    return None
                continue
            cur.append((a, r))
    stages.reverse()
    z = []
    for j, rows_j in enumerate(stages):
        lo = hi = None
        for a, r in rows_j:
            s = sign(a[j])
            if s == 0:
                continue
            bound = (r - dot(a[:j], z)) / a[j] if j else r / a[j]
            if s > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if j == 0 and maximise_first:
            val = hi
        else:
            val = _pick(lo, hi)
        z.append(zero if val is None else val)
    return tuple(z)


def _dedup(rows, backend):
    seen = set()
    out = []
    for a, r in rows:
        a, r = _normalise(a, r, backend)
        key = (a, r) if backend.exact else (tuple(round(x, 12) for x in a), round(r, 12))
        if key in seen:
            continue
        seen.add(key)
        out.append((a, r))
    return out


def max_slack(P: PolyhedronSpec, restrict_to: AffineSubspace | None = None,
              backend: Backend = EXACT) -> SlackResult:
    """Max-slack point of ``P`` inside ``restrict_to`` (whole space by default).

    Each inequality row is scaled to unit max-norm in the ambient coordinates, so
    the witness does not depend on positive row scaling.  The minimum strict slack
    is capped at 1, which also fixes unbounded directions.
    """
    n = P.dim
    if restrict_to is None:
        restrict_to = AffineSubspace(zeros(n, backend), tuple(unit(n, i, backend) for i in range(n)))
    sub_space = restrict_to
    if P.equalities:
        K = from_columns(sub_space.basis) if sub_space.basis else None
        eq_rows = []
        eq_rhs = []
        for c in P.equalities:
            eq_rows.append(tuple(dot(c.coeffs, b) for b in sub_space.basis))
            eq_rhs.append(c.offset - dot(c.coeffs, sub_space.point))
        k = len(sub_space.basis)
        if k == 0:
            if any(backend.sign(r) != 0 for r in eq_rhs):
                return SlackResult(False)
        else:
            sol = solve_affine_system(tuple(eq_rows), tuple(eq_rhs), backend)
            if not sol.consistent:
                return SlackResult(False)
            point = add(sub_space.point, mat_vec(K, sol.particular))
            basis = tuple(mat_vec(K, kv) for kv in sol.kernel_basis)
            sub_space = AffineSubspace(point, basis)
    k = sub_space.dim
    has_t = bool(P.strict)
    rows = []
    for c in P.strict:
        a, off = _normalise(c.coeffs, c.offset, backend)
        coeffs = tuple(dot(a, b) for b in sub_space.basis)
        rows.append(((-backend.one(),) + coeffs, off - dot(a, sub_space.point)))
    for c in P.nonstrict:
        a, off = _normalise(c.coeffs, c.offset, backend)
        coeffs = tuple(dot(a, b) for b in sub_space.basis)
        lead = (backend.zero(),) if has_t else ()
        rows.append((lead + coeffs, off - dot(a, sub_space.point)))
    if has_t:
        rows.append(((-backend.one(),) + zeros(k, backend), -backend.one()))
    nvars = k + (1 if has_t else 0)
    if nvars == 0:
        ok = all(backend.sign(-r) >= 0 for _, r in rows)
        return SlackResult(ok, sub_space.point if ok else None, None, subspace=sub_space)
    z = _fourier_motzkin(rows, nvars, backend, maximise_first=has_t)
    if z is None:
        return SlackResult(False, subspace=sub_space)
    coords = z[1:] if has_t else z
    witness = sub_space.at(coords)
    if not has_t:
        return SlackResult(True, witness, None, subspace=sub_space)
    t = z[0]
    s = backend.sign(t)
    return SlackResult(s > 0, witness if s > 0 else None, t, ambiguous=(s == 0 and not backend.exact),
                       subspace=sub_space)


def polyhedron_feasible(P: PolyhedronSpec, restrict_to: AffineSubspace | None = None,
                        backend: Backend = EXACT) -> Vector | None:
    """Strictly interior max-slack witness, or None when infeasible."""
    res = max_slack(P, restrict_to, backend)
    return res.witness if res.feasible else None


def cone_dimension(rows: Sequence[Vector], dim: int, backend: Backend = EXACT) -> int:
    """Dimension of the cone ``{x : a . x >= 0 for a in rows}``.

    A row is an implicit equality iff it cannot be made strictly positive while
    the others stay non-negative; the dimension is ``dim`` minus the rank of the
    implicit equalities.
    """
    implicit = implicit_equalities(rows, dim, backend)
    if not implicit:
        return dim
    return dim - rank(tuple(implicit), backend)


def implicit_equalities(rows: Sequence[Vector], dim: int, backend: Backend = EXACT) -> list:
    out = []
    for i, a in enumerate(rows):
        if all(backend.is_zero(x) for x in a):
            continue
        P = PolyhedronSpec(
            dim,
            strict=(Constraint(tuple(a), backend.zero()),),
            nonstrict=tuple(Constraint(tuple(b), backend.zero()) for j, b in enumerate(rows) if j != i),
        )
        if not max_slack(P, None, backend).feasible:
            out.append(tuple(a))
    return out

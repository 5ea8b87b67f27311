"""Randomised and exhaustive verification suites behind ``chamberfold verify``.

Each suite returns a JSON-ready report::

    {"suite": ..., "group": ..., "checked": n, "violations": [...], "ambiguous": [...]}
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import linalg as la
from .chambers import (
    alcove_vertices,
    lightcone_classify,
    lorentz_norm_increment,
    membership_status,
)
from .coxeter import (
    GroupElement,
    ReflectionGroup,
    canonical_word,
    is_regular,
    one_minus,
    rank_one_minus,
    reflection_in_vector,
)
from .scalars import format_scalar
from .solver import _lattice_candidates
from .structure import (
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

SUITES = ("partition", "lemma1", "lemma3", "lemma4", "kostant", "adjacency", "detsum", "theorem3-signs")

SUITE_GEOMETRIES = {
    "partition": ("spherical", "affine", "hyperbolic"),
    "lemma1": ("spherical", "affine", "hyperbolic"),
    "lemma3": ("spherical", "hyperbolic"),
    "lemma4": ("spherical",),
    "kostant": ("spherical",),
    "adjacency": ("spherical",),
    "detsum": ("spherical",),
    "theorem3-signs": ("hyperbolic",),
}

HYPERBOLIC_SAMPLE_LENGTH = 8


class UnsupportedSuite(ValueError):
    pass


def _report(suite, G, checked, violations, ambiguous, **extra):
    rep = {
        "suite": suite,
        "group": G.name,
        "checked": checked,
        "violations": violations,
        "ambiguous": ambiguous,
    }
    rep.update(extra)
    return rep


def _fmt(v):
    return [format_scalar(x) for x in v]


# -- random sampling ------------------------------------------------------------------


def random_weight(rng: random.Random, backend, den: int = 12, allow_zero: bool = False):
    if backend.exact:
        lo = 0 if allow_zero else 1
        return Fraction(rng.randint(lo, 4 * den), rng.randint(1, den))
    if allow_zero and rng.random() < 0.25:
        return 0.0
    return rng.uniform(0.05, 2.0)


def random_chamber_point(G: ReflectionGroup, rng: random.Random, interior: bool = True):
    """``sum lambda_i pi_i``; on the boundary some ``lambda_i`` are exactly zero."""
    coweights = _coweights(G)
    b = G.backend
    n = G.rank
    lam = [random_weight(rng, b) for _ in range(n)]
    if not interior:
        k = rng.randint(1, n - 1) if n > 1 else 0
        for i in rng.sample(range(n), k):
            lam[i] = b.zero()
    x = la.zeros(n, b)
    for c, p in zip(lam, coweights):
        x = la.add(x, la.scale(c, p))
    return x


def random_alcove_point(G: ReflectionGroup, rng: random.Random, interior: bool = True):
    verts = alcove_vertices(G)
    b = G.backend
    weights = [random_weight(rng, b) for _ in verts]
    if not interior:
        k = rng.randint(1, len(verts) - 1)
        for i in rng.sample(range(len(verts)), k):
            weights[i] = b.zero()
    total = sum(weights)
    x = la.zeros(G.rank, b)
    for c, p in zip(weights, verts):
        x = la.add(x, la.scale(c / total, p))
    return x


def _coweights(G):
    if "_coweights" not in G.__dict__:
        Ginv = G._gram_inverse
        G.__dict__["_coweights"] = [tuple(Ginv[r][i] for r in range(G.rank)) for i in range(G.rank)]
    return G.__dict__["_coweights"]


def random_dual_cone_vector(G, rng, den: int = 12):
    b = G.backend
    return tuple(random_weight(rng, b, den, allow_zero=True) for _ in range(G.rank))


def _sample_elements(G, max_len=HYPERBOLIC_SAMPLE_LENGTH):
    if G.is_finite:
        return G.elements()
    return G.elements(max_len)


def _fixes(G, w, x) -> bool:
    y = w(x)
    return all(G.backend.is_zero(a - c) for a, c in zip(y, x))


# -- suites -------------------------------------------------------------------


def verify_partition(G: ReflectionGroup, samples: int = 1000, seed: int = 0, box: int = 4) -> dict:
    """Exactly one tile per sampled ``u``."""
    rng = random.Random(seed)
    violations, ambiguous = [], []
    b = G.backend
    if G.geometry == "spherical":
        elements = G.elements()
        for _ in range(samples):
            u = random_dual_cone_vector(G, rng)
            hits, amb = _count(G, elements, u, "one_minus")
            if amb:
                ambiguous.append({"u": _fmt(u)})
            elif len(hits) != 1:
                violations.append({"u": _fmt(u), "members": [list(w.word) for w in hits]})
    elif G.geometry == "affine":
        verts = alcove_vertices(G)
        diam = max(la.max_abs(la.sub(p, q)) for p in verts for q in verts)
        half = Fraction(box) * diam / 2 if b.exact else box * diam / 2
        for _ in range(samples):
            if b.exact:
                u = tuple(half * Fraction(rng.randint(-1000, 1000), 1000) for _ in range(G.rank))
            else:
                u = tuple(half * rng.uniform(-1, 1) for _ in range(G.rank))
            hits = []
            ident = la.identity(G.rank, b)
            zero = la.zeros(G.rank, b)
            for A in G.finite_part.elements():
                for t in _lattice_candidates(G, ident, zero, A.linear, u, 0):
                    w = GroupElement(A.linear, t)
                    status, _ = membership_status(G, w, u, "one_minus")
                    if status == "member":
                        hits.append(w)
            if len(hits) != 1:
                violations.append({"u": _fmt(u), "members": len(hits)})
    else:
        elements = G.elements(HYPERBOLIC_SAMPLE_LENGTH + 2)
        pool = [w for w in G.elements(HYPERBOLIC_SAMPLE_LENGTH)]
        for _ in range(samples):
            w0 = rng.choice(pool)
            v0 = random_chamber_point(G, rng)
            u = la.mat_vec(one_minus(G, w0), v0)
            hits, amb = _count(G, elements, u, "one_minus")
            if len(hits) != 1 or hits[0].word != w0.word:
                (ambiguous if amb else violations).append(
                    {"w": list(w0.word), "members": [list(w.word) for w in hits]})
    return _report("partition", G, samples, violations, ambiguous)


def _count(G, elements, u, variant):
    hits, amb = [], False
    for w in elements:
        status, _ = membership_status(G, w, u, variant)
        if status == "member":
            hits.append(w)
        elif status == "ambiguous":
            amb = True
    return hits, amb


def verify_distance_growth(G: ReflectionGroup, samples: int = 10_000, seed: int = 0) -> dict:
    """Moving a chamber point by ``w`` never brings it closer to an interior point."""
    rng = random.Random(seed)
    b = G.backend
    elements = G.elements(HYPERBOLIC_SAMPLE_LENGTH) if not G.is_finite else G.elements()
    violations, ambiguous = [], []
    for _ in range(samples):
        w = rng.choice(elements)
        if G.geometry == "affine":
            x0 = random_alcove_point(G, rng)
            x = random_alcove_point(G, rng, interior=rng.random() < 0.3)
            d_w = G.space.norm2(la.sub(x0, w(x)))
            d_1 = G.space.norm2(la.sub(x0, x))
            diff = d_w - d_1  # must be >= 0, > 0 unless w fixes x
        else:
            x0 = random_chamber_point(G, rng)
            x = random_chamber_point(G, rng, interior=rng.random() < 0.3)
            # same norms on both sides, so the cos / ch comparison is a comparison of forms
            diff = G.form(x0, x) - G.form(x0, w(x))
        s = b.sign(diff)
        fixed = _fixes(G, w, x) if b.exact else _in_stabilizer(G, w, x)
        if s < 0 or (s == 0 and not fixed):
            if s == 0 and not b.exact:
                ambiguous.append({"w": list(w.word), "diff": float(diff)})
            else:
                violations.append({"w": list(w.word), "x": _fmt(x), "diff": format_scalar(diff)})
        elif s > 0 and fixed:
            violations.append({"w": list(w.word), "x": _fmt(x), "reason": "w fixes x but distance grew"})
    return _report("lemma1", G, samples, violations, ambiguous)


def _in_stabilizer(G, w, x):
    from .coxeter import stabilizer_labels

    labels = stabilizer_labels(G, x)
    return set(canonical_word(G, w)) <= labels


def verify_cone_inclusion(G: ReflectionGroup, samples: int = 10_000, seed: int = 0) -> dict:
    """``(x, (1 - w) x0) >= 0`` for ``x0`` in the open chamber and ``x`` in the chamber."""
    rng = random.Random(seed)
    b = G.backend
    elements = _sample_elements(G)
    violations, ambiguous = [], []
    for _ in range(samples):
        w = rng.choice(elements)
        x0 = random_chamber_point(G, rng)
        x = random_chamber_point(G, rng, interior=rng.random() < 0.5)
        val = G.form(x, la.mat_vec(one_minus(G, w), x0))
        if b.sign(val) < 0:
            violations.append({"w": list(w.word), "value": format_scalar(val)})
    return _report("lemma3", G, samples, violations, ambiguous)


def verify_v_identities(G: ReflectionGroup) -> dict:
    """Identities of ``v_u`` for every regular ``w`` and all positive roots ``u, r``.

    Checked: ``B(v_u, r) + B(v_r, u) = -B(u, r)``; ``B(v_u, u) = -B(u, u)/2``;
    ``w s_u v_u = v_u``; ``v_u`` is orthogonal to ``(1 - w) H_u``;
    ``ker(1 - w s_u) = span(v_u)``; ``B(v_e, (1 - w) pi_e) < 0`` for simple ``e``.
    """
    b = G.backend
    roots = enumerate_roots(G).roots
    coweights = fundamental_coweights(G)
    violations = []
    checked = 0
    n = G.rank
    for w in regular_elements(G):
        vs = {u: v_vector(G, w, u) for u in roots}
        M = one_minus(G, w)
        for u in roots:
            v = vs[u]
            checked += 1
            for r in roots:
                lhs = G.form(v, r) + G.form(vs[r], u)
                if not b.is_zero(lhs + G.form(u, r)):
                    violations.append({"w": list(w.word), "item": "symmetry", "u": _fmt(u), "r": _fmt(r)})
            if not b.is_zero(G.form(v, u) + G.form(u, u) / 2):
                violations.append({"w": list(w.word), "item": "self-pairing", "u": _fmt(u)})
            su = reflection_in_vector(G, u)
            wsu = G.mul(w, su)
            if any(not b.is_zero(a - c) for a, c in zip(wsu.apply_linear(v), v)):
                violations.append({"w": list(w.word), "item": "fixed-by-w-s_u", "u": _fmt(u)})
            hyper = la.rank_and_kernel((la.mat_vec(G.gram, u),), b).kernel_basis
            for x in hyper:
                if not b.is_zero(G.form(v, la.mat_vec(M, x))):
                    violations.append({"w": list(w.word), "item": "orthogonal-to-image", "u": _fmt(u)})
                    break
            ker = la.rank_and_kernel(one_minus(G, wsu), b)
            in_ker = all(b.is_zero(c) for c in la.mat_vec(one_minus(G, wsu), v))
            if len(ker.kernel_basis) != 1 or not in_ker or all(b.is_zero(c) for c in v):
                violations.append({"w": list(w.word), "item": "kernel-span", "u": _fmt(u)})
        for i in range(n):
            e = G.simple_normal(i + 1)
            val = G.form(vs[e], la.mat_vec(M, coweights[i]))
            if b.sign(val) >= 0:
                violations.append({"w": list(w.word), "item": "coweight-sign", "e": i + 1, "value": format_scalar(val)})
    return _report("lemma4", G, checked, violations, [])


def verify_kostant(G: ReflectionGroup) -> dict:
    violations = []
    elements = G.elements()
    for w in elements:
        d = kostant_decompose(G, w)
        r = rank_one_minus(G, w)
        oracle = minimal_length_oracle(G, w)
        ok = (len(d) == r == oracle and linearly_independent(G, d.roots)
              and G.same(multiply_reflections(G, d.roots), w))
        if not ok:
            violations.append({"w": list(w.word), "length": len(d), "rank": r, "oracle": oracle})
    return _report("kostant", G, len(elements), violations, [])


def verify_adjacency(G: ReflectionGroup, lower: bool = True) -> dict:
    """Criterion vs geometric oracle on all regular pairs, then lower-dimensional tiles."""
    reg = regular_elements(G)
    violations = []
    checked = 0
    adjacent_pairs = 0
    for w in reg:
        for w2 in reg:
            checked += 1
            crit = adjacency_full(G, w, w2).adjacent
            geo = geometric_adjacency_oracle(G, w, w2)
            adjacent_pairs += geo
            if crit != geo:
                violations.append({"w": list(w.word), "w2": list(w2.word), "criterion": crit, "geometric": geo})
    lower_checked = lower_adjacent = 0
    if lower:
        for w in reg:
            for wl in G.elements():
                if is_regular(G, wl):
                    continue
                res = adjacency_lower(G, wl, w)
                lower_checked += 1
                lower_adjacent += res.adjacent
                if not res.agrees:
                    violations.append({"w": list(w.word), "w_low": list(wl.word), "criterion": res.adjacent,
                                       "geometric": res.geometric, "kind": "lower"})
                if res.adjacent and rank_one_minus(G, wl) + rank_one_minus(G, res.w_tilde) != G.rank:
                    violations.append({"w": list(w.word), "w_low": list(wl.word), "kind": "rank-condition"})
    return _report("adjacency", G, checked + lower_checked, violations, [], regular=len(reg),
                   adjacent_pairs=adjacent_pairs, lower_pairs=lower_checked, lower_adjacent=lower_adjacent)


def verify_detsum(G: ReflectionGroup) -> dict:
    """``sum det(1 - w) = |W|``, also twisted by ``h = lambda R`` for ``R`` in ``W``."""
    b = G.backend
    order = len(G.elements())
    total = det_sum(G)
    violations = []
    if total != order:
        violations.append({"h": "identity", "value": format_scalar(total)})
    twisted = 0
    lambdas = (b.one(), b.one() / 2)
    for lam in lambdas:
        for R in G.elements():
            twisted += 1
            val = det_sum(G, la.mat_scale(lam, R.linear))
            if not b.is_zero(val - order):
                violations.append({"lambda": format_scalar(lam), "R": list(R.word), "value": format_scalar(val)})
    return _report("detsum", G, order, violations, [], value=format_scalar(total), twisted_checked=twisted)


def verify_norm_recursion(G: ReflectionGroup, max_len: int = HYPERBOLIC_SAMPLE_LENGTH,
                          margin: float = 1e-9, samples: int = 3, seed: int = 0) -> dict:
    """Norm recursion along ``w = s_e w'`` and the sign of its increment."""
    rng = random.Random(seed)
    points = [G.interior_point] + [random_chamber_point(G, rng) for _ in range(samples - 1)]
    violations = []
    n = G.rank
    b = G.backend
    minus_one = la.mat_scale(-b.one(), la.identity(n, b))
    checked = 0
    for w in G.elements(max_len):
        if not w.word:
            continue
        e, rest = w.word[0], w.word[1:]
        wp = G.from_word(rest)
        for x in points:
            checked += 1
            inc = lorentz_norm_increment(G, wp, e, x)
            p_w = la.mat_vec(one_minus(G, w), x)
            p_wp = la.mat_vec(one_minus(G, wp), x)
            m_w = la.mat_vec(la.mat_sub(minus_one, w.linear), x)
            m_wp = la.mat_vec(la.mat_sub(minus_one, wp.linear), x)
            scale = max(1.0, abs(float(G.form(p_w, p_w))), abs(float(G.form(m_w, m_w))))
            tol = 1e3 * (b.eps if not b.exact else 0) * scale
            d_plus = G.form(p_w, p_w) - G.form(p_wp, p_wp) - inc
            d_minus = G.form(m_w, m_w) - G.form(m_wp, m_wp) + inc
            bad = []
            if abs(d_plus) > tol:
                bad.append("plus-recursion")
            if abs(d_minus) > tol:
                bad.append("minus-recursion")
            if not inc > margin:
                bad.append("increment-sign")
            if lightcone_classify(G, m_w) in ("K_plus_interior", "K_plus_boundary"):
                bad.append("minus-image-in-K_plus")
            if bad:
                violations.append({"w": list(w.word), "failed": bad, "increment": float(inc)})
    return _report("theorem3-signs", G, checked, violations, [])


def run_suite(G: ReflectionGroup, suite: str, samples: int | None = None, seed: int = 0) -> dict:
    if suite not in SUITES:
        raise UnsupportedSuite(f"unknown suite {suite!r}")
    if G.geometry not in SUITE_GEOMETRIES[suite]:
        raise UnsupportedSuite(f"suite {suite!r} does not apply to {G.geometry} groups")
    if suite == "partition":
        return verify_partition(G, samples or 1000, seed)
    if suite == "lemma1":
        return verify_distance_growth(G, samples or 10_000, seed)
    if suite == "lemma3":
        return verify_cone_inclusion(G, samples or 10_000, seed)
    if suite == "lemma4":
        return verify_v_identities(G)
    if suite == "kostant":
        return verify_kostant(G)
    if suite == "adjacency":
        return verify_adjacency(G)
    if suite == "detsum":
        return verify_detsum(G)
    return verify_norm_recursion(G, seed=seed)


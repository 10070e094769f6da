"""Eventual convex-hull structure of the lattice point sets.

Vertices of conv(L(t)) eventually move along fixed polynomial vectors,
one family per residue class of the parameter.  This module decides
affine independence and convex-combination membership for polynomial
vectors symbolically, extracts candidate vertices of reduced programs
from constraint bases, and infers the vertex families by exact sampling
with held-out validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from . import oracle
from .eqp import InferenceConfig, NoFit
from .model import Form, PILP, general_rows
from .transforms import DegenerateProgramError
from .poly import (
    BOTTOM, ONE, Poly, RationalFunction, ZERO, eventual_sign,
    eventual_sign_threshold, interpolate, poly_from_json, poly_to_json,
)

PolyVector = tuple  # length-n tuple of Poly


def _as_vector(v) -> tuple:
    return tuple(x if isinstance(x, Poly) else Poly((x,)) for x in v)


def _poly_det(rows) -> Poly:
    """Exact determinant of a square matrix of Poly, by expansion with
    memoization on column masks.  Fine at the sizes reachable here."""
    n = len(rows)
    if n == 0:
        return ONE
    memo: dict = {}

    def rec(r: int, mask: int) -> Poly:
        if r == n:
            return ONE
        key = mask
        if key in memo:
            return memo[key]
        acc = ZERO
        sign = 1
        for c in range(n):
            bit = 1 << c
            if mask & bit:
                continue
            entry = rows[r][c]
            if not entry.is_zero:
                term = entry * rec(r + 1, mask | bit)
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, 0)


def _difference_matrix(vs) -> list:
    base = vs[0]
    return [[vh[j] - base[j] for j in range(len(base))] for vh in vs[1:]]


class IndependenceResult(NamedTuple):
    independent: bool
    threshold: int
    witness_columns: tuple | None   # columns of the nonzero minor


def affinely_independent_eventually(vs) -> IndependenceResult:
    """Whether polynomial points become affinely independent for large t.

    True iff some maximal minor of the difference matrix is a nonzero
    polynomial; the threshold makes that minor nonzero pointwise, so the
    evaluated points are affinely independent for every larger t.
    """
    vs = [_as_vector(v) for v in vs]
    if not vs:
        raise ValueError("need at least one vector")
    k = len(vs) - 1
    if k == 0:
        return IndependenceResult(True, 0, ())
    n = len(vs[0])
    if k > n:
        return IndependenceResult(False, 0, None)
    x = _difference_matrix(vs)
    for cols in combinations(range(n), k):
        det = _poly_det([[row[c] for c in cols] for row in x])
        if not det.is_zero:
            return IndependenceResult(
                True, eventual_sign_threshold(det), cols)
    return IndependenceResult(False, 0, None)


class CombinationResult(NamedTuple):
    member: bool
    coefficients: tuple | None      # RationalFunction per hull vector
    threshold: int


def convex_combination_eventually(w, vs) -> CombinationResult:
    """Whether w(t) eventually lies in the convex hull of vs.

    Requires vs eventually affinely independent.  If adjoining w keeps
    the set independent, w leaves the affine span and the answer is no.
    Otherwise the affine coefficients are unique rational functions,
    computed by Cramer's rule on an invertible minor and re-verified
    against the full system; membership holds iff every coefficient is
    eventually in [0, 1].
    """
    w = _as_vector(w)
    vs = [_as_vector(v) for v in vs]
    ind = affinely_independent_eventually(vs)
    if not ind.independent:
        raise ValueError("hull vectors must be eventually affinely independent")
    joined = affinely_independent_eventually(vs + [w])
    if joined.independent:
        return CombinationResult(False, None, joined.threshold)
    k = len(vs) - 1
    diff = [w[j] - vs[0][j] for j in range(len(w))]
    if k == 0:
        # single hull point: membership means w == vs[0], and joined
        # independence already ruled that out unless they are equal
        return CombinationResult(True, (RationalFunction.of(1),), 0)
    cols = ind.witness_columns
    m = [[vs[1 + h][c] - vs[0][c] for h in range(k)] for c in cols]
    det = _poly_det(m)
    threshold = eventual_sign_threshold(det)
    coeffs = []
    for h in range(k):
        mh = [[diff[c] if hh == h else m[ci][hh] for hh in range(k)]
              for ci, c in enumerate(cols)]
        coeffs.append(RationalFunction(_poly_det(mh), det))
    x = _difference_matrix(vs)
    for j in range(len(w)):
        acc = RationalFunction.of(0)
        for h in range(k):
            acc = acc + coeffs[h] * x[h][j]
        if acc != RationalFunction.of(diff[j]):
            raise AssertionError(
                "affine system inconsistent despite dependent adjunction")
    total = RationalFunction.of(0)
    for ch in coeffs:
        total = total + ch
    c0 = RationalFunction.of(1) - total
    coeffs = [c0, *coeffs]
    member = True
    for ch in coeffs:
        threshold = max(threshold, ch.sign_threshold(),
                        (ch - RationalFunction.of(1)).sign_threshold())
        if ch.eventual_sign() < 0 or (ch - RationalFunction.of(1)).eventual_sign() > 0:
            member = False
    if not member:
        return CombinationResult(False, tuple(coeffs), threshold)
    return CombinationResult(True, tuple(coeffs), threshold)


class HullVertexResult(NamedTuple):
    indices: tuple
    threshold: int


def eventual_hull_vertices(vs) -> HullVertexResult:
    """Indices of the vectors that are vertices of the hull for large t.

    A vector is eventually a non-vertex iff it eventually lies in a
    simplex spanned by at most n + 1 of the others; subsets are tried in
    increasing size.  The threshold joins every decision made, so past it
    the evaluated vertex set is exactly the returned index set.
    """
    vs = [_as_vector(v) for v in vs]
    if len(set(vs)) != len(vs):
        raise ValueError("vectors must be pairwise distinct")
    n = len(vs[0]) if vs else 0
    threshold = 0
    # distinctness of evaluations past the threshold
    for a, b in combinations(range(len(vs)), 2):
        d = [vs[a][j] - vs[b][j] for j in range(n)]
        nz = next(p for p in d if not p.is_zero)
        threshold = max(threshold, eventual_sign_threshold(nz))
    kept = []
    for i, w in enumerate(vs):
        others = [vs[h] for h in range(len(vs)) if h != i]
        vertex = True
        for size in range(1, min(n + 1, len(others)) + 1):
            for subset in combinations(others, size):
                ind = affinely_independent_eventually(list(subset))
                threshold = max(threshold, ind.threshold)
                if not ind.independent:
                    continue
                comb = convex_combination_eventually(w, list(subset))
                threshold = max(threshold, comb.threshold)
                if comb.member:
                    vertex = False
                    break
            if not vertex:
                break
        if vertex:
            kept.append(i)
    return HullVertexResult(tuple(kept), threshold)


class VertexCandidate(NamedTuple):
    vector: tuple           # Poly per coordinate, degree <= 1
    vertex: bool            # satisfies every inequality eventually
    threshold: int


def _solve_constant_square(m, rhs):
    """Solve m x = rhs for constant integer m and Poly rhs, exactly.
    Returns None if m is singular."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] for i in range(n)]
    b = [rhs[i] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] = b[col].scale(inv)
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
                b[r] = b[r] - b[col].scale(f)
    return b


def candidate_vertices_reduced(p: PILP):
    """Affine vertex candidates v1*t + v2 of the relaxation of a reduced
    program, each flagged as eventual vertex or not.

    Candidates come from full-rank n x n subsets of the constraint
    normals (constraint rows and nonnegativity rows together); the flag
    checks every inequality eventually, with a per-candidate threshold.
    """
    if p.form is not Form.REDUCED_CANONICAL:
        raise ValueError("candidate enumeration needs reduced canonical form")
    rows = general_rows(p)
    normals = [tuple(a.coeff(0) for a in row) for row, _ in rows]
    out = []
    seen = set()
    found_base = False
    for subset in combinations(range(len(rows)), p.n):
        m = [normals[i] for i in subset]
        x = _solve_constant_square(m, [rows[i][1] for i in subset])
        if x is None:
            continue
        found_base = True
        key = tuple(x)
        if key in seen:
            continue
        seen.add(key)
        vertex = True
        threshold = 0
        for (row, rhs) in rows:
            slack = rhs
            for a, xi in zip(row, x):
                slack = slack - xi.scale(a.coeff(0))
            threshold = max(threshold, eventual_sign_threshold(slack))
            if eventual_sign(slack) < 0:
                vertex = False
        out.append(VertexCandidate(tuple(x), vertex, threshold))
    if not found_base:
        raise DegenerateProgramError(
            "no full-rank constraint basis: relaxation has no vertex")
    return out


@dataclass(frozen=True)
class ParametricVertexFamily:
    """Vertices of conv(L(t)) per residue class, valid past the threshold.

    classes[j] lists vertex vectors (Poly per coordinate) for t = j mod
    period; evaluating class j at such a t > threshold gives exactly the
    vertex set, with no repeats.
    """

    period: int
    threshold: int
    classes: tuple   # per class: tuple of vectors, vector = tuple of Poly


def infer_hull_structure(p: PILP, cfg: InferenceConfig | None = None):
    """Fit the eventual vertex structure of conv(L(t)), or NoFit.

    For each period and rising threshold, per residue class: sample exact
    vertex sets, require a constant vertex count, match vertices across
    samples by lexicographic rank, interpolate each coordinate, then
    demand exact vertex-set equality on held-out samples just past the
    interpolation window.  A final symbolic pass drops vectors that stop
    being vertices for very large t.
    """
    cfg = cfg or InferenceConfig()
    cache: dict[int, list] = {}

    def vertex_set(t: int):
        if t not in cache:
            pts = oracle.points_at(p, t)
            cache[t] = sorted(pts[i] for i in oracle.hull_vertices(pts))
        return cache[t]

    npts = cfg.deg_max + 1
    tried = []
    for d in range(1, cfg.d_max + 1):
        n_thr = cfg.t_start
        while n_thr + d * (npts + cfg.validate_count) <= cfg.t_cap:
            fit = _try_hull_fit(vertex_set, p.n, d, n_thr, cfg)
            if isinstance(fit, ParametricVertexFamily):
                return fit
            tried.append((d, n_thr, fit))
            n_thr *= 2
    return NoFit(
        f"no vertex family of period <= {cfg.d_max} with affine-degree "
        f"<= {cfg.deg_max} coordinates validates within t <= {cfg.t_cap}",
        tuple(tried))


def _try_hull_fit(vertex_set, n: int, d: int, n_thr: int,
                  cfg: InferenceConfig):
    npts = cfg.deg_max + 1
    classes = []
    threshold = n_thr
    for j in range(d):
        base = n_thr + 1 + ((j - (n_thr + 1)) % d)
        ts = [base + i * d for i in range(npts)]
        sets = [vertex_set(t) for t in ts]
        counts = {len(s) for s in sets}
        if len(counts) != 1:
            return f"class {j}: vertex count not settled {sorted(counts)}"
        count = counts.pop()
        vectors = []
        for rank in range(count):
            vec = tuple(
                interpolate([(t, s[rank][coord])
                             for t, s in zip(ts, sets)])
                for coord in range(n))
            vectors.append(vec)
        held = [ts[-1] + (i + 1) * d for i in range(cfg.validate_count)]
        if held and held[-1] > cfg.t_cap:
            return f"class {j}: validation budget exhausted"
        for tv in held:
            predicted = sorted(tuple(c(tv) for c in vec) for vec in vectors)
            if predicted != [tuple(v) for v in vertex_set(tv)]:
                return f"class {j}: held-out t={tv} vertex set mismatch"
        if vectors:
            keep = eventual_hull_vertices(vectors)
            threshold = max(threshold, keep.threshold)
            vectors = [vectors[i] for i in keep.indices]
        classes.append(tuple(vectors))
    return ParametricVertexFamily(d, threshold, tuple(classes))


# ---------------------------------------------------------------------------
# Serialization


def family_to_json(f: ParametricVertexFamily) -> dict:
    return {
        "period": f.period,
        "threshold": f.threshold,
        "classes": [[[poly_to_json(c) for c in vec] for vec in cls]
                    for cls in f.classes],
    }


def family_from_json(d: dict) -> ParametricVertexFamily:
    return ParametricVertexFamily(
        d["period"], d["threshold"],
        tuple(tuple(tuple(poly_from_json(c) for c in vec) for vec in cls)
              for cls in d["classes"]))


__all__ = [
    "CombinationResult", "HullVertexResult", "IndependenceResult",
    "ParametricVertexFamily", "VertexCandidate",
    "affinely_independent_eventually", "candidate_vertices_reduced",
    "convex_combination_eventually", "eventual_hull_vertices",
    "family_from_json", "family_to_json", "infer_hull_structure",
]

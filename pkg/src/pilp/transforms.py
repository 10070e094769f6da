"""Structure-preserving rewrites between program forms.

Each construction here rewrites a program into one or more programs of a
more restricted form together with explicit bookkeeping: an affine map
carrying solutions back, the polynomial by which objective values shift,
and an integer threshold past which the rewrite is faithful.  Composing
them walks any program down to parameter-free questions:

  general --translate--> canonical --slack--> standard
      --digit split--> reduced canonical parts
      --hyperplane layers--> pinned programs --projection--> one
      variable fewer, and so on down to zero variables.

The digit split and the projection may declare a residue class: their
bookkeeping is only claimed for t in that class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, isqrt, lcm
from typing import NamedTuple

from .model import (
    Form, InvalidProgramError, PILP, coordinate_bound_exponent, general_rows,
)
from .poly import (
    Poly, ZERO, ONE, coeffs_max, eventual_sign, eventual_sign_threshold,
    poly_to_json,
)


class DegenerateProgramError(ValueError):
    """The rewrite is not defined for this degenerate input."""


@dataclass(frozen=True)
class AffineParamMap:
    """x = matrix(t) . y + offset(t), entries polynomial in t.

    ``residue = (p, q)`` restricts the claim (and integrality of the
    offset) to parameters t == p (mod q); None means every t.
    """

    matrix: tuple    # target_dim rows, source_dim columns, Poly entries
    offset: tuple    # target_dim Polys, possibly with rational coefficients
    residue: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(
            tuple(e if isinstance(e, Poly) else Poly((e,)) for e in row)
            for row in self.matrix))
        object.__setattr__(self, "offset", tuple(
            e if isinstance(e, Poly) else Poly((e,)) for e in self.offset))

    def accepts(self, t: int) -> bool:
        return self.residue is None or t % self.residue[1] == self.residue[0]

    def apply(self, t: int, y) -> tuple:
        """Image of the integer point y at parameter t; always integral."""
        if not self.accepts(t):
            raise ValueError(f"map not valid at t={t}: class {self.residue}")
        out = []
        for row, off in zip(self.matrix, self.offset):
            v = Fraction(off(t)) + sum(
                Fraction(e(t)) * yj for e, yj in zip(row, y))
            if v.denominator != 1:
                raise ValueError(f"non-integral image coordinate {v} at t={t}")
            out.append(int(v))
        return tuple(out)


# ---------------------------------------------------------------------------
# Canonical -> standard via slack variables


class SlackResult(NamedTuple):
    pilp: PILP            # standard form in n + m variables
    embed: AffineParamMap  # x  |->  (x, b(t) - A(t) x)


def canonical_to_standard_slack(p: PILP) -> SlackResult:
    """Append slack coordinates to turn Ax <= b, x >= 0 into equalities.

    Lattice points correspond bijectively for every t, and the objective
    (extended by zeros) takes identical values, so value functions agree.
    """
    if not p.form.has_nonneg or p.form.is_equality:
        raise InvalidProgramError("slack rewrite expects canonical form")
    n, m = p.n, p.m
    A2 = tuple(
        row + tuple(ONE if j == i else ZERO for j in range(m))
        for i, row in enumerate(p.A))
    std = PILP(Form.STANDARD, n + m, m, A2, p.b, p.c + (ZERO,) * m,
               bounded=p.bounded)
    matrix = [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    matrix += [tuple(-e for e in row) for row in p.A]
    embed = AffineParamMap(tuple(matrix), (ZERO,) * n + tuple(p.b))
    return SlackResult(std, embed)


# ---------------------------------------------------------------------------
# General -> canonical via translation by (t^r, ..., t^r)


class TranslateResult(NamedTuple):
    pilp: PILP              # canonical form, same dimensions
    back: AffineParamMap    # y |-> y - (t^r, ..., t^r)
    r: int
    threshold: int          # rewrite faithful for every t > threshold
    value_shift: Poly       # f_source = f_target - value_shift


def general_to_canonical_translate(p: PILP, r: int | None = None) -> TranslateResult:
    """Shift all coordinates by t^r so that, eventually, they are nonnegative.

    r defaults to the coordinate bound exponent; any larger r also works.
    For t past the threshold every point of L(t) has coordinates above
    -t^r, so adding x >= 0 to the shifted program loses nothing.
    """
    if p.form is not Form.GENERAL:
        raise InvalidProgramError("translation expects general form")
    cb = coordinate_bound_exponent(p)
    if r is None:
        r = cb.r
    elif r < cb.r:
        raise ValueError(f"r={r} below the certified exponent {cb.r}")
    shift = Poly.monomial(r)
    b2 = tuple(
        rhs + shift * sum(row, start=ZERO) for row, rhs in zip(p.A, p.b))
    canon = PILP(Form.CANONICAL, p.n, p.m, p.A, b2, p.c, bounded=p.bounded)
    back = AffineParamMap(
        tuple(tuple(ONE if j == i else ZERO for j in range(p.n))
              for i in range(p.n)),
        (-shift,) * p.n)
    value_shift = shift * sum(p.c, start=ZERO)
    return TranslateResult(canon, back, r, cb.T, value_shift)


# ---------------------------------------------------------------------------
# Standard -> reduced canonical via base-t digits with carries


class DigitPart(NamedTuple):
    carries: tuple   # one tuple of carry values per equation row
    pilp: PILP       # reduced canonical in n*r digit variables


@dataclass(frozen=True)
class DigitDecomposition:
    source: PILP
    r: int
    parts: tuple              # DigitPart, ordered by carry tuples
    inverse_map: AffineParamMap  # digits |-> original coordinates
    threshold: int
    covers_all: bool          # whether the digit box certifiably holds L(t)

    def objective_digit(self, i: int, j: int) -> Poly:
        """Objective coefficient carried by digit j of coordinate i."""
        return self.source.c[i].shift_up(j)


class _Level(NamedTuple):
    coefs: tuple     # (digit_index, coefficient) pairs, coefficient != 0
    rhs_const: int   # the level's constant from b
    pos: int         # sum of positive coefficients
    neg: int         # minus the sum of negative coefficients


def _row_levels(row, rhs: Poly, r: int) -> list[_Level]:
    degs = [a.degree for a in row]
    top = max([d + r - 1 for d in degs if d >= 0] + [rhs.degree, 0])
    levels = []
    for s in range(top + 1):
        coefs = []
        for i, a in enumerate(row):
            for j in range(max(0, s - a.degree), min(r - 1, s) + 1):
                cval = a.coeff(s - j)
                if cval:
                    coefs.append((i * r + j, int(cval)))
        pos = sum(c for _, c in coefs if c > 0)
        neg = -sum(c for _, c in coefs if c < 0)
        levels.append(_Level(tuple(coefs), int(rhs.coeff(s)), pos, neg))
    return levels


def _carry_chains(levels: list[_Level]) -> tuple[list[tuple], int]:
    """All carry tuples not eventually infeasible, plus a prune threshold.

    A level equation reads  L_s(y) = rhs_const_s + C_{s+1} t - C_s  with
    digits in [0, t-1].  L_s then ranges over [-neg (t-1), pos (t-1)], so a
    right side beta1 t + beta0 is eventually attainable only if beta1 stays
    inside (-neg, pos) or sits on the edge with a compatible constant.
    Branches failing that are dropped; the threshold certifies the drops.
    """
    chains: list[tuple] = []
    threshold = 0

    def eventually_attainable(beta1: int, beta0: int, lv: _Level) -> bool:
        nonlocal threshold
        upper = beta1 < lv.pos or (beta1 == lv.pos and beta0 <= -lv.pos)
        lower = beta1 > -lv.neg or (beta1 == -lv.neg and beta0 >= lv.neg)
        if upper and lower:
            return True
        if not upper:  # (beta1 - pos) t + beta0 + pos > 0 eventually
            gap = Poly((beta0 + lv.pos, beta1 - lv.pos))
        else:
            gap = Poly((-(beta0 - lv.neg), -(beta1 + lv.neg)))
        threshold = max(threshold, eventual_sign_threshold(gap))
        return False

    def walk(s: int, carry_in: int, acc: list[int]) -> None:
        if s == len(levels):
            chains.append(tuple(acc))
            return
        lv = levels[s]
        m_s = lv.pos + lv.neg
        last = s == len(levels) - 1
        for carry_out in ((0,) if last else range(-m_s, m_s + 1)):
            if eventually_attainable(carry_out, lv.rhs_const - carry_in, lv):
                acc.append(carry_out)
                walk(s + 1, carry_out, acc)
                acc.pop()

    walk(0, 0, [])
    return chains, threshold


def standard_to_reduced_digits(p: PILP, r: int | None = None) -> DigitDecomposition:
    """Split a standard-form program by base-t digit expansion with carries.

    Requires every b_i nonzero with positive leading coefficient (run
    normalize_b_signs first).  Writes x_i = sum_j y_{i,j} t^j with r digits
    in [0, t-1] each, matches powers of t level by level, and enumerates
    the bounded integer carries between levels.  Each surviving carry
    assignment becomes one reduced canonical part; parts are pairwise
    disjoint at every t >= 1 and, past the threshold, cover exactly
    L(t) restricted to [0, t^r)^n.  With the default r that restriction
    is certifiably vacuous (``covers_all``); a caller-chosen smaller r
    keeps the box-restricted reading.
    """
    if p.form is not Form.STANDARD:
        raise InvalidProgramError("digit split expects standard form")
    for rhs in p.b:
        if rhs.is_zero or rhs.leading < 0:
            raise DegenerateProgramError(
                "digit split needs b sign-normalized and nonzero")
    cb = coordinate_bound_exponent(p)
    if r is None:
        r = cb.r
    if r < 1:
        raise ValueError("digit count r must be positive")
    covers_all = r >= cb.r
    n, nvars = p.n, p.n * r
    threshold = max(cb.T if covers_all else 0, 1)

    per_row = []
    for row, rhs in zip(p.A, p.b):
        levels = _row_levels(row, rhs, r)
        chains, prune_t = _carry_chains(levels)
        threshold = max(threshold, prune_t)
        # carries of genuine solutions stay in range once t > M_{s-1} + |b_s|
        for s, lv in enumerate(levels):
            prev_m = 0 if s == 0 else levels[s - 1].pos + levels[s - 1].neg
            threshold = max(threshold, prev_m + abs(lv.rhs_const))
        per_row.append((levels, chains))

    digit_rows = []
    for v in range(nvars):
        digit_rows.append((
            tuple(1 if u == v else 0 for u in range(nvars)), Poly((-1, 1))))

    parts = []

    def build(rowno: int, chosen: list[tuple]) -> None:
        if rowno == len(per_row):
            rows_a, rows_b = [], []
            for (levels, _), chain in zip(per_row, chosen):
                carries = (0, *chain)  # chain already ends in the forced 0
                for s, lv in enumerate(levels):
                    line = [0] * nvars
                    for idx, cval in lv.coefs:
                        line[idx] = cval
                    rhs = Poly((lv.rhs_const - carries[s], carries[s + 1]))
                    rows_a += [tuple(line), tuple(-v for v in line)]
                    rows_b += [rhs, -rhs]
            for line, rhs in digit_rows:
                rows_a.append(line)
                rows_b.append(rhs)
            cov = tuple(p.c[v // r].shift_up(v % r) for v in range(nvars))
            part = PILP(Form.REDUCED_CANONICAL, nvars, len(rows_a),
                        tuple(rows_a), tuple(rows_b), cov, bounded=p.bounded)
            parts.append(DigitPart(tuple(chosen), part))
            return
        for chain in per_row[rowno][1]:
            chosen.append(chain)
            build(rowno + 1, chosen)
            chosen.pop()

    build(0, [])
    matrix = tuple(
        tuple(Poly.monomial(v % r) if v // r == i else ZERO
              for v in range(nvars))
        for i in range(n))
    inverse = AffineParamMap(matrix, (ZERO,) * n)
    return DigitDecomposition(p, r, tuple(parts), inverse, threshold, covers_all)


# ---------------------------------------------------------------------------
# Hyperplane layers


class LayerPart(NamedTuple):
    row_index: int    # which kept row the layer is pinned to
    k: int            # 0 <= k < c[row_index]
    row: tuple        # (coefficients, rhs Poly) of that row
    pilp: PILP        # general form: source rows + pin pair + exclusions


@dataclass(frozen=True)
class LayerDecomposition:
    source: PILP
    ell0: int
    rows: tuple               # kept (coefficients, rhs) rows, x>=0 absorbed
    c: tuple                  # per-row layer count
    layers: tuple             # LayerPart in (row, k) order
    threshold: int            # zero-row drops certified past this t
    eventually_empty: bool    # a zero row is eventually violated


def hyperplane_layers(p: PILP, ell0: int) -> LayerDecomposition:
    """Slice the region near its bounding hyperplanes into pinned programs.

    Absorbs x >= 0 as explicit rows, drops rows with zero coefficients by
    the eventual sign of their right side, and for each surviving row a_i
    chooses the least c_i with c_i^2 >= ell0^2 |a_i|^2.  Layer (i, k) pins
    a_i . x = b_i - k and excludes a_h . x > b_h - c_h for h < i, so the
    layers are pairwise disjoint at every t and jointly contain every
    feasible point within distance ell0 of some bounding hyperplane.
    """
    if p.form.is_equality or not p.form.has_nonneg:
        raise InvalidProgramError("layering expects canonical form")
    if ell0 < 1:
        raise ValueError("ell0 must be a positive integer")
    if any(e.degree > 0 for row in p.A for e in row):
        raise InvalidProgramError("layering requires a constant matrix A")
    n = p.n
    absorbed = [(tuple(int(e.coeff(0)) for e in row), rhs)
                for row, rhs in zip(p.A, p.b)]
    for i in range(n):
        absorbed.append((tuple(-1 if j == i else 0 for j in range(n)), ZERO))
    kept, threshold, empty = [], 0, False
    for coefs, rhs in absorbed:
        if any(coefs):
            kept.append((coefs, rhs))
            continue
        threshold = max(threshold, eventual_sign_threshold(rhs))
        if eventual_sign(rhs) < 0:
            empty = True
    counts = []
    for coefs, _ in kept:
        norm2 = sum(a * a for a in coefs)
        c = isqrt(ell0 * ell0 * norm2)
        if c * c < ell0 * ell0 * norm2:
            c += 1
        counts.append(c)
    layers = []
    if not empty:
        for i, (coefs, rhs) in enumerate(kept):
            for k in range(counts[i]):
                rows_a = [tuple(Poly((a,)) for a in cf) for cf, _ in kept]
                rows_b = [rb for _, rb in kept]
                rows_a.append(tuple(Poly((a,)) for a in coefs))
                rows_b.append(rhs - k)
                rows_a.append(tuple(Poly((-a,)) for a in coefs))
                rows_b.append(-(rhs - k))
                for h in range(i):
                    hc, hb = kept[h]
                    rows_a.append(tuple(Poly((a,)) for a in hc))
                    rows_b.append(hb - counts[h])
                q = PILP(Form.GENERAL, n, len(rows_a), tuple(rows_a),
                         tuple(rows_b), p.c, bounded=p.bounded)
                layers.append(LayerPart(i, k, (coefs, rhs), q))
    return LayerDecomposition(p, ell0, tuple(kept), tuple(counts),
                              tuple(layers), threshold, empty)


# ---------------------------------------------------------------------------
# Lattice tools for a single hyperplane


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u a + v b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_u, u = u, old_u - qt * u
        old_v, v = v, old_v - qt * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def _gcd_chain(a) -> tuple[int, tuple, tuple]:
    """(d, beta, kernel) with a.beta = d = gcd(a) > 0 and the kernel columns
    completing beta to a unimodular basis, so they generate {z : a.z = 0}."""
    a = tuple(int(v) for v in a)
    n = len(a)
    if n == 0 or not any(a):
        raise ValueError("gcd chain needs a nonzero integer vector")
    pivot = [1 if j == 0 else 0 for j in range(n)]
    d = a[0]
    kernel = []
    for i in range(1, n):
        col = [1 if j == i else 0 for j in range(n)]
        if d == 0 and a[i] == 0:
            kernel.append(tuple(col))
            continue
        g, u, v = _xgcd(d, a[i])
        newpivot = [u * x + v * y for x, y in zip(pivot, col)]
        newcol = [(-a[i] // g) * x + (d // g) * y for x, y in zip(pivot, col)]
        pivot, d = newpivot, g
        kernel.append(tuple(newcol))
    if d < 0:
        pivot = [-x for x in pivot]
        d = -d
    return d, tuple(pivot), tuple(kernel)


def bezout_certificate(a) -> tuple[int, tuple]:
    """(d, beta) with d = gcd(a) > 0 and a . beta = d.

    >>> bezout_certificate((6, 10, 15))
    (1, (-14, 7, 1))
    """
    d, beta, _ = _gcd_chain(a)
    return d, beta


def kernel_lattice_basis(a) -> tuple:
    """Basis of the integer solutions of a . z = 0, as n-1 vectors.

    Every integer kernel point is an integer combination of these.
    """
    _, _, kernel = _gcd_chain(a)
    return kernel


# ---------------------------------------------------------------------------
# Projection of a pinned program onto a hyperplane lattice


class HyperplaneSpec(NamedTuple):
    coefs: tuple   # nonzero integer normal vector
    rhs: Poly      # degree <= 1
    k: int         # the pinned slab offset: a . x = rhs - k


@dataclass(frozen=True)
class ProjectionResult:
    """Reduction of a hyperplane-pinned program to one variable fewer.

    ``residue`` is the class of t where the hyperplane carries lattice
    points at all (None means it never does, and nothing else is filled
    in).  For t in the class, ``back`` maps the reduced program's points
    bijectively onto the source's, and a source value f is recovered from
    a reduced value f0 as (f0 + Z(t)) / z - correction(t).
    """

    source: PILP
    spec: HyperplaneSpec
    residue: tuple | None
    reduced: PILP | None = None
    back: AffineParamMap | None = None
    z: int = 1
    Z: Poly = ZERO
    correction: Poly = ZERO
    K: int = 0

    @property
    def never(self) -> bool:
        return self.residue is None

    def recover_branch(self, q: Poly) -> Poly:
        return (q + self.Z).scale(Fraction(1, self.z)) - self.correction

    def recover_value(self, v, t: int):
        got = Fraction(v + self.Z(t), self.z) - self.correction(t)
        return int(got) if got.denominator == 1 else got


def project_to_hyperplane(q: PILP, spec: HyperplaneSpec) -> ProjectionResult:
    """Rewrite a program pinned to a . x = rhs - k inside that hyperplane.

    Solves the one-equation lattice system exactly: integer points exist
    on the hyperplane iff t lies in one residue class (or never), and
    there they form x0(t) + lattice of the kernel basis.  Substituting
    and clearing denominators yields constant-matrix rows with degree <= 1
    right sides; translating by K(t+1) makes all coordinates nonnegative,
    giving a reduced canonical program in n-1 variables whose value list
    matches the source's through (z, Z, correction) at every t in the
    class (t >= 1), provided the source region is bounded there.
    """
    if not isinstance(spec, HyperplaneSpec):
        spec = HyperplaneSpec(*spec)
    rhs_poly = spec.rhs if isinstance(spec.rhs, Poly) else Poly((spec.rhs,))
    spec = HyperplaneSpec(tuple(int(v) for v in spec.coefs), rhs_poly,
                          int(spec.k))
    if spec.rhs.degree > 1:
        raise InvalidProgramError("projection needs a degree <= 1 right side")
    rows = general_rows(q)
    if any(e.degree > 0 for row, _ in rows for e in row):
        raise InvalidProgramError("projection requires constant coefficients")
    d, beta, kernel = _gcd_chain(spec.coefs)
    w: Poly = spec.rhs - spec.k
    w1, w0 = int(w.coeff(1)), int(w.coeff(0))
    g0 = gcd(w1, d)
    if w0 % g0:
        return ProjectionResult(q, spec, None)
    qhat = d // g0
    p_res = ((-w0 // g0) * pow(w1 // g0, -1, qhat)) % qhat if qhat > 1 else 0
    g_t = w.scale(Fraction(1, d))
    x0 = tuple(g_t.scale(bi) for bi in beta)

    n2 = q.n - 1
    rows_a, rows_b = [], []
    for row, rhs in rows:
        coefs = tuple(int(e.coeff(0)) for e in row)
        wb = sum(a * bi for a, bi in zip(coefs, beta))
        line = tuple(d * sum(a * e for a, e in zip(coefs, col))
                     for col in kernel)
        rhs2 = rhs.scale(d) - w.scale(wb)
        if not any(line) and rhs2.is_zero:
            continue  # 0 <= 0, the pin pair collapses to nothing
        rows_a.append(line)
        rows_b.append(rhs2)

    chat = tuple(
        sum((ci.scale(col[i]) for i, ci in enumerate(q.c)), start=ZERO)
        for col in kernel)
    gamma = g_t * sum((ci.scale(bi) for ci, bi in zip(q.c, beta)), start=ZERO)
    z = lcm(*(Fraction(cf).denominator for cf in gamma.coeffs)) if gamma.coeffs else 1
    Z = gamma.scale(z)

    if n2 == 0:
        K = 0
        correction = ZERO
        reduced = PILP(Form.REDUCED_CANONICAL, 0, len(rows_a), tuple(rows_a),
                       tuple(rows_b), (), bounded=q.bounded)
        back = AffineParamMap(tuple(() for _ in x0), x0, (p_res, qhat))
    else:
        alpha = max([1] + [abs(v) for line in rows_a for v in line])
        beta_env = coeffs_max(rows_b, floor=ONE)
        bound = ONE
        for _ in range(n2 - 1):
            bound = bound.scale(alpha)
        bound = bound * beta_env
        bound = bound.scale(factorial(n2))
        K = max(int(bound.coeff(1)), int(bound.coeff(0)), 0) + 1
        kpoly = Poly((K, K))
        rows_b = [rhs + kpoly.scale(sum(line))
                  for line, rhs in zip(rows_a, rows_b)]
        correction = kpoly * sum(chat, start=ZERO)
        reduced = PILP(Form.REDUCED_CANONICAL, n2, len(rows_a), tuple(rows_a),
                       tuple(rows_b), tuple(ch.scale(z) for ch in chat),
                       bounded=q.bounded)
        matrix = tuple(
            tuple(Poly((col[i],)) for col in kernel) for i in range(q.n))
        offset = tuple(
            x0[i] - kpoly.scale(sum(col[i] for col in kernel))
            for i in range(q.n))
        back = AffineParamMap(matrix, offset, (p_res, qhat))
    return ProjectionResult(q, spec, (p_res, qhat), reduced, back, z, Z,
                            correction, K)


def digit_manifest(dec: DigitDecomposition) -> dict:
    """Deterministic JSON description of a digit decomposition."""
    return {
        "r": dec.r,
        "threshold": dec.threshold,
        "digits_per_coordinate": dec.r,
        "parts": [
            {"carries": [list(ch) for ch in part.carries]}
            for part in dec.parts
        ],
        "objective_digits": [
            poly_to_json(dec.objective_digit(v // dec.r, v % dec.r))
            for v in range(dec.source.n * dec.r)
        ],
    }


__all__ = [
    "AffineParamMap", "DegenerateProgramError", "DigitDecomposition",
    "DigitPart", "HyperplaneSpec", "LayerDecomposition", "LayerPart",
    "ProjectionResult", "SlackResult", "TranslateResult",
    "bezout_certificate", "canonical_to_standard_slack", "digit_manifest",
    "general_to_canonical_translate", "hyperplane_layers",
    "kernel_lattice_basis", "project_to_hyperplane",
    "standard_to_reduced_digits",
]

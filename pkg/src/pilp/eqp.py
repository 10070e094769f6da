"""Eventual quasi-polynomial structure of the value functions f_ell.

Two independent routes produce certificates.  The sampling route fits
branch polynomials per residue class from exact samples and validates on
held-out parameters; failure to fit within budget is the first-class
outcome NO_FIT, never a fabricated certificate.  The constructive route
walks the rewrite pipeline (translate, slack, digits, layers, projection)
down to zero variables, combining sub-certificates exactly; it cannot
fail, only grow thresholds, and is cross-checked against the sampling
oracle on a validation window before a certificate is issued.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, NamedTuple

from . import oracle
from .model import Form, InvalidProgramError, PILP, general_rows, \
    normalize_b_signs
from .poly import (
    BOTTOM, ONE, Poly, QuasiPolynomial, RationalFunction, RF_ZERO, RF_ONE,
    ZERO,
    compare_eventually, eventual_compare_threshold, eventual_sign,
    eventual_sign_threshold, eventual_sort, interpolate, poly_from_json,
    poly_to_json, qp_eval, qp_from_json, qp_to_json, value_from_json,
    value_to_json,
)
from .transforms import (
    HyperplaneSpec, canonical_to_standard_slack,
    general_to_canonical_translate, hyperplane_layers, project_to_hyperplane,
    standard_to_reduced_digits,
)

Sampler = Callable[[int], object]  # t -> int | Fraction | BOTTOM


@dataclass(frozen=True)
class InferenceConfig:
    d_max: int = 8
    deg_max: int = 4
    validate_count: int = 2
    t_start: int = 8
    t_cap: int = 300

    def __post_init__(self):
        if self.validate_count < 2:
            raise ValueError("validate_count must be at least 2")
        if self.d_max < 1 or self.deg_max < 0 or self.t_start < 1:
            raise ValueError("bad inference configuration")


class ValidationEntry(NamedTuple):
    t: int
    predicted: object
    actual: object
    match: bool


@dataclass(frozen=True)
class EQPCertificate:
    qp: QuasiPolynomial
    samples_used: tuple      # (t, value) pairs the fit consumed
    validation: tuple        # ValidationEntry on held-out parameters
    mode: str = "direct"


@dataclass(frozen=True)
class NoFit:
    """No period/threshold pair within budget explained the samples."""

    reason: str
    tried: tuple = ()        # (d, N, failure note) attempts, in order


class ConstructiveMismatchError(AssertionError):
    """The constructed certificate disagreed with the enumeration oracle."""


def _values_equal(a, b) -> bool:
    if (a is BOTTOM) != (b is BOTTOM):
        return False
    return True if a is BOTTOM else Fraction(a) == Fraction(b)


def _spread_targets(lo: int, hi: int, count: int) -> list[int]:
    """count integer targets spread over (lo, hi], ending at hi."""
    return [lo + ((hi - lo) * i) // count for i in range(1, count + 1)]


def infer_qp(sampler: Sampler, cfg: InferenceConfig | None = None):
    """Fit an eventual quasi-polynomial to exact samples, or return NoFit.

    Periods are tried in increasing order; for each, thresholds double
    from t_start.  A candidate (d, N) interpolates deg_max + 1 samples in
    every residue class and must then reproduce validate_count held-out
    samples spread through the rest of the budget, exactly.  Classes that
    sample BOTTOM throughout become BOTTOM branches; a class mixing BOTTOM
    with finite values rejects the candidate.
    """
    cfg = cfg or InferenceConfig()
    cache: dict[int, object] = {}

    def sample(t: int):
        if t not in cache:
            cache[t] = sampler(t)
        return cache[t]

    npts = cfg.deg_max + 1
    tried: list[tuple] = []
    for d in range(1, cfg.d_max + 1):
        n_thr = cfg.t_start
        while n_thr + d * (npts + cfg.validate_count) <= cfg.t_cap:
            verdict = _try_fit(sample, d, n_thr, cfg)
            if isinstance(verdict, EQPCertificate):
                return verdict
            tried.append((d, n_thr, verdict))
            n_thr *= 2
    return NoFit(
        f"no quasi-polynomial of period <= {cfg.d_max} and degree <= "
        f"{cfg.deg_max} explains the samples within t <= {cfg.t_cap}",
        tuple(tried))


def _try_fit(sample, d: int, n_thr: int, cfg: InferenceConfig):
    npts = cfg.deg_max + 1
    branches = []
    samples_used = []
    validation = []
    interp_end = 0
    plans = []
    for j in range(d):
        base = n_thr + 1 + ((j - (n_thr + 1)) % d)
        ts = [base + i * d for i in range(npts)]
        plans.append(ts)
        interp_end = max(interp_end, ts[-1])
    for j, ts in enumerate(plans):
        vals = [sample(t) for t in ts]
        bottoms = sum(1 for v in vals if v is BOTTOM)
        held = []
        prev = interp_end
        for target in _spread_targets(interp_end, cfg.t_cap, cfg.validate_count):
            tv = target - ((target - j) % d)
            tv = max(tv, prev + d)
            if tv > cfg.t_cap:
                return f"class {j}: validation budget exhausted"
            held.append(tv)
            prev = tv
        if bottoms == len(vals):
            branch = BOTTOM
        elif bottoms:
            return f"class {j}: finite and -inf samples mixed"
        else:
            branch = interpolate(list(zip(ts, vals)))
        for tv in held:
            actual = sample(tv)
            if branch is BOTTOM:
                predicted = BOTTOM
            else:
                predicted = branch(tv)
            ok = _values_equal(predicted, actual)
            validation.append(ValidationEntry(tv, predicted, actual, ok))
            if not ok:
                return f"class {j}: held-out t={tv} mismatch"
        branches.append(branch)
        samples_used += list(zip(ts, vals))
    qp = QuasiPolynomial(d, n_thr, tuple(branches))
    return EQPCertificate(
        qp, tuple(sorted(samples_used)),
        tuple(sorted(validation)), "direct")


class VerifyReport(NamedTuple):
    checked: int
    mismatches: tuple   # (t, predicted, actual)
    passed: bool


def verify_qp(cert: EQPCertificate | QuasiPolynomial, sampler: Sampler,
              t_range) -> VerifyReport:
    """Replay a certificate against fresh samples; every t must exceed the
    threshold.  Zero tolerance: any deviation is a mismatch."""
    qp = cert.qp if isinstance(cert, EQPCertificate) else cert
    mismatches = []
    checked = 0
    for t in t_range:
        predicted = qp_eval(qp, t)   # raises below threshold
        actual = sampler(t)
        checked += 1
        if not _values_equal(predicted, actual):
            mismatches.append((t, predicted, actual))
    return VerifyReport(checked, tuple(mismatches), not mismatches)


# ---------------------------------------------------------------------------
# Exact combination of certificates


def kth_of_eqps(fs, ell: int) -> QuasiPolynomial:
    """The ell-th largest of finitely many eventual quasi-polynomials.

    Lifts all inputs to the common period, sorts each residue class by
    eventual comparison, and picks index ell-1; BOTTOM fills when fewer
    than ell inputs are finite...  The output threshold additionally
    dominates every pairwise comparison threshold in every class, so the
    pointwise ell-th largest matches the eventual one past it.
    """
    fs = list(fs)
    if ell < 1:
        raise ValueError("ell must be positive")
    if not fs:
        return QuasiPolynomial(1, 0, (BOTTOM,))
    period = 1
    for f in fs:
        period = lcm(period, f.period)
    threshold = max(f.threshold for f in fs)
    branches = []
    for j in range(period):
        cands = [f.branches[j % f.period] for f in fs]
        finite = [c for c in cands if c is not BOTTOM]
        for a_i in range(len(finite)):
            for b_i in range(a_i + 1, len(finite)):
                threshold = max(threshold, eventual_compare_threshold(
                    finite[a_i], finite[b_i]))
        order = eventual_sort(cands)
        branches.append(cands[order[ell - 1]] if ell <= len(cands) else BOTTOM)
    return QuasiPolynomial(period, threshold, tuple(branches))


# ---------------------------------------------------------------------------
# Constructive route


def eventually_empty_relaxation(p: PILP) -> tuple[bool, int]:
    """Decide whether the real relaxation of p is empty for all large t.

    Runs phase-one simplex over the ordered field of rational functions
    (order = eventual sign).  A feasible point settles the question one
    way; otherwise the Farkas certificate is turned into an explicit
    threshold past which it holds pointwise, so L(t) = empty for t above
    the returned threshold.

    (False, 0) only means emptiness was not proven; callers use this as a
    pruning hint, never as a feasibility claim.  That one-sidedness allows
    two shortcuts: a constant-free violated row decides immediately, and a
    plain rational feasible point at a fixed probe parameter skips the
    symbolic solve.
    """
    rows = general_rows(p)
    for row, rhs in rows:
        if all(a.is_zero for a in row) and eventual_sign(rhs) < 0:
            return True, eventual_sign_threshold(rhs)
    probe = 997
    res_q = oracle.solve_lp(
        [Fraction(0)] * p.n,
        [tuple(Fraction(a(probe)) for a in row) for row, _ in rows],
        [Fraction(rhs(probe)) for _, rhs in rows],
        [], [], nonneg=False)
    if res_q.status is not oracle.LPStatus.INFEASIBLE:
        return False, 0
    lifted = _lift_numeric_farkas(res_q.farkas[0], rows, p.n)
    if lifted is not None:
        return True, lifted
    a_ub = [tuple(RationalFunction.of(e) for e in row) for row, _ in rows]
    b_ub = [RationalFunction.of(rhs) for _, rhs in rows]
    res = oracle.solve_lp([RF_ZERO] * p.n, a_ub, b_ub, [], [],
                          nonneg=False, zero=RF_ZERO, one=RF_ONE)
    if res.status is not oracle.LPStatus.INFEASIBLE:
        return False, 0
    y_ub, _ = res.farkas
    threshold = 0
    for y in y_ub:
        threshold = max(threshold, y.sign_threshold())
    for j in range(p.n):
        wj = RF_ZERO
        for yi, row in zip(y_ub, a_ub):
            wj = wj + yi * row[j]
        threshold = max(threshold, wj.sign_threshold())
    total = RF_ZERO
    for yi, rhs in zip(y_ub, b_ub):
        total = total + yi * rhs
    threshold = max(threshold, total.sign_threshold())
    return True, threshold


def _lift_numeric_farkas(y_ub, rows, n: int) -> int | None:
    """Try to promote a single-parameter Farkas certificate to all large t.

    For rows Ax <= b over free x, y >= 0 with yA = 0 and yb < 0 proves
    emptiness.  y came from one probe value of t; the combination yA must
    vanish identically (automatic when A is constant) and yb must be
    eventually negative.  Returns a sound threshold, or None if the
    numeric certificate does not generalize.
    """
    for j in range(n):
        w = ZERO
        for yi, (row, _) in zip(y_ub, rows):
            if yi:
                w = w + row[j].scale(yi)
        if not w.is_zero:
            return None
    total = ZERO
    for yi, (_, rhs) in zip(y_ub, rows):
        if yi:
            total = total + rhs.scale(yi)
    if eventual_sign(total) >= 0:
        return None
    return eventual_sign_threshold(total)


def _bottom_qp(threshold: int) -> QuasiPolynomial:
    return QuasiPolynomial(1, threshold, (BOTTOM,))


def constructive_qp(p: PILP, ell: int,
                    _cache: dict | None = None) -> QuasiPolynomial:
    """Certificate for f_ell of p assembled from the rewrite pipeline.

    general form is translated into canonical, canonical picks up slack
    variables into standard, standard splits into reduced canonical digit
    parts, and reduced canonical peels hyperplane layers whose projections
    recurse with one variable fewer, down to parameter-only programs.
    Exact at every step; thresholds only ever join by maximum.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    cache = _cache if _cache is not None else {}
    key = (p, ell)
    if key in cache:
        return cache[key]
    p.check()
    empty, e_thr = eventually_empty_relaxation(p)
    if empty:
        out = _bottom_qp(e_thr)
    elif p.form is Form.GENERAL:
        tr = general_to_canonical_translate(p)
        sub = constructive_qp(tr.pilp, ell, cache)
        out = sub.map_branches(lambda q: q - tr.value_shift)
        out = out.with_threshold(tr.threshold)
    elif p.form is Form.CANONICAL:
        out = constructive_qp(canonical_to_standard_slack(p).pilp, ell, cache)
    elif p.form is Form.STANDARD:
        norm = normalize_b_signs(p)
        if norm.degenerate:
            # only the origin solves Ax = 0, x >= 0 in a bounded region
            out = QuasiPolynomial(1, 0, (ZERO,)) if ell == 1 else _bottom_qp(0)
        else:
            dec = standard_to_reduced_digits(norm.pilp)
            cands = [constructive_qp(part.pilp, m, cache)
                     for part in dec.parts for m in range(1, ell + 1)]
            out = kth_of_eqps(cands, ell).with_threshold(dec.threshold)
    else:
        out = _reduced_qp(p, ell, cache)
    cache[key] = out
    return out


def _restricted_recovery(proj, m: int, cache: dict) -> QuasiPolynomial:
    """Certificate for the pinned program, from its projection: recurse on
    the reduced side, mask residue classes with no lattice point on the
    hyperplane, and pull values back through the objective bookkeeping."""
    sub = constructive_qp(proj.reduced, m, cache)
    p_res, qhat = proj.residue
    period = lcm(sub.period, qhat)
    branches = []
    for j in range(period):
        if j % qhat != p_res:
            branches.append(BOTTOM)
            continue
        br = sub.branches[j % sub.period]
        branches.append(BOTTOM if br is BOTTOM else proj.recover_branch(br))
    return QuasiPolynomial(period, max(sub.threshold, 1), tuple(branches))


def _equality_pair(p: PILP):
    """A (coefs, rhs) pair row i / row h with row_h = -row_i, rhs_h = -rhs_i
    and nonzero coefficients, or None.  Such a pair forces equality, so the
    whole feasible set lives on one hyperplane."""
    for i in range(p.m):
        if not any(not a.is_zero for a in p.A[i]):
            continue
        neg_row = tuple(-a for a in p.A[i])
        neg_rhs = -p.b[i]
        for h in range(p.m):
            if h != i and p.A[h] == neg_row and p.b[h] == neg_rhs:
                return HyperplaneSpec(
                    tuple(a.coeff(0) for a in p.A[i]), p.b[i], 0), 0
    return None


def _implied_equality(p: PILP):
    """A hyperplane that eventually carries every lattice point, plus the
    threshold past which it does, or None.

    Row a.x <= rhs holds with equality on all large-t lattice points
    exactly when tightening it to a.x <= rhs - 1 empties the program
    (integer points take integer values on integer rows).  Detecting this
    before enumerating layers collapses one variable by projection and is
    what keeps the recursion narrow.
    """
    rows = general_rows(p)
    # unit rows first: pinned coordinates make the cheapest projections
    order = sorted(range(len(rows)), key=lambda i: sum(
        0 if a.is_zero else 1 for a in rows[i][0]) > 1)
    for i in order:
        coefs, rhs = rows[i]
        if all(a.is_zero for a in coefs):
            continue
        tight = PILP(
            Form.GENERAL, p.n, len(rows) + 1,
            tuple(r for r, _ in rows) + (coefs,),
            tuple(r for _, r in rows) + (rhs - ONE,),
            p.c, bounded=p.bounded)
        empty, thr = eventually_empty_relaxation(tight)
        if empty:
            return HyperplaneSpec(
                tuple(a.coeff(0) for a in coefs), rhs, 0), thr
    return None


def _floor_qp(b: Poly, a: int) -> QuasiPolynomial:
    """floor(b(t)/a) for a > 0 and deg b <= 1, exact at every t >= 1."""
    if b.degree > 1:
        raise ValueError("floor closed form needs an affine numerator")
    b1, b0 = b.coeff(1), b.coeff(0)
    branches = []
    for j in range(a):
        r = (b1 * j + b0) % a
        branches.append(Poly((Fraction(b0 - r, a), Fraction(b1, a))))
    return QuasiPolynomial(a, 0, tuple(branches))


def _one_var_qp(p: PILP, ell: int) -> QuasiPolynomial:
    """f_ell of a one-variable reduced program, without any recursion.

    The feasible set is the integer interval between quasi-polynomial
    endpoints: each constraint a.y <= b(t) floors to an endpoint, and the
    ell-th best value sits ell - 1 steps inside whichever end the
    objective sign favors.
    """
    uppers, lowers = [], []
    threshold = 0
    for row, rhs in zip(p.A, p.b):
        a = row[0].coeff(0)
        if a == 0:
            if eventual_sign(rhs) < 0:
                return _bottom_qp(eventual_sign_threshold(rhs))
            threshold = max(threshold, eventual_sign_threshold(rhs))
        elif a > 0:
            uppers.append(_floor_qp(rhs, a))
        else:
            lowers.append(_floor_qp(rhs, -a).map_branches(lambda q: -q))
    lowers.append(QuasiPolynomial(1, 0, (ZERO,)))
    low = kth_of_eqps(lowers, 1)
    up = kth_of_eqps(uppers, len(uppers)) if uppers else None
    c = p.c[0]
    csign = eventual_sign(c)
    if csign > 0 and up is None:
        raise InvalidProgramError("one-variable program is unbounded above")
    threshold = max(threshold, eventual_sign_threshold(c), low.threshold,
                    up.threshold if up else 0)
    base = up if csign > 0 else low
    step = -1 if csign > 0 else 1
    period = lcm(low.period, up.period if up else 1)
    branches = []
    for j in range(period):
        if up is not None:
            gap = up.branches[j % up.period] - low.branches[j % low.period] \
                - Poly((ell - 1,))
            threshold = max(threshold, eventual_sign_threshold(gap))
            if eventual_sign(gap) < 0:
                branches.append(BOTTOM)
                continue
        if csign == 0:
            branches.append(ZERO)
        else:
            y = base.branches[j % base.period] + Poly((step * (ell - 1),))
            branches.append(c * y)
    return QuasiPolynomial(period, threshold, tuple(branches))


def _reduced_qp(p: PILP, ell: int, cache: dict) -> QuasiPolynomial:
    if p.n == 0:
        threshold = max((eventual_sign_threshold(rhs) for rhs in p.b),
                        default=0)
        feasible = all(eventual_sign(rhs) >= 0 for rhs in p.b)
        if feasible and ell == 1:
            return QuasiPolynomial(1, threshold, (ZERO,))
        return _bottom_qp(threshold)
    eq = _equality_pair(p)
    if eq is None and p.n > 1:
        eq = _implied_equality(p)
    if eq is not None:
        # no layer enumeration needed: project straight onto the equality
        spec, eq_thr = eq
        proj = project_to_hyperplane(p, spec)
        if proj.never:
            return _bottom_qp(eq_thr)
        return _restricted_recovery(proj, ell, cache).with_threshold(eq_thr)
    if p.n == 1:
        return _one_var_qp(p, ell)
    lay = hyperplane_layers(p, ell)
    if lay.eventually_empty:
        return _bottom_qp(lay.threshold)
    threshold = lay.threshold
    cands = []
    for layer in lay.layers:
        empty, e_thr = eventually_empty_relaxation(layer.pilp)
        if empty:
            threshold = max(threshold, e_thr)
            continue
        spec = HyperplaneSpec(layer.row[0], layer.row[1], layer.k)
        proj = project_to_hyperplane(layer.pilp, spec)
        if proj.never:
            continue  # no lattice point on the hyperplane at any t
        for m in range(1, ell + 1):
            cands.append(_restricted_recovery(proj, m, cache))
    return kth_of_eqps(cands, ell).with_threshold(threshold)


# ---------------------------------------------------------------------------
# Value-function structure, by either route


def oracle_sampler(p: PILP, ell: int, distinct: bool = False,
                   max_cells=None) -> Sampler:
    """Exact enumeration sampler for f_ell(p, .)."""

    def sample(t: int):
        return oracle.f_ell(p, t, ell, distinct=distinct,
                            max_cells=max_cells)[ell - 1]

    return sample


def f_ell_structure(p: PILP, ell: int, cfg: InferenceConfig | None = None,
                    mode: str = "direct", distinct: bool = False):
    """Certificate for f_ell(p, .), or NoFit (sampling route only).

    ``direct`` samples the enumeration oracle and fits.  ``constructive``
    assembles the certificate from the rewrite pipeline and validates it
    against the oracle on a window above its threshold.  ``cross`` runs
    both and insists they agree where both claim validity, returning the
    constructive certificate with the combined validation record.
    """
    cfg = cfg or InferenceConfig()
    sampler = oracle_sampler(p, ell, distinct=distinct)
    if mode == "direct":
        return infer_qp(sampler, cfg)
    if mode not in ("constructive", "cross"):
        raise ValueError(f"unknown mode {mode!r}")
    if distinct:
        raise ValueError("the constructive route counts with multiplicity")
    qp = constructive_qp(p, ell)
    validation = []
    for j in range(qp.period):
        base = qp.threshold + 1 + ((j - (qp.threshold + 1)) % qp.period)
        for i in range(cfg.validate_count):
            tv = base + i * qp.period
            predicted = qp_eval(qp, tv)
            actual = sampler(tv)
            ok = _values_equal(predicted, actual)
            validation.append(ValidationEntry(tv, predicted, actual, ok))
            if not ok:
                raise ConstructiveMismatchError(
                    f"constructed branch disagrees with enumeration at "
                    f"t={tv}: {predicted} vs {actual}")
    cert = EQPCertificate((qp), (), tuple(sorted(validation)), "constructive")
    if mode == "constructive":
        return cert
    direct = infer_qp(sampler, cfg)
    if isinstance(direct, NoFit):
        raise ConstructiveMismatchError(
            "sampling route found no fit where the constructive route "
            f"certifies one: {direct.reason}")
    joint = max(qp.threshold, direct.qp.threshold)
    period = lcm(qp.period, direct.qp.period)
    extra = []
    for i in range(max(2 * period, 10)):
        tv = joint + 1 + i
        a, b = qp_eval(qp, tv), qp_eval(direct.qp, tv)
        ok = _values_equal(a, b)
        extra.append(ValidationEntry(tv, a, b, ok))
        if not ok:
            raise ConstructiveMismatchError(
                f"routes disagree at t={tv}: {a} vs {b}")
    return EQPCertificate(
        qp, direct.samples_used,
        tuple(sorted((*validation, *extra))), "cross")


# ---------------------------------------------------------------------------
# Serialization


def certificate_to_json(cert: EQPCertificate) -> dict:
    return {
        "qp": qp_to_json(cert.qp),
        "samples_used": [[t, value_to_json(v)] for t, v in cert.samples_used],
        "validation": [
            [e.t, value_to_json(e.predicted), value_to_json(e.actual), e.match]
            for e in cert.validation],
        "mode": cert.mode,
    }


def certificate_from_json(d: dict) -> EQPCertificate:
    return EQPCertificate(
        qp_from_json(d["qp"]),
        tuple((t, value_from_json(v)) for t, v in d["samples_used"]),
        tuple(ValidationEntry(t, value_from_json(pr), value_from_json(ac), ok)
              for t, pr, ac, ok in d["validation"]),
        d.get("mode", "direct"),
    )


__all__ = [
    "ConstructiveMismatchError", "EQPCertificate", "InferenceConfig",
    "NoFit", "Sampler", "ValidationEntry", "VerifyReport",
    "certificate_from_json", "certificate_to_json", "constructive_qp",
    "eventually_empty_relaxation", "f_ell_structure", "infer_qp",
    "kth_of_eqps", "oracle_sampler", "verify_qp",
]

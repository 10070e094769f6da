"""Ground truth at a fixed parameter value, by exact computation only.

Two engines live here.  A dense two-phase simplex with Bland's rule,
generic over any exact ordered field (Fraction for concrete programs,
RationalFunction when deciding eventual feasibility), returning either an
optimal point, an unboundedness verdict, or a Farkas infeasibility
certificate that is re-verified before being returned.  And a depth-first
lattice enumerator with interval pruning that lists L(t) exactly, from
which the value lists f_1(t) >= f_2(t) >= ... are read off.

Everything downstream is tested against this module; nothing here depends
on the structural machinery it is used to check.
"""

from __future__ import annotations

import os
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .model import ConcreteILP, Form, PILP, instantiate
from .poly import BOTTOM

DEFAULT_MAX_CELLS = 10_000_000


def max_cells_limit(explicit=None) -> int:
    """Enumeration node budget; PILP_MAX_CELLS overrides the default."""
    if explicit is not None:
        return explicit
    return int(os.environ.get("PILP_MAX_CELLS", DEFAULT_MAX_CELLS))


class EnumerationBudgetError(RuntimeError):
    """Enumeration would visit more nodes than the configured budget."""


class UnboundedRelaxationError(RuntimeError):
    """The LP relaxation admits an unbounded ray at this t."""


# ---------------------------------------------------------------------------
# Exact simplex, generic over the scalar field


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPResult(NamedTuple):
    status: LPStatus
    x: tuple | None        # maximizer in original variables
    value: object | None   # objective at x
    farkas: tuple | None   # (y_ub, y_eq) certifying infeasibility


def solve_lp(c, a_ub, b_ub, a_eq, b_eq, *, nonneg=True, zero=Fraction(0),
             one=Fraction(1)) -> LPResult:
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq.

    ``nonneg`` is a bool or per-variable list; variables not marked

    nonnegative are free.  All entries must already live in one exact
    ordered field with ``zero`` and ``one`` as its constants; no floats.
    On infeasibility the returned Farkas pair (y_ub >= 0, y_eq) satisfies
    y.A >= 0 on nonnegative coordinates, y.A = 0 on free ones, y.b < 0,
    and is verified before being returned.
    """
    n = len(c)
    if isinstance(nonneg, bool):
        nonneg = [nonneg] * n
    # internal columns: x_j (and a negated twin for free variables)
    col_of = []          # per variable: (plus_col, minus_col or None)
    ncols = 0
    for j in range(n):
        if nonneg[j]:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2
    rows_in = [(row, rhs, True) for row, rhs in zip(a_ub, b_ub)]
    rows_in += [(row, rhs, False) for row, rhs in zip(a_eq, b_eq)]
    m = len(rows_in)
    nslack = sum(1 for *_, is_ub in rows_in if is_ub)
    width = ncols + nslack + m  # structural, slack, artificial
    art0 = ncols + nslack

    tab = []
    rhs_col = []
    flips = []
    si = 0
    for i, (row, rhs, is_ub) in enumerate(rows_in):
        line = [zero] * width
        for j, aij in enumerate(row):
            pc, mc = col_of[j]
            line[pc] = line[pc] + aij
            if mc is not None:
                line[mc] = line[mc] - aij
        if is_ub:
            line[ncols + si] = one
            si += 1
        if rhs < zero:
            line = [-v for v in line]
            rhs = -rhs
            flips.append(-1)
        else:
            flips.append(1)
        line[art0 + i] = one
        tab.append(line)
        rhs_col.append(rhs)
    basis = [art0 + i for i in range(m)]

    def pivot(pr: int, pc: int) -> None:
        piv = tab[pr][pc]
        tab[pr] = [v / piv for v in tab[pr]]
        rhs_col[pr] = rhs_col[pr] / piv
        prow, prhs = tab[pr], rhs_col[pr]
        for i in range(m):
            if i == pr:
                continue
            f = tab[i][pc]
            if f != zero:
                tab[i] = [v - f * w for v, w in zip(tab[i], prow)]
                rhs_col[i] = rhs_col[i] - f * prhs
        basis[pr] = pc

    def optimize(cost, allowed) -> str:
        """Bland iterations until optimal or unbounded for maximization."""
        while True:
            rc = list(cost)
            for i in range(m):
                cb = cost[basis[i]]
                if cb != zero:
                    row = tab[i]
                    for j in allowed:
                        if row[j] != zero:
                            rc[j] = rc[j] - cb * row[j]
            enter = -1
            for j in allowed:
                if rc[j] > zero:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave, best = -1, None
            for i in range(m):
                tie = tab[i][enter]
                if tie > zero:
                    ratio = rhs_col[i] / tie
                    if best is None or ratio < best or (
                            ratio == best and basis[i] < basis[leave]):
                        leave, best = i, ratio
            if leave < 0:
                return "unbounded"
            pivot(leave, enter)

    # phase 1: drive the artificial variables to zero
    cost1 = [zero] * width
    for k in range(art0, width):
        cost1[k] = zero - one
    optimize(cost1, range(width))
    infeas = zero
    for i in range(m):
        if basis[i] >= art0:
            infeas = infeas + rhs_col[i]
    if infeas > zero:
        # duals from the reduced costs over the artificial block
        rc = list(cost1)
        for i in range(m):
            cb = cost1[basis[i]]
            if cb != zero:
                row = tab[i]
                for j in range(art0, width):
                    if row[j] != zero:
                        rc[j] = rc[j] - cb * row[j]
        y = [(zero - one - rc[art0 + i]) * flips[i] for i in range(m)]
        nub = len(b_ub)
        y_ub, y_eq = tuple(y[:nub]), tuple(y[nub:])
        _check_farkas(y_ub, y_eq, a_ub, b_ub, a_eq, b_eq, nonneg, zero)
        return LPResult(LPStatus.INFEASIBLE, None, None, (y_ub, y_eq))

    # remove artificials from the basis; all-zero rows are redundant
    drop = []
    for i in range(m):
        if basis[i] < art0:
            continue
        pc = next((j for j in range(art0) if tab[i][j] != zero), None)
        if pc is None:
            drop.append(i)
        else:
            pivot(i, pc)
    for i in reversed(drop):
        del tab[i], rhs_col[i], basis[i]
    m = len(tab)

    cost2 = [zero] * width
    for j in range(n):
        pc, mc = col_of[j]
        cost2[pc] = cost2[pc] + c[j]
        if mc is not None:
            cost2[mc] = cost2[mc] - c[j]
    if optimize(cost2, range(art0)) == "unbounded":
        return LPResult(LPStatus.UNBOUNDED, None, None, None)
    point = [zero] * width
    for i in range(m):
        point[basis[i]] = rhs_col[i]
    x = []
    for j in range(n):
        pc, mc = col_of[j]
        x.append(point[pc] if mc is None else point[pc] - point[mc])
    value = zero
    for cj, xj in zip(c, x):
        value = value + cj * xj
    return LPResult(LPStatus.OPTIMAL, tuple(x), value, None)


def _check_farkas(y_ub, y_eq, a_ub, b_ub, a_eq, b_eq, nonneg, zero) -> None:
    """Assert the certificate really proves infeasibility; never trust pivots."""
    if any(v < zero for v in y_ub):
        raise AssertionError("farkas: negative multiplier on an inequality")
    n = len(nonneg)
    ys = list(y_ub) + list(y_eq)
    rows = list(a_ub) + list(a_eq)
    for j in range(n):
        wj = zero
        for yi, row in zip(ys, rows):
            if yi != zero:
                wj = wj + yi * row[j]
        if nonneg[j]:
            if wj < zero:
                raise AssertionError("farkas: combined row negative on x >= 0")
        elif wj != zero:
            raise AssertionError("farkas: combined row nonzero on a free variable")
    total = zero
    for yi, rhs in zip(ys, list(b_ub) + list(b_eq)):
        total = total + yi * rhs
    if not (total < zero):
        raise AssertionError("farkas: combined right side not negative")


class FeasibilityResult(NamedTuple):
    feasible: bool
    witness: tuple | None   # Fractions satisfying every constraint
    farkas: tuple | None


def lp_feasible_exact(a_eq=(), b_eq=(), a_ub=(), b_ub=(), n=None,
                      nonneg=True) -> FeasibilityResult:
    """Exact feasibility of {x : a_eq x = b_eq, a_ub x <= b_ub (, x >= 0)}.

    Entries may be ints or Fractions.  The witness is checked against every
    constraint before being returned.
    """
    if n is None:
        for row in (*a_eq, *a_ub):
            n = len(row)
            break
        else:
            n = 0
    conv = lambda row: tuple(Fraction(v) for v in row)
    a_eq = [conv(r) for r in a_eq]
    a_ub = [conv(r) for r in a_ub]
    b_eq = [Fraction(v) for v in b_eq]
    b_ub = [Fraction(v) for v in b_ub]
    res = solve_lp([Fraction(0)] * n, a_ub, b_ub, a_eq, b_eq, nonneg=nonneg)
    if res.status is LPStatus.INFEASIBLE:
        return FeasibilityResult(False, None, res.farkas)
    x = res.x
    for row, rhs in zip(a_eq, b_eq):
        assert sum(f * v for f, v in zip(row, x)) == rhs
    for row, rhs in zip(a_ub, b_ub):
        assert sum(f * v for f, v in zip(row, x)) <= rhs
    return FeasibilityResult(True, x, None)


# ---------------------------------------------------------------------------
# Lattice enumeration


def _le_rows(ilp: ConcreteILP) -> list[tuple[tuple, int]]:
    """Concrete constraints as <= rows (x >= 0 handled via variable bounds)."""
    rows = [(row, rhs) for row, rhs in zip(ilp.A, ilp.b)]
    if ilp.form.is_equality:
        rows += [(tuple(-a for a in row), -rhs) for row, rhs in zip(ilp.A, ilp.b)]
    return rows


def enumerate_lattice_points(ilp: ConcreteILP, box_bound: int,
                             max_cells=None) -> list[tuple[int, ...]]:
    """All points of L(t) with |x_i| <= box_bound, lexicographically sorted.

    Depth-first search with exact interval propagation: fixing a prefix
    narrows every remaining coordinate through each constraint row using
    worst-case tails over the box.  A node budget guards runaway inputs.
    """
    budget = max_cells_limit(max_cells)
    n = ilp.n
    nn = ilp.form.has_nonneg
    if n == 0:
        if ilp.form.is_equality:
            ok = all(v == 0 for v in ilp.b)
        else:
            ok = all(v >= 0 for v in ilp.b)
        return [()] if ok else []
    lo = [0 if nn else -box_bound] * n
    hi = [box_bound] * n
    rows = _le_rows(ilp)
    # tails[i][j] = least possible contribution of coordinates j.. to row i
    tails = []
    for row, _ in rows:
        suffix = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            a = row[j]
            suffix[j] = suffix[j + 1] + min(a * lo[j], a * hi[j])
        tails.append(suffix)

    out: list[tuple[int, ...]] = []
    point = [0] * n
    visited = 0

    def descend(depth: int, residuals: list[int]) -> None:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise EnumerationBudgetError(
                f"enumeration exceeded {budget} nodes; raise PILP_MAX_CELLS")
        if depth == n:
            for (row, rhs) in rows:
                if sum(a * v for a, v in zip(row, point)) > rhs:
                    return
            out.append(tuple(point))
            return
        lo_d, hi_d = lo[depth], hi[depth]
        for i, (row, _) in enumerate(rows):
            a = row[depth]
            slack = residuals[i] - tails[i][depth + 1]
            if a > 0:
                hi_d = min(hi_d, slack // a)        # floor(slack / a)
            elif a < 0:
                lo_d = max(lo_d, -(slack // -a))    # ceil(slack / a)
            elif slack < 0:
                return
        for v in range(lo_d, hi_d + 1):
            point[depth] = v
            nxt = [r - row[depth] * v for (row, _), r in zip(rows, residuals)]
            descend(depth + 1, nxt)

    residuals = [rhs for _, rhs in rows]
    descend(0, residuals)
    return out


def relaxation_box(ilp: ConcreteILP):
    """Per-coordinate exact [lo, hi] over the LP relaxation, or None if empty.

    Raises UnboundedRelaxationError if any coordinate is unbounded; under
    the bounded assumption this should not happen, and when it does the
    value functions are not defined at this t.
    """
    n = ilp.n
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row, rhs in zip(ilp.A, ilp.b):
        row = tuple(Fraction(v) for v in row)
        if ilp.form.is_equality:
            a_eq.append(row)
            b_eq.append(Fraction(rhs))
        else:
            a_ub.append(row)
            b_ub.append(Fraction(rhs))
    nonneg = ilp.form.has_nonneg
    bounds = []
    for j in range(n):
        pair = []
        for sgn in (1, -1):
            c = [Fraction(0)] * n
            c[j] = Fraction(sgn)
            res = solve_lp(c, a_ub, b_ub, a_eq, b_eq, nonneg=nonneg)
            if res.status is LPStatus.INFEASIBLE:
                return None
            if res.status is LPStatus.UNBOUNDED:
                raise UnboundedRelaxationError(
                    f"coordinate {j} unbounded {'above' if sgn > 0 else 'below'}"
                    f" at t={ilp.t}")
            pair.append(sgn * res.value)
        bounds.append((pair[1], pair[0]))  # (min, max)
    return bounds


def _floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def _ceil(f: Fraction) -> int:
    return -((-f.numerator) // f.denominator)


def points_at(p: PILP, t: int, max_cells=None) -> list[tuple[int, ...]]:
    """L(t) exactly, via relaxation bounds plus pruned enumeration."""
    if t < 1:
        raise ValueError("parameter values start at t = 1")
    ilp = instantiate(p, t)
    if ilp.n == 0:
        return enumerate_lattice_points(ilp, 0, max_cells)
    bounds = relaxation_box(ilp)
    if bounds is None:
        return []
    box = 0
    for lo, hi in bounds:
        if _ceil(lo) > _floor(hi):
            return []
        box = max(box, abs(_floor(hi)), abs(_ceil(lo)))
    return enumerate_lattice_points(ilp, box, max_cells)


def f_ell(p: PILP, t: int, ell_max: int, distinct: bool = False,
          max_cells=None) -> list:
    """[f_1(t), ..., f_ell_max(t)], exact; BOTTOM pads a short value list.

    With ``distinct`` the list walks distinct attained values downward
    instead of counting multiplicity.
    """
    ilp = instantiate(p, t)
    pts = points_at(p, t, max_cells)
    values = sorted(
        (sum(cj * xj for cj, xj in zip(ilp.c, pt)) for pt in pts), reverse=True)
    if distinct:
        values = sorted(set(values), reverse=True)
    values = values[:ell_max]
    return values + [BOTTOM] * (ell_max - len(values))


def count_lattice_points(p: PILP, t: int, max_cells=None) -> int:
    return len(points_at(p, t, max_cells))


# ---------------------------------------------------------------------------
# Convex hull of a finite lattice point set


def hull_vertices(points) -> list[int]:
    """Indices of the vertices of conv(points), sorted ascending.

    A point is a vertex iff it is not a convex combination of the others;
    dimension two uses an exact monotone chain, every other dimension the
    membership LP directly.  Collinear interior points are never vertices.
    """
    pts = [tuple(int(v) for v in q) for q in points]
    if len(set(pts)) != len(pts):
        raise ValueError("hull_vertices requires pairwise distinct points")
    if not pts:
        return []
    dim = len(pts[0])
    if len(pts) == 1:
        return [0]
    if dim == 0:
        return [0]
    if dim == 1:
        imin = min(range(len(pts)), key=lambda i: pts[i])
        imax = max(range(len(pts)), key=lambda i: pts[i])
        return sorted({imin, imax})
    if dim == 2:
        return _hull_vertices_2d(pts)
    out = []
    for i, q in enumerate(pts):
        others = [r for k, r in enumerate(pts) if k != i]
        a_eq = [[1] * len(others)]
        b_eq = [1]
        for d in range(dim):
            a_eq.append([r[d] for r in others])
            b_eq.append(q[d])
        res = lp_feasible_exact(a_eq=a_eq, b_eq=b_eq, nonneg=True)
        if not res.feasible:
            out.append(i)
    return out


def _hull_vertices_2d(pts: list[tuple[int, int]]) -> list[int]:
    index = {q: i for i, q in enumerate(pts)}
    ordered = sorted(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        chain = []
        for q in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], q) <= 0:
                chain.pop()
            chain.append(q)
        return chain

    lower = half(ordered)
    upper = half(reversed(ordered))
    hull = lower[:-1] + upper[:-1]
    return sorted(index[q] for q in set(hull))


def convex_combination_witness(target, points):
    """Fractions lam >= 0 with sum 1 and sum lam_k p_k = target, or None."""
    if not points:
        return None
    dim = len(target)
    a_eq = [[1] * len(points)]
    b_eq = [1]
    for d in range(dim):
        a_eq.append([q[d] for q in points])
        b_eq.append(target[d])
    res = lp_feasible_exact(a_eq=a_eq, b_eq=b_eq, nonneg=True)
    return res.witness if res.feasible else None


def near_hyperplane(rows, x, ell: int) -> bool:
    """Whether x lies within distance ell of some row's hyperplane a.y = b.

    ``rows`` are concrete (coefficient tuple, rhs) pairs.  The test
    |a.x - b| < ell * |a| is squared to stay in integers; zero rows never
    count (they have no hyperplane).
    """
    for row, rhs in rows:
        norm2 = sum(a * a for a in row)
        if norm2 == 0:
            continue
        gap = sum(a * v for a, v in zip(row, x)) - rhs
        if gap * gap < ell * ell * norm2:
            return True
    return False


__all__ = [
    "DEFAULT_MAX_CELLS", "EnumerationBudgetError", "FeasibilityResult",
    "LPResult", "LPStatus", "UnboundedRelaxationError",
    "convex_combination_witness", "count_lattice_points",
    "enumerate_lattice_points", "f_ell", "hull_vertices", "lp_feasible_exact",
    "max_cells_limit", "near_hyperplane", "points_at", "relaxation_box",
    "solve_lp",
]

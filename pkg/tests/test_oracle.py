"""Exact LP solving, lattice enumeration, and hull extraction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilp.model import Form, PILP
from pilp.oracle import (
    EnumerationBudgetError, LPStatus, UnboundedRelaxationError,
    convex_combination_witness, count_lattice_points, f_ell, hull_vertices,
    lp_feasible_exact, near_hyperplane, points_at, solve_lp,
)
from pilp.poly import BOTTOM, Poly, RF_ONE, RF_ZERO, RationalFunction
from pilp.programs import EXAMPLES

T = Poly((0, 1))
F = Fraction


class TestSolveLp:
    def test_optimal_with_exact_value(self):
        # max x1 + x2 with x1 + 2x2 <= 4, 3x1 + x2 <= 6, x >= 0
        res = solve_lp([F(1), F(1)], [[F(1), F(2)], [F(3), F(1)]],
                       [F(4), F(6)], [], [])
        assert res.status is LPStatus.OPTIMAL
        assert res.value == F(14, 5)
        assert res.x == (F(8, 5), F(6, 5))

    def test_infeasible_produces_checkable_farkas(self):
        # x1 + x2 <= -1 with x >= 0 has no solution
        a_ub, b_ub = [[F(1), F(1)]], [F(-1)]
        res = solve_lp([F(0), F(0)], a_ub, b_ub, [], [])
        assert res.status is LPStatus.INFEASIBLE
        y_ub, y_eq = res.farkas
        assert y_eq == () and all(y >= 0 for y in y_ub)
        # y^T A >= 0 componentwise (nonneg variables), y^T b < 0
        for j in range(2):
            assert sum(y * a_ub[i][j] for i, y in enumerate(y_ub)) >= 0
        assert sum(y * b for y, b in zip(y_ub, b_ub)) < 0

    def test_unbounded_detected(self):
        res = solve_lp([F(1)], [], [], [], [])
        assert res.status is LPStatus.UNBOUNDED

    def test_equality_rows(self):
        res = solve_lp([F(1), F(0)], [], [], [[F(1), F(1)]], [F(5)])
        assert res.status is LPStatus.OPTIMAL and res.value == F(5)

    def test_free_variables(self):
        res = solve_lp([F(1)], [[F(1)], [F(-1)]], [F(3), F(3)], [], [],
                       nonneg=False)
        assert res.value == F(3)
        res2 = solve_lp([F(-1)], [[F(1)], [F(-1)]], [F(3), F(3)], [], [],
                        nonneg=False)
        assert res2.x == (F(-3),)

    def test_generic_field_rational_functions(self):
        """The same pivoting runs over the field of rational functions."""
        rf_t = RationalFunction.of(T)
        res = solve_lp([RF_ONE], [[RF_ONE]], [rf_t], [], [],
                       zero=RF_ZERO, one=RF_ONE)
        assert res.status is LPStatus.OPTIMAL
        assert res.value == rf_t


def test_lp_feasible_exact_witness():
    res = lp_feasible_exact(a_eq=[[1, 1]], b_eq=[3], nonneg=True)
    assert res.feasible
    x = res.witness
    assert x[0] + x[1] == 3 and all(v >= 0 for v in x)
    assert not lp_feasible_exact(a_ub=[[1]], b_ub=[-2], nonneg=True).feasible


class TestEnumeration:
    def test_simplex_counts(self):
        for t in (1, 4, 9):
            assert count_lattice_points(EXAMPLES["simplex"], t) \
                == (t + 1) * (t + 2) // 2

    def test_square_counts(self):
        for t in (1, 3, 7):
            assert count_lattice_points(EXAMPLES["square"], t) == (t + 1) ** 2

    def test_points_are_sorted_and_unique(self):
        pts = points_at(EXAMPLES["triangle"], 6)
        assert pts == sorted(set(pts))

    def test_negative_coordinates_reached(self):
        pts = points_at(EXAMPLES["interval"], 3)
        assert pts == [(-3,), (-2,), (-1,), (0,), (1,), (2,), (3,)]

    def test_empty_programs(self):
        assert points_at(EXAMPLES["infeasible"], 9) == []
        assert points_at(EXAMPLES["parity-gap"], 9) == []

    def test_parameter_must_be_positive(self):
        with pytest.raises(ValueError):
            points_at(EXAMPLES["floor"], 0)

    def test_unbounded_relaxation_raises(self):
        free = PILP(Form.GENERAL, 1, 1, [(0,)], [T], [1], bounded=False)
        with pytest.raises(UnboundedRelaxationError):
            points_at(free, 4)

    def test_budget_cap(self):
        with pytest.raises(EnumerationBudgetError):
            points_at(EXAMPLES["square"], 50, max_cells=10)

    def test_env_var_budget(self, monkeypatch):
        monkeypatch.setenv("PILP_MAX_CELLS", "10")
        with pytest.raises(EnumerationBudgetError):
            points_at(EXAMPLES["square"], 50)

    def test_zero_variable_enumeration(self):
        p = PILP(Form.GENERAL, 0, 1, [()], [T - 3], [])
        assert points_at(p, 3) == [()]    # 0 <= 0 holds
        assert points_at(p, 2) == []


class TestFEll:
    def test_simplex_values_with_multiplicity(self):
        assert f_ell(EXAMPLES["simplex"], 5, 6) == [5, 4, 4, 3, 3, 3]

    def test_distinct_walks_values(self):
        assert f_ell(EXAMPLES["simplex"], 5, 6, distinct=True) \
            == [5, 4, 3, 2, 1, 0]

    def test_bottom_padding(self):
        assert f_ell(EXAMPLES["floor"], 1, 4) == [0, BOTTOM, BOTTOM, BOTTOM]
        assert f_ell(EXAMPLES["infeasible"], 3, 2) == [BOTTOM, BOTTOM]

    def test_floor_objective(self):
        for t in (7, 8, 9, 10):
            assert f_ell(EXAMPLES["floor"], t, 1) == [t // 2]


class TestHullVertices:
    def test_square_corners(self):
        pts = [(x, y) for x in range(4) for y in range(4)]
        idx = hull_vertices(pts)
        assert [pts[i] for i in idx] == [(0, 0), (0, 3), (3, 0), (3, 3)]

    def test_collinear_interior_points_dropped(self):
        pts = [(0,), (1,), (2,), (5,)]
        assert [pts[i] for i in hull_vertices(pts)] == [(0,), (5,)]

    def test_single_point(self):
        assert hull_vertices([(2, 2)]) == [0]

    def test_duplicate_points_rejected(self):
        with pytest.raises(ValueError):
            hull_vertices([(0, 0), (0, 0)])

    @given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
                    min_size=1, max_size=12, unique=True))
    @settings(max_examples=60, deadline=None)
    def test_vertices_characterized_by_combinations(self, pts):
        """x is a non-vertex iff it is a convex combination of the others."""
        idx = set(hull_vertices(pts))
        for i, x in enumerate(pts):
            others = [q for j, q in enumerate(pts) if j != i]
            witness = convex_combination_witness(x, others)
            if i in idx:
                assert witness is None
            else:
                assert witness is not None
                assert sum(witness) == 1
                for d in range(2):
                    assert sum(l * q[d] for l, q in zip(witness, others)) \
                        == x[d]


def test_near_hyperplane_squared_distance():
    rows = [((1, 1), 10)]
    assert near_hyperplane(rows, (5, 5), 1)        # on the plane
    assert near_hyperplane(rows, (5, 4), 1)        # distance 1/sqrt(2)
    assert not near_hyperplane(rows, (4, 4), 1)    # distance sqrt(2)
    assert near_hyperplane(rows, (4, 4), 3)
    assert not near_hyperplane([((0, 0), 5)], (1, 1), 9)

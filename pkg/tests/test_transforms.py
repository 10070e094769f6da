"""Constructive rewrites: slack, translation, digits, layers, projection."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilp import oracle
from pilp.model import Form, InvalidProgramError, PILP
from pilp.poly import BOTTOM, Poly, ZERO
from pilp.programs import EXAMPLES
from pilp.transforms import (
    AffineParamMap, HyperplaneSpec, bezout_certificate,
    canonical_to_standard_slack, digit_manifest,
    general_to_canonical_translate, hyperplane_layers, kernel_lattice_basis,
    project_to_hyperplane, standard_to_reduced_digits,
)

T = Poly((0, 1))


def objective(p, t, x):
    return sum(int(ci(t)) * xi for ci, xi in zip(p.c, x))


class TestAffineParamMap:
    def test_apply_is_affine(self):
        m = AffineParamMap(((T, 0), (0, 1)), (1, ZERO))
        assert m.apply(3, (2, 5)) == (7, 5)

    def test_residue_gates_application(self):
        m = AffineParamMap(((1,),), (ZERO,), residue=(0, 2))
        assert m.accepts(4) and not m.accepts(5)
        with pytest.raises(ValueError):
            m.apply(5, (1,))

    def test_non_integral_image_rejected(self):
        m = AffineParamMap(((1,),), (Poly((Fraction(1, 2),)),))
        with pytest.raises(ValueError):
            m.apply(2, (0,))


class TestSlack:
    @pytest.mark.parametrize("name", ["floor", "simplex", "triangle"])
    def test_bijection_with_equal_objective(self, name):
        p = EXAMPLES[name]
        res = canonical_to_standard_slack(p)
        assert res.pilp.form is Form.STANDARD
        assert res.pilp.n == p.n + p.m
        for t in (2, 5, 8):
            src = oracle.points_at(p, t)
            images = [res.embed.apply(t, x) for x in src]
            assert sorted(images) == oracle.points_at(res.pilp, t)
            for x, y in zip(src, images):
                assert y[:p.n] == x
                assert objective(p, t, x) == objective(res.pilp, t, y)

    def test_wrong_form_rejected(self):
        with pytest.raises(InvalidProgramError):
            canonical_to_standard_slack(EXAMPLES["digits"])


class TestTranslate:
    def test_interval_shifts_into_the_nonneg_orthant(self):
        p = EXAMPLES["interval"]
        res = general_to_canonical_translate(p)
        assert res.pilp.form is Form.CANONICAL
        assert res.r == 2
        for t in range(res.threshold + 1, res.threshold + 5):
            can = oracle.points_at(res.pilp, t)
            images = [res.back.apply(t, y) for y in can]
            assert sorted(images) == oracle.points_at(p, t)
            # objective values carry over up to the announced shift
            f_can = max(objective(res.pilp, t, y) for y in can)
            f_gen = max(objective(p, t, x) for x in oracle.points_at(p, t))
            assert f_gen == f_can - res.value_shift(t)

    def test_explicit_exponent(self):
        res = general_to_canonical_translate(EXAMPLES["interval"], r=3)
        assert res.r == 3 and res.value_shift == Poly((0, 0, 0, 1))

    def test_wrong_form_rejected(self):
        with pytest.raises(InvalidProgramError):
            general_to_canonical_translate(EXAMPLES["floor"])


class TestDigits:
    def test_parts_partition_the_digit_box(self):
        p = EXAMPLES["digits"]
        dec = standard_to_reduced_digits(p, 2)
        assert dec.r == 2
        assert all(part.pilp.form is Form.REDUCED_CANONICAL
                   for part in dec.parts)
        for t in (7, 10, 13):
            box = t ** dec.r
            inside = {x for x in oracle.points_at(p, t)
                      if all(0 <= v < box for v in x)}
            seen = {}
            for part in dec.parts:
                for y in oracle.points_at(part.pilp, t):
                    assert y not in seen          # disjoint
                    seen[y] = dec.inverse_map.apply(t, y)
            assert sorted(seen.values()) == sorted(inside)
            assert len(set(seen.values())) == len(seen)
            for y, x in seen.items():
                carried = sum(
                    int(dec.objective_digit(v // dec.r, v % dec.r)(t)) * y[v]
                    for v in range(p.n * dec.r))
                assert carried == objective(p, t, x)

    def test_default_exponent_comes_from_coordinate_bound(self):
        dec = standard_to_reduced_digits(EXAMPLES["digits"])
        assert dec.r == 4
        assert dec.covers_all

    def test_empty_source_gives_empty_parts(self):
        dec = standard_to_reduced_digits(EXAMPLES["parity-gap"], 2)
        for t in (4, 5):
            for part in dec.parts:
                assert oracle.points_at(part.pilp, t) == []

    def test_manifest_shape(self):
        dec = standard_to_reduced_digits(EXAMPLES["digits"], 2)
        m = digit_manifest(dec)
        assert m["r"] == 2
        assert len(m["parts"]) == len(dec.parts)
        assert len(m["objective_digits"]) == dec.source.n * dec.r

    def test_wrong_form_rejected(self):
        with pytest.raises(InvalidProgramError):
            standard_to_reduced_digits(EXAMPLES["floor"], 2)


class TestLayers:
    def test_simplex_layer_counts(self):
        dec = hyperplane_layers(EXAMPLES["simplex"], 2)
        assert dec.c == (3, 2, 2)
        assert len(dec.layers) == 7
        assert not dec.eventually_empty

    def test_each_layer_sits_on_its_hyperplane(self):
        dec = hyperplane_layers(EXAMPLES["simplex"], 2)
        t = 12
        for lay in dec.layers:
            coefs, rhs = lay.row
            want = int(rhs(t)) - lay.k
            for x in oracle.points_at(lay.pilp, t):
                assert sum(a * v for a, v in zip(coefs, x)) == want

    def test_layers_disjoint_and_inside_source(self):
        p = EXAMPLES["triangle"]
        dec = hyperplane_layers(p, 2)
        t = 11
        src = set(oracle.points_at(p, t))
        seen = set()
        for lay in dec.layers:
            pts = set(oracle.points_at(lay.pilp, t))
            assert pts <= src
            assert not (pts & seen)
            seen |= pts

    @pytest.mark.parametrize("t", [12, 13, 20])
    def test_top_values_live_on_layers(self, t):
        """The ell0 best source values all appear in the layer multiset."""
        p = EXAMPLES["simplex"]
        ell0 = 3
        dec = hyperplane_layers(p, ell0)
        want = oracle.f_ell(p, t, ell0)
        pool = []
        for lay in dec.layers:
            pool.extend(v for v in oracle.f_ell(lay.pilp, t, ell0)
                        if v is not BOTTOM)
        pool.sort(reverse=True)
        assert pool[:ell0] == want

    def test_eventually_empty_flag(self):
        # a zero row reading 0 <= -t fails for every positive t
        p = PILP(Form.CANONICAL, 1, 2, [(0,), (1,)], [-T, T], [1])
        dec = hyperplane_layers(p, 1)
        assert dec.eventually_empty

    def test_wrong_form_rejected(self):
        with pytest.raises(InvalidProgramError):
            hyperplane_layers(EXAMPLES["digits"], 1)


class TestProjection:
    def test_even_sum_residue_and_bijection(self):
        p = EXAMPLES["even-sum"]
        spec = HyperplaneSpec((2, 2), T, 0)
        proj = project_to_hyperplane(p, spec)
        assert proj.residue == (0, 2)
        assert proj.reduced.n == 1
        for t in (10, 12):
            pinned = sorted(
                x for x in oracle.points_at(p, t)
                if 2 * x[0] + 2 * x[1] == t)
            images = [proj.back.apply(t, y)
                      for y in oracle.points_at(proj.reduced, t)]
            assert sorted(images) == pinned
            for y in oracle.points_at(proj.reduced, t):
                v0 = objective(proj.reduced, t, y)
                assert proj.recover_value(v0, t) \
                    == objective(p, t, proj.back.apply(t, y))

    def test_odd_parameters_carry_no_points(self):
        p = EXAMPLES["even-sum"]
        for t in (9, 11):
            assert all(2 * x[0] + 2 * x[1] != t
                       for x in oracle.points_at(p, t))

    def test_never_satisfiable_hyperplane(self):
        spec = HyperplaneSpec((2, 2), Poly((1, 2)), 0)   # 2x1+2x2 = 2t+1
        proj = project_to_hyperplane(EXAMPLES["even-sum"], spec)
        assert proj.never and proj.reduced is None

    def test_offset_slab(self):
        p = EXAMPLES["simplex"]
        spec = HyperplaneSpec((1, 1), T, 1)    # x1 + x2 = t - 1
        proj = project_to_hyperplane(p, spec)
        assert proj.residue == (0, 1)
        t = 9
        pinned = sorted(x for x in oracle.points_at(p, t)
                        if x[0] + x[1] == t - 1)
        images = sorted(proj.back.apply(t, y)
                        for y in oracle.points_at(proj.reduced, t))
        assert images == pinned


ivecs = st.lists(st.integers(-12, 12), min_size=1, max_size=4)


def _det(mat):
    n = len(mat)
    rows = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col] * inv
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


class TestLatticeBasis:
    @given(ivecs.filter(lambda a: any(a)))
    @settings(max_examples=80)
    def test_bezout_reaches_the_gcd(self, a):
        from math import gcd
        g, beta = bezout_certificate(tuple(a))
        want = 0
        for v in a:
            want = gcd(want, v)
        assert g == want
        assert sum(x * y for x, y in zip(a, beta)) == g

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            bezout_certificate((0, 0))

    @given(ivecs.filter(lambda a: any(a)))
    @settings(max_examples=80)
    def test_kernel_basis_is_orthogonal_and_unimodular(self, a):
        g, beta = bezout_certificate(tuple(a))
        kernel = kernel_lattice_basis(tuple(a))
        assert len(kernel) == len(a) - 1
        for k in kernel:
            assert sum(x * y for x, y in zip(a, k)) == 0
        cols = [beta] + list(kernel)
        mat = [[cols[j][i] for j in range(len(a))] for i in range(len(a))]
        assert abs(_det(mat)) == 1

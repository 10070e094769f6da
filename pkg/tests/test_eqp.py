"""Certificate inference, combination, and the constructive route."""

from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilp import oracle
from pilp.eqp import (
    ConstructiveMismatchError, EQPCertificate, InferenceConfig, NoFit,
    certificate_from_json, certificate_to_json, constructive_qp,
    eventually_empty_relaxation, f_ell_structure, infer_qp, kth_of_eqps,
    oracle_sampler, verify_qp,
)
from pilp.model import Form, PILP
from pilp.poly import (
    BOTTOM, Poly, QuasiPolynomial, ThresholdError, ZERO, qp_eval,
    qp_equivalent,
)
from pilp.programs import EXAMPLES

T = Poly((0, 1))
HALF = Fraction(1, 2)


def test_config_needs_two_validation_points():
    with pytest.raises(ValueError):
        InferenceConfig(validate_count=1)


class TestInferQp:
    def test_halving_sequence(self):
        cert = infer_qp(lambda t: t // 2)
        assert isinstance(cert, EQPCertificate)
        assert cert.qp.period == 2
        assert cert.qp.branches == (Poly((0, HALF)), Poly((-HALF, HALF)))
        assert all(e.match for e in cert.validation)
        for t in range(cert.qp.threshold + 1, cert.qp.threshold + 40):
            assert qp_eval(cert.qp, t) == t // 2

    def test_gcd_with_six(self):
        cert = infer_qp(lambda t: gcd(t, 6))
        assert cert.qp.period == 6
        assert cert.qp.branches == tuple(
            Poly((v,)) for v in (6, 1, 2, 3, 2, 1))

    def test_constant_sequence(self):
        cert = infer_qp(lambda t: 42)
        assert cert.qp.period == 1
        assert cert.qp.branches == (Poly((42,)),)

    def test_pure_polynomial(self):
        cert = infer_qp(lambda t: t ** 3 - 2 * t)
        assert cert.qp.period == 1
        assert cert.qp.branches == (Poly((0, -2, 0, 1)),)

    def test_square_root_never_fits(self):
        res = infer_qp(isqrt, InferenceConfig(d_max=4, t_cap=400))
        assert isinstance(res, NoFit)
        assert res.tried
        assert "400" in res.reason

    def test_degree_cap_respected(self):
        res = infer_qp(lambda t: t ** 5, InferenceConfig(deg_max=4, t_cap=200))
        assert isinstance(res, NoFit)

    def test_bottom_classes(self):
        half_or_nothing = PILP(Form.STANDARD, 2, 1, [(2, 2)], [T], [1, 0])
        cert = infer_qp(oracle_sampler(half_or_nothing, 1))
        assert cert.qp.period == 2
        assert cert.qp.branches[0] == Poly((0, HALF))
        assert cert.qp.branches[1] is BOTTOM

    def test_samples_are_recorded_in_order(self):
        cert = infer_qp(lambda t: t)
        ts = [t for t, _ in cert.samples_used]
        assert ts == sorted(ts) and len(set(ts)) == len(ts)


class TestVerifyQp:
    def test_accepts_the_true_function(self):
        cert = infer_qp(lambda t: t // 3)
        report = verify_qp(cert, lambda t: t // 3,
                           range(cert.qp.threshold + 1, cert.qp.threshold + 60))
        assert report.passed and report.checked == 59

    def test_zero_tolerance(self):
        qp = QuasiPolynomial(1, 0, (T,))
        report = verify_qp(qp, lambda t: t + (t == 7), range(1, 11))
        assert not report.passed
        assert report.mismatches == ((7, 7, 8),)

    def test_below_threshold_refused(self):
        qp = QuasiPolynomial(1, 5, (T,))
        with pytest.raises(ThresholdError):
            verify_qp(qp, lambda t: t, range(5, 8))


branch_polys = st.one_of(
    st.none().map(lambda _: BOTTOM),
    st.tuples(st.integers(-4, 4), st.integers(-2, 2)).map(Poly))
small_qps = st.builds(
    lambda branches, thr: QuasiPolynomial(len(branches), thr, tuple(branches)),
    st.lists(branch_polys, min_size=1, max_size=3),
    st.integers(0, 3))


class TestKthOfEqps:
    @given(st.lists(small_qps, min_size=1, max_size=4), st.integers(1, 5))
    @settings(max_examples=120, deadline=None)
    def test_matches_pointwise_selection(self, fs, ell):
        combined = kth_of_eqps(fs, ell)
        lo = combined.threshold + 1
        for t in range(lo, lo + 2 * combined.period + 2):
            values = [qp_eval(f, t) for f in fs if t > f.threshold]
            assert len(values) == len(fs)
            finite = sorted((v for v in values if v is not BOTTOM),
                            reverse=True)
            want = finite[ell - 1] if ell <= len(finite) else BOTTOM
            assert qp_eval(combined, t) == want

    def test_empty_input_is_bottom(self):
        qp = kth_of_eqps([], 1)
        assert qp_eval(qp, 5) is BOTTOM

    def test_period_is_lifted_to_the_lcm(self):
        a = QuasiPolynomial(2, 0, (T, ZERO))
        b = QuasiPolynomial(3, 0, (ZERO, T, ZERO))
        assert kth_of_eqps([a, b], 1).period == 6


class TestEventuallyEmpty:
    def test_constant_conflict_found(self):
        empty, thr = eventually_empty_relaxation(EXAMPLES["infeasible"])
        assert empty
        for t in range(thr + 1, thr + 5):
            assert oracle.points_at(EXAMPLES["infeasible"], t) == []

    def test_zero_row_shortcut(self):
        p = PILP(Form.GENERAL, 1, 2, [(0,), (1,)], [-T, T], [1])
        empty, thr = eventually_empty_relaxation(p)
        assert empty and thr >= 0

    def test_feasible_program_not_flagged(self):
        assert eventually_empty_relaxation(EXAMPLES["simplex"]) == (False, 0)

    def test_one_sided_on_integer_only_emptiness(self):
        # the relaxation has rational points, so no emptiness is proven
        # even though the lattice is empty at every t
        assert eventually_empty_relaxation(EXAMPLES["parity-gap"])[0] is False


def check_against_oracle(p, ell, qp, width=30):
    lo = qp.threshold + 1
    for t in range(lo, lo + width):
        want = oracle.f_ell(p, t, ell)[ell - 1]
        assert qp_eval(qp, t) == want, (t, qp_eval(qp, t), want)


class TestConstructive:
    def test_floor_top_two(self):
        qp1 = constructive_qp(EXAMPLES["floor"], 1)
        assert qp_equivalent(
            qp1, QuasiPolynomial(2, 0, (Poly((0, HALF)), Poly((-HALF, HALF)))))
        check_against_oracle(EXAMPLES["floor"], 1, qp1)
        qp2 = constructive_qp(EXAMPLES["floor"], 2)
        check_against_oracle(EXAMPLES["floor"], 2, qp2)

    def test_simplex_top(self):
        qp = constructive_qp(EXAMPLES["simplex"], 1)
        assert qp_equivalent(qp, QuasiPolynomial(1, 0, (T,)))
        check_against_oracle(EXAMPLES["simplex"], 1, qp, width=20)

    def test_even_sum_alternates(self):
        qp = constructive_qp(EXAMPLES["even-sum"], 1)
        check_against_oracle(EXAMPLES["even-sum"], 1, qp, width=20)

    def test_general_form_via_translation(self):
        qp = constructive_qp(EXAMPLES["interval"], 1)
        assert qp_equivalent(qp, QuasiPolynomial(1, 0, (T,)))
        check_against_oracle(EXAMPLES["interval"], 1, qp, width=15)

    def test_infeasible_is_bottom(self):
        qp = constructive_qp(EXAMPLES["infeasible"], 1)
        assert all(b is BOTTOM for b in qp.branches)

    def test_degenerate_standard_origin_only(self):
        p = PILP(Form.STANDARD, 2, 1, [(1, 1)], [ZERO], [1, 0])
        assert qp_eval(constructive_qp(p, 1), 9) == 0
        assert qp_eval(constructive_qp(p, 2), 9) is BOTTOM

    def test_zero_variable_program(self):
        p = PILP(Form.GENERAL, 0, 1, [()], [T - 3], [])
        qp = constructive_qp(p, 1)
        for t in range(qp.threshold + 1, qp.threshold + 6):
            assert qp_eval(qp, t) == 0
        assert qp_eval(constructive_qp(p, 2), qp.threshold + 7) is BOTTOM


class TestFEllStructure:
    def test_direct_mode(self):
        cert = f_ell_structure(EXAMPLES["floor"], 1)
        assert cert.mode == "direct" and cert.samples_used

    def test_constructive_mode_validates(self):
        cert = f_ell_structure(EXAMPLES["floor"], 1, mode="constructive")
        assert cert.mode == "constructive"
        assert cert.samples_used == ()
        assert cert.validation and all(e.match for e in cert.validation)

    def test_cross_mode_merges_validation(self):
        cert = f_ell_structure(EXAMPLES["floor"], 1, mode="cross")
        assert cert.mode == "cross"
        assert all(e.match for e in cert.validation)

    def test_constructive_rejects_distinct(self):
        with pytest.raises(ValueError):
            f_ell_structure(EXAMPLES["floor"], 1, mode="constructive",
                            distinct=True)

    def test_mismatch_raises(self, monkeypatch):
        real = oracle.f_ell

        def lying_f_ell(p, t, ell_max, distinct=False, max_cells=None):
            out = real(p, t, ell_max, distinct, max_cells)
            return [v + 1 if v is not BOTTOM else v for v in out]

        monkeypatch.setattr(oracle, "f_ell", lying_f_ell)
        with pytest.raises(ConstructiveMismatchError):
            f_ell_structure(EXAMPLES["floor"], 1, mode="constructive")


def test_certificate_json_round_trip():
    cert = infer_qp(oracle_sampler(
        PILP(Form.STANDARD, 2, 1, [(2, 2)], [T], [1, 0]), 1))
    back = certificate_from_json(certificate_to_json(cert))
    assert back.qp == cert.qp
    assert back.samples_used == cert.samples_used
    assert back.validation == cert.validation
    assert back.mode == cert.mode

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marcum_integrals.errors import DomainError
from marcum_integrals.integrals import (
    IntegralityPolicy,
    Method,
    eval_b0,
    eval_f,
    eval_f_a0,
    eval_f_eq15,
    eval_f_k1,
    eval_f_thm3,
    eval_g,
    eval_g_a0,
    eval_g_thm1,
    eval_g_thm2,
    evaluate,
)
from marcum_integrals.marcum import marcum_q_zero_a
from marcum_integrals.oracle import oracle_f, oracle_g
from marcum_integrals.params import Family, IntegralSpec
from marcum_integrals.specfun import reg_upper

# scipy.integrate.quad (epsrel 1e-13) over integrands built from scipy.stats.ncx2
G_2_3_09_14_11 = 0.6389359849423709
G_25_2_1_15_08 = 0.8231963329910376
G_2_08_05_1_1 = 0.4035890558001879
G_05_3_0_2_025 = 2.0569217529030475
F_3_14_08_11_09 = 2.3683581735885637
F_175_2_13_16_07 = 1.4865209392033372
F_1_15_1_2_05 = 0.9678477170244819
F_33_4_0_17_06 = 13.62743531994245

ROOT2 = math.sqrt(2.0)


def g_spec(*args):
    return IntegralSpec(Family.G, *args)


def f_spec(*args):
    return IntegralSpec(Family.F, *args)


class TestGHumbertForm:
    def test_reduces_to_a_zero_case(self):
        assert eval_g_thm1(1, 1, 0.0, ROOT2, 1.0) == pytest.approx(0.5, rel=1e-13)

    @pytest.mark.parametrize("args, expected", [
        ((2.0, 3, 0.9, 1.4, 1.1), G_2_3_09_14_11),
        ((2.5, 2, 1.0, 1.5, 0.8), G_25_2_1_15_08),
    ])
    def test_frozen(self, args, expected):
        assert eval_g_thm1(*args) == pytest.approx(expected, rel=1e-9)

    def test_rejects_fractional_order(self):
        with pytest.raises(DomainError):
            eval_g_thm1(2.0, 1.5, 1.0, 1.0, 1.0)


class TestGFiniteSum:
    def test_zero_b(self):
        assert eval_g_thm2(1, 1.5, 2.0, 0.0, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_agrees_with_theorem1(self):
        assert eval_g_thm2(3, 2, 1.2, 0.7, 1.5) == pytest.approx(
            eval_g_thm1(3, 2, 1.2, 0.7, 1.5), rel=1e-11)

    def test_fractional_order(self):
        assert eval_g_thm2(2, 0.8, 0.5, 1.0, 1.0) == pytest.approx(G_2_08_05_1_1, rel=1e-9)

    def test_rejects_fractional_k(self):
        with pytest.raises(DomainError):
            eval_g_thm2(2.5, 1.0, 1.0, 1.0, 1.0)


class TestEq15:
    def test_hand_value(self):
        assert eval_f_eq15(1, 1.0, ROOT2, ROOT2, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_zero_b(self):
        assert eval_f_eq15(2, 2.0, 1.7, 0.0, 2.0) == pytest.approx(0.25, rel=1e-15)

    def test_frozen(self):
        assert eval_f_eq15(3, 1.4, 0.8, 1.1, 0.9) == pytest.approx(F_3_14_08_11_09, rel=1e-9)


class TestFHumbertForm:
    def test_a_zero(self):
        assert eval_f_thm3(1.5, 1, 0.0, 1.0, 1.0) == pytest.approx(
            math.gamma(1.5) * math.exp(-0.5), rel=1e-14)

    def test_agrees_with_eq15(self):
        assert eval_f_thm3(2, 3, 1.1, 0.9, 1.2) == pytest.approx(
            eval_f_eq15(2, 3, 1.1, 0.9, 1.2), rel=1e-11)

    def test_frozen(self):
        assert eval_f_thm3(1.75, 2, 1.3, 1.6, 0.7) == pytest.approx(F_175_2_13_16_07, rel=1e-9)


class TestLemma1:
    def test_hand_value(self):
        assert eval_f_k1(1.0, ROOT2, ROOT2, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_a_zero_limit(self):
        assert eval_f_k1(2.0, 0.0, 1.0, 1.0) == pytest.approx(reg_upper(2.0, 0.5), rel=1e-15)
        assert eval_f_k1(2.0, 1e-9, 1.0, 1.0) == pytest.approx(reg_upper(2.0, 0.5), rel=1e-12)

    def test_frozen(self):
        assert eval_f_k1(1.5, 1.0, 2.0, 0.5) == pytest.approx(F_1_15_1_2_05, rel=1e-10)

    @pytest.mark.parametrize("m", [0.5, 1.0, 2.3, 4.0])
    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.5, 3.0), (3.0, 1.5), (3.0, 3.0)])
    @pytest.mark.parametrize("p", [0.3, 4.0])
    def test_equals_eq15(self, m, a, b, p):
        assert eval_f_k1(m, a, b, p) == pytest.approx(eval_f_eq15(1, m, a, b, p), rel=1e-12)


class TestLemma2:
    def test_g_trivial(self):
        assert eval_g_a0(1.0, 1, ROOT2, 1.0) == pytest.approx(0.5, rel=1e-15)

    def test_g_two_terms(self):
        assert eval_g_a0(2.0, 2, 1.0, 1.0) == pytest.approx(20.0 / 27.0, rel=1e-15)

    def test_g_frozen(self):
        assert eval_g_a0(0.5, 3, 2.0, 0.25) == pytest.approx(G_05_3_0_2_025, rel=1e-10)

    def test_f_trivial(self):
        assert eval_f_a0(1.0, 1, math.sqrt(2.0 * math.log(2.0)), 1.0) == pytest.approx(0.5)

    def test_f_zero_b(self):
        assert eval_f_a0(2.0, 1, 0.0, 2.0) == pytest.approx(0.25, rel=1e-15)

    def test_f_frozen(self):
        assert eval_f_a0(3.3, 4, 1.7, 0.6) == pytest.approx(F_33_4_0_17_06, rel=1e-10)

    @pytest.mark.parametrize("k", [0.5, 2.0, 3.3])
    @pytest.mark.parametrize("m", [1, 3])
    def test_f_is_scaled_marcum(self, k, m):
        expected = math.gamma(k) / 0.6 ** k * marcum_q_zero_a(m, 1.7)
        assert eval_f_a0(k, m, 1.7, 0.6) == pytest.approx(expected, rel=1e-14)


class TestLemma3:
    def test_unit(self):
        assert eval_b0(1.0, 1.0) == 1.0

    def test_square(self):
        assert eval_b0(2.0, 0.5) == pytest.approx(4.0, rel=1e-15)

    def test_log_domain(self):
        assert eval_b0(2.5, 1.3) == pytest.approx(
            math.exp(math.lgamma(2.5) - 2.5 * math.log(1.3)), rel=1e-15)


class TestDispatcher:
    def test_b_zero(self):
        out = eval_g(g_spec(2.0, 1.5, 1.0, 0.0, 1.0))
        assert out.method is Method.LEMMA3
        assert out.value == pytest.approx(1.0)

    def test_integer_k_prefers_finite_sum(self):
        assert eval_f(f_spec(2.0, 1.5, 1.0, 1.0, 1.0)).method is Method.EQ15
        assert eval_g(g_spec(2.0, 2.0, 1.0, 1.0, 1.0)).method is Method.THM2

    def test_integer_m_only(self):
        assert eval_f(f_spec(1.7, 2.0, 1.0, 1.0, 1.0)).method is Method.THM3
        assert eval_g(g_spec(1.7, 2.0, 1.0, 1.0, 1.0)).method is Method.THM1

    def test_lemmas(self):
        assert eval_f(f_spec(1.0, 1.7, 1.0, 1.0, 1.0)).method is Method.LEMMA1
        assert eval_f(f_spec(1.7, 2.0, 0.0, 1.0, 1.0)).method is Method.LEMMA2_F
        assert eval_g(g_spec(1.7, 2.0, 0.0, 1.0, 1.0)).method is Method.LEMMA2_G

    def test_no_closed_form(self):
        out = eval_f(f_spec(1.3, 1.7, 1.0, 1.0, 1.0))
        assert out.method is Method.ORACLE
        assert out.value == pytest.approx(oracle_f(f_spec(1.3, 1.7, 1.0, 1.0, 1.0)).value)

    def test_near_integer_within_policy(self):
        assert eval_f(f_spec(2.0 + 1e-11, 1.5, 1.0, 1.0, 1.0)).method is Method.EQ15
        loose = IntegralityPolicy(tol=1e-3)
        assert eval_f(f_spec(2.0004, 1.5, 1.0, 1.0, 1.0), loose).method is Method.EQ15
        assert eval_f(f_spec(2.0004, 1.5, 1.0, 1.0, 1.0)).method is Method.ORACLE

    def test_cancellation_reroutes_to_quadrature(self):
        # Gamma(k)/p^k is ~ 5e9 times the integral here
        out = eval_g(g_spec(8.0, 1.0, 0.5, 6.0, 0.2))
        assert out.method is Method.ORACLE
        assert out.fallback_from is Method.THM2

    def test_forced_method(self):
        spec = g_spec(3.0, 2.0, 1.2, 0.7, 1.5)
        assert evaluate(spec, method="Thm1").method is Method.THM1
        assert evaluate(spec, method=Method.ORACLE).value == pytest.approx(
            evaluate(spec).value, rel=1e-9)

    def test_forced_method_wrong_family(self):
        with pytest.raises(DomainError):
            evaluate(g_spec(3.0, 2.0, 1.2, 0.7, 1.5), method=Method.EQ15)

    def test_family_mismatch(self):
        with pytest.raises(DomainError):
            eval_g(f_spec(1.0, 1.0, 1.0, 1.0, 1.0))

    def test_policy_bounds(self):
        with pytest.raises(DomainError):
            IntegralityPolicy(tol=0.5)

    @pytest.mark.parametrize("args", [
        (0.0, 1.0, 1.0, 1.0, 1.0), (1.0, 0.3, 1.0, 1.0, 1.0), (1.0, 1.0, -1.0, 1.0, 1.0),
        (1.0, 1.0, 1.0, 1.0, 0.0), (1.0, 1.0, 1.0, math.nan, 1.0),
    ])
    def test_spec_validation(self, args):
        with pytest.raises(DomainError):
            g_spec(*args)


ks = st.floats(0.5, 5.0)
ms = st.sampled_from([1.0, 2.0, 3.0, 1.5, 2.7])
ab = st.floats(0.0, 3.0)
ps = st.floats(0.3, 4.0)


@given(ks, ms, ab, ab, ps, st.sampled_from([Family.G, Family.F]))
@settings(max_examples=60)
def test_bounded_by_gamma_ratio(k, m, a, b, p, family):
    out = evaluate(IntegralSpec(family, k, m, a, b, p))
    assert out.err_estimate >= 0.0
    assert -1e-12 <= out.value <= math.gamma(k) / p ** k * (1.0 + 1e-12)


@given(st.integers(1, 5), st.integers(1, 4), ab, st.floats(0.05, 3.0), ps)
@settings(max_examples=60)
def test_closed_forms_agree_with_quadrature(k, m, a, b, p):
    g = eval_g(g_spec(k, m, a, b, p)).value
    f = eval_f(f_spec(k, m, a, b, p)).value
    assert g == pytest.approx(oracle_g(g_spec(k, m, a, b, p)).value, rel=1e-8)
    assert f == pytest.approx(oracle_f(f_spec(k, m, a, b, p)).value, rel=1e-8)


@pytest.mark.parametrize("k, m, a, p", [(2.0, 1.0, 1.0, 1.0), (3.5, 2.0, 1.5, 0.3)])
def test_g_tends_to_gamma_ratio_as_b_vanishes(k, m, a, p):
    lead = math.gamma(k) / p ** k
    gaps = [lead - eval_g(g_spec(k, m, a, b, p)).value for b in (1e-1, 1e-2, 1e-3)]
    assert gaps[0] > gaps[1] > gaps[2] >= 0.0
    assert gaps[2] < 1e-5 * lead


@pytest.mark.parametrize("k, m, b, p", [(2.0, 1.0, 1.0, 1.0), (3.5, 2.0, 1.5, 0.3)])
def test_f_tends_to_scaled_marcum_as_a_vanishes(k, m, b, p):
    limit = math.gamma(k) / p ** k * reg_upper(m, 0.5 * b * b)
    gaps = [eval_f(f_spec(k, m, a, b, p)).value - limit for a in (1e-1, 1e-2, 1e-3)]
    assert gaps[0] > gaps[1] > gaps[2] >= 0.0

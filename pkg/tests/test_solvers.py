"""End-to-end structured forms: the worked small cases, cross-scheme and
cross-case identities, densities, reflection."""

import mpmath
import pytest
from gmpy2 import mpq

from jacobi_edge.errors import ParameterError, ResonanceError
from jacobi_edge.poly import Poly
from jacobi_edge.solvers import (JacobiParams, evaluate, frobenius_solution,
                                 gap_auto, gap_case1, gap_case2, gap_case3,
                                 gap_case3_frobenius, gap_case3_nested,
                                 pmax_auto, pmax_case1, pmax_case2,
                                 pmin_density, pmin_form)
from jacobi_edge.quadrature import quadrature_gap

from oracles import poly2d_gap


def test_params_validation():
    with pytest.raises(ParameterError):
        JacobiParams(0, 0, 0, 1)
    with pytest.raises(ParameterError):
        JacobiParams(2, -1, 0, 1)
    with pytest.raises(ParameterError):
        JacobiParams(2, 0, 0, 0)
    p = JacobiParams(3, mpq(-3, 4), 9, mpq(7, 8))
    assert p.exponent0 == 3 * mpq(1, 4) + mpq(7, 8) * 3


def test_case_classification():
    assert JacobiParams(2, mpq(1, 2), 3, mpq(9, 7)).admissible_cases() == ["case1"]
    p = JacobiParams(2, mpq(1, 2), mpq(3, 4), mpq(1, 2))
    assert p.admissible_cases() == ["case2"] and p.case2_k == 1
    assert JacobiParams(2, 1, mpq(17, 5), 3).admissible_cases() == ["case3"]
    assert JacobiParams(2, mpq(1, 3), mpq(1, 3), mpq(1, 3)).admissible_cases() == []


# -- case 1 -------------------------------------------------------------------

def test_case1_one_variable():
    form = gap_case1(JacobiParams(1, 0, 1, 2))
    assert form.exponent0 == 1
    assert form.gamma == (mpq(2), mpq(-1))         # s(2 - s)


def test_case1_two_variables_against_oracle():
    form = gap_case1(JacobiParams(2, 0, 1, 2))
    assert form.exponent0 == 4
    assert form.gamma == (mpq(6), mpq(-6), mpq(1))
    want = poly2d_gap(0, 1, 2)                     # exact monomial expansion
    got = {int(form.exponent0) + p: c for p, c in enumerate(form.gamma) if c}
    assert got == want
    # more oracle spot checks with other integer parameters
    for l1, l2, b in ((1, 2, 2), (0, 3, 4), (2, 1, 2)):
        f = gap_case1(JacobiParams(2, l1, l2, b))
        want = poly2d_gap(l1, l2, b)
        got = {int(f.exponent0) + p: c for p, c in enumerate(f.gamma) if c}
        assert got == want, (l1, l2, b)


def test_case1_sum_rule_exact():
    for n, l1, l2, b in ((3, mpq(-3, 4), 4, mpq(7, 8)),
                         (4, mpq(5, 2), 3, mpq(3, 2))):
        form = gap_case1(JacobiParams(n, l1, l2, b))
        assert sum(form.gamma, mpq(0)) == 1


def test_case1_lambda2_zero_degenerate():
    form = gap_case1(JacobiParams(3, mpq(1, 2), 0, mpq(5, 3)))
    assert form.gamma == (mpq(1),)
    with mpmath.workdps(30):
        v = form.value(mpq(1, 3))
        want = mpmath.power(mpmath.mpf(1) / 3, float(form.exponent0))
        assert abs(v - want) < 1e-25


def test_evaluate_worked_value():
    form = gap_case1(JacobiParams(2, 0, 1, 2))
    with mpmath.workdps(30):
        assert abs(evaluate(form, mpq(1, 2)) - mpmath.mpf(13) / 64) < 1e-27
        assert abs(evaluate(form, mpq(1)) - 1) < 1e-27
        assert evaluate(form, mpq(0)) == 0


def test_gap_monotone_on_grid():
    form = gap_case1(JacobiParams(3, mpq(-3, 4), 2, mpq(7, 8)))
    vals = [float(form.value(mpq(i, 100))) for i in range(101)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - 1) < 1e-12 and vals[0] == 0


# -- case 2 -------------------------------------------------------------------

def test_case2_zero_sweeps():
    form = gap_case2(mpq(1, 2), 1, 0, 2)      # lambda2 = -1/2
    assert form.p_poly == Poly([1]) and form.q_poly.is_zero()


def test_case2_one_variable_closed_form():
    form = gap_case2(0, 1, 1, 1)
    with mpmath.workdps(40):
        for num, den in ((1, 4), (1, 2), (9, 10)):
            got = form.value(mpq(num, den), 40)
            want = 1 - mpmath.power(1 - mpmath.mpf(num) / den, mpmath.mpf(3) / 2)
            assert abs(got - want) < 1e-30


def test_case2_rejects_bad_k():
    with pytest.raises(ParameterError):
        gap_case2(0, 4, 0, 2)          # lambda2 = -2


def test_case2_endpoint_rule():
    form = gap_case2(mpq(3, 2), mpq(3, 2), 2, 2)
    assert form.check_endpoint()


def test_case2_matches_case1_for_even_beta():
    f1 = gap_case1(JacobiParams(2, 0, 1, 2))
    f2 = gap_case2(0, 2, 2, 2)
    with mpmath.workdps(40):
        for j in range(1, 21):
            s = mpq(j, 21)
            assert abs(f1.value(s, 40) - f2.value(s, 40)) < 1e-10


# -- case 3 -------------------------------------------------------------------

def test_case3_one_variable_table():
    want = {(1, 0): mpq(-35, 8), (1, 1): mpq(21, 4), (1, 2): mpq(-15, 8)}
    # one variable: the table does not involve the repulsion exponent
    assert gap_case3_nested(JacobiParams(1, 2, mpq(1, 2), 1)).gamma_tilde == want
    assert gap_case3_frobenius(JacobiParams(1, 2, mpq(1, 2), 2)).gamma_tilde == want


def test_case3_two_variable_table():
    want = {(1, 0): mpq(-9), (1, 1): mpq(16), (1, 2): mpq(-9), (2, 0): mpq(1)}
    p = JacobiParams(2, 0, 1, 2)
    assert gap_case3_frobenius(p).gamma_tilde == want
    assert gap_case3_nested(p).gamma_tilde == want


def test_case3_matches_case1_after_basis_conversion():
    # integer lambda2 overlap: expand the edge table into powers of s and
    # compare exactly with the polynomial pipeline
    p = JacobiParams(2, 0, 1, 2)
    edge = gap_case3_nested(p)
    poly = {0: mpq(1)}
    for (q, l), c in edge.gamma_tilde.items():
        e = int(edge.class_exponent(q)) + l
        acc = [mpq(0)] * (e + 1)
        acc[0] = mpq(1)
        # multiply out (1-s)^e
        import math as _m
        for k in range(e + 1):
            acc[k] = mpq((-1) ** k * _m.comb(e, k))
        for k, v in enumerate(acc):
            poly[k] = poly.get(k, mpq(0)) + c * v
    f1 = gap_case1(p)
    want = {int(f1.exponent0) + k: v for k, v in enumerate(f1.gamma) if v}
    got = {k: v for k, v in poly.items() if v}
    assert got == want


def test_frobenius_solution_fixture():
    # hand-computed class q = 1 vectors for the two-variable table
    p = JacobiParams(2, 0, 1, 2)
    sol = frobenius_solution(p, 1)
    assert sol.mu_q == 2
    assert sol.coeff_vectors[0] == (1, mpq(2, 5), 0)
    assert sol.coeff_vectors[1] == (mpq(-16, 9), mpq(-4, 3), mpq(-4, 15))
    assert sol.coeff_vectors[2] == (1, mpq(13, 9), mpq(2, 3))


def test_frobenius_exponents():
    p = JacobiParams(4, 1, mpq(5, 3), 2)
    sol_top = frobenius_solution(p, 4)        # solution index 0
    assert sol_top.mu_q == 4 * (mpq(5, 3) + mpq(2) / 2 * 3 + 1)
    sol_bottom = frobenius_solution(p, 0) if False else None
    # class q = 0 is the trivial constant; mu at the other end vanishes
    from jacobi_edge.recurrence import coeffs as _coeffs
    rc = _coeffs(4, 4, 1, mpq(5, 3), 2, 0)
    assert rc.a_p + rc.b_p == 0


def test_cross_scheme_exact_agreement():
    p = JacobiParams(4, 2, mpq(7, 3), 2)
    ef = gap_case3_frobenius(p)
    en = gap_case3_nested(p)
    assert ef.exact and en.exact
    assert ef.gamma_tilde == en.gamma_tilde


def test_resonant_parameters_fall_back():
    # (3, 5, 1/2, 2): mu_0 - mu_2 = 9 lands inside the q = 1 offset range,
    # so the back-substitution pivot vanishes and the nested scheme takes
    # over
    p = JacobiParams(3, 5, mpq(1, 2), 2)
    with pytest.raises(ResonanceError):
        gap_case3_frobenius(p)
    auto = gap_case3(p)
    nested = gap_case3_nested(p)
    assert auto.gamma_tilde == nested.gamma_tilde


def test_odd_beta_goes_nested():
    # the single-solution identification fails for odd beta; the front
    # door must not even try the matrix route
    p = JacobiParams(3, 0, mpq(1, 2), 1)
    with pytest.raises(ParameterError):
        gap_case3_frobenius(p)
    auto = gap_case3(p)
    assert auto.gamma_tilde == gap_case3_nested(p).gamma_tilde


def test_case3_odd_beta_exact_and_oracle():
    p = JacobiParams(2, 1, mpq(1, 2), 3)
    form = gap_case3(p)
    assert form.exact
    assert form.sum_rule_defect() == 0
    for s in (mpq(1, 5), mpq(1, 2), mpq(4, 5)):
        assert abs(float(form.value(s)) - quadrature_gap(p, s)) < 1e-8


def test_case3_offset_bounds():
    p = JacobiParams(3, 2, mpq(17, 5), 2)
    form = gap_case3_nested(p)
    for (q, l) in form.gamma_tilde:
        assert 0 <= l <= form.l_max(q)


# -- densities ----------------------------------------------------------------

def test_pmax_case1_derivative_identity():
    d = pmax_case1(JacobiParams(2, 0, 1, 2))
    assert d.exponent == 3
    assert d.coeffs == (mpq(24), mpq(-6))


def test_pmax_case1_n1():
    d = pmax_case1(JacobiParams(1, 0, 1, 2))
    assert d.coeffs == (mpq(2),) and d.exponent == 0   # 2(1-s)


def test_pmax_normalization():
    d = pmax_case1(JacobiParams(2, 1, 2, 2))
    with mpmath.workdps(30):
        total = mpmath.quad(lambda x: d.value(x, 40), [0, 1])
        assert abs(total - 1) < 1e-10


def test_pmax_case2_one_variable_density():
    d = pmax_case2(mpq(1, 2), 1, 1, 1)      # lambda2 = 1/2
    with mpmath.workdps(30):
        for s in (mpq(1, 4), mpq(3, 5)):
            got = d.value(s, 40)
            sm = mpmath.mpf(s.numerator) / s.denominator
            want = (sm ** mpmath.mpf("0.5") * (1 - sm) ** mpmath.mpf("0.5")
                    / mpmath.beta(mpmath.mpf("1.5"), mpmath.mpf("1.5")))
            assert abs(got - want) < 1e-25


def test_pmax_case2_matches_gap_derivative():
    g = gap_case2(2, 3, 4, 2)
    d = pmax_case2(2, 3, 4, 2)
    with mpmath.workdps(50):
        h = mpmath.mpf("1e-10")
        for s0 in ("0.25", "0.5", "0.75"):
            s = mpmath.mpf(s0)
            numdiff = (g.value(s + h, 60) - g.value(s - h, 60)) / (2 * h)
            assert abs(numdiff - d.value(s, 60)) < 1e-8


def test_pmin_one_variable_is_the_weight_density():
    # a single eigenvalue: smallest == largest == the bare density
    p = JacobiParams(1, 2, 1, 2)
    with mpmath.workdps(30):
        for s in (mpq(1, 3), mpq(7, 10)):
            got = pmin_density(p, s)
            sm = mpmath.mpf(s.numerator) / s.denominator
            want = sm ** 2 * (1 - sm) / mpmath.beta(3, 2)
            assert abs(got - want) < 1e-24


def test_pmin_symmetric_weights_mirror_pmax():
    # symmetric weights: the spectrum reflects onto itself, so the
    # smallest-eigenvalue density is the mirror image of the largest's
    p = JacobiParams(2, 1, 1, 2)
    d = pmax_auto(p)
    with mpmath.workdps(30):
        for s in (mpq(1, 4), mpq(2, 3)):
            assert abs(pmin_density(p, s) - d.value(1 - s)) < 1e-24


def test_pmin_against_oracle_cdf():
    # P(min <= t) = 1 - P(no eigenvalue in (0, t)); differentiate the
    # oracle numerically and compare with the direct density
    p = JacobiParams(2, 2, 1, 2)
    h = 1e-5
    for t in (0.3, 0.55):
        cdf_hi = 1 - quadrature_gap(p.swapped(), 1 - (t + h))
        cdf_lo = 1 - quadrature_gap(p.swapped(), 1 - (t - h))
        numdiff = (cdf_hi - cdf_lo) / (2 * h)
        got = float(pmin_density(p, mpq(int(t * 100), 100)))
        assert abs(got - numdiff) < 5e-7, (t, got, numdiff)


def test_pmin_inadmissible_both_ways():
    p = JacobiParams(2, mpq(1, 3), mpq(1, 5), mpq(2, 7))
    with pytest.raises(ParameterError):
        pmin_form(p)


# -- front door / serialization ----------------------------------------------

def test_gap_auto_dispatch():
    assert gap_auto(JacobiParams(2, mpq(1, 2), 2, mpq(7, 8))).__class__.__name__ \
        == "PolyGapForm"
    assert gap_auto(JacobiParams(2, mpq(1, 2), mpq(3, 4), mpq(1, 2))).__class__.__name__ \
        == "HypGapForm"
    assert gap_auto(JacobiParams(2, 1, mpq(7, 5), 3)).__class__.__name__ \
        == "EdgeSeriesForm"
    with pytest.raises(ParameterError):
        gap_auto(JacobiParams(2, mpq(1, 3), mpq(1, 5), mpq(2, 7)))


def test_forms_serialize():
    f1 = gap_case1(JacobiParams(2, 0, 1, 2))
    d = f1.to_json()
    assert d["gamma"] == ["6", "-6", "1"] and d["exponent0"] == "4"
    f2 = gap_case2(0, 1, 1, 1)
    d2 = f2.to_json()
    assert d2["kind"] == "gap_hyp" and "norm" in d2
    f3 = gap_case3_nested(JacobiParams(2, 0, 1, 2))
    d3 = f3.to_json()
    assert {(r["q"], r["l"]) for r in d3["gamma_tilde"]} == \
        {(1, 0), (1, 1), (1, 2), (2, 0)}

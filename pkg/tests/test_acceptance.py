"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one line per criterion so the suite doubles as a
readable checklist (`pytest -s tests/test_acceptance.py`).  The heavy
structured forms are computed once per session and shared.
"""

import time

import mpmath
import numpy as np
import pytest
from gmpy2 import mpq

from jacobi_edge.circular import (check_monotone, circ_gap_even_beta,
                                  circ_gap_integer_beta)
from jacobi_edge.poly import Poly
from jacobi_edge.quadrature import circular_gap_quad, quadrature_gap
from jacobi_edge.recurrence import case1_seed_polynomial, sweep_poly
from jacobi_edge.solvers import (JacobiParams, gap_case1, gap_case2, gap_case3,
                                 gap_case3_frobenius, gap_case3_nested,
                                 pmax_auto, pmax_case1, pmax_case2)
from jacobi_edge.verification import mc_gap_check

SET_BUDGET_S = 600.0          # per-set runtime budget for the exact forms
MC_BUDGET_S = 300.0           # per-set runtime budget for the sampling gate

FIG1 = [
    ("fig1a", JacobiParams(7, mpq(-3, 4), 9, mpq(7, 8))),
    ("fig1b", JacobiParams(10, 2, 15, mpq(3, 2))),
    ("fig1c", JacobiParams(15, 5, 25, 5)),
]
# (label, n, beta, lambda1, k)
FIG2 = [
    ("fig2a", 5, mpq(1, 2), mpq(9), 6),
    ("fig2b", 9, mpq(8, 3), mpq(7), 10),
    ("fig2c", 18, mpq(5), mpq(16, 3), 16),
]
FIG3 = [
    ("fig3a", JacobiParams(6, 5, mpq(17, 3), 2)),
    ("fig3b", JacobiParams(11, 1, mpq(49, 5), 4)),
    ("fig3c", JacobiParams(25, 4, mpq(32, 9), 1)),
]


@pytest.fixture(scope="session")
def fig1_forms():
    out = {}
    for label, params in FIG1:
        t0 = time.time()
        out[label] = (params, gap_case1(params), time.time() - t0)
    return out


@pytest.fixture(scope="session")
def fig2_forms():
    out = {}
    for label, n, beta, lambda1, k in FIG2:
        t0 = time.time()
        out[label] = (gap_case2(lambda1, beta, k, n), time.time() - t0)
    return out


@pytest.fixture(scope="session")
def fig3_forms():
    out = {}
    for label, params in FIG3:
        t0 = time.time()
        out[label] = (params, gap_case3(params), time.time() - t0)
    return out


def test_criterion_1_exact_sum_rules(fig1_forms, fig3_forms):
    for label, (params, form, dt) in fig1_forms.items():
        assert sum(form.gamma, mpq(0)) == 1, label
        assert dt <= SET_BUDGET_S, (label, dt)
        print("ACCEPTANCE 1 [%s]: sum of gap coefficients == 1 exactly "
              "(%.1fs) PASS" % (label, dt))
    for label, (params, form, dt) in fig3_forms.items():
        defect = form.sum_rule_defect()
        if form.exact:
            assert defect == 0, label
        else:
            assert abs(float(defect)) <= 1e-10, label
        assert dt <= SET_BUDGET_S, (label, dt)
        print("ACCEPTANCE 1 [%s]: edge-series sum rule defect == %s "
              "(exact=%s, %.1fs) PASS" % (label, defect, form.exact, dt))


def test_criterion_2_endpoint_rule(fig2_forms):
    for label, (form, dt) in fig2_forms.items():
        with mpmath.workdps(form._dps() + 20):
            v = form.value(1 - mpmath.mpf("1e-6"), form._dps() + 20)
        defect = abs(float(v - 1))
        assert defect <= 1e-6, (label, defect)
        print("ACCEPTANCE 2 [%s]: |E(1-1e-6) - 1| = %.3g <= 1e-6 PASS"
              % (label, defect))


ORACLE_SETS = [
    # case 1, including the singular left endpoint
    ("case1", lambda n: (JacobiParams(n, mpq(-3, 4), 2, mpq(7, 8)),
                         gap_case1(JacobiParams(n, mpq(-3, 4), 2, mpq(7, 8))))),
    # case 2
    ("case2", lambda n: (JacobiParams(n, mpq(1, 2), mpq(3, 4), mpq(1, 2)),
                         gap_case2(mpq(1, 2), mpq(1, 2), 1, n))),
    # case 3, odd repulsion
    ("case3", lambda n: (JacobiParams(n, 1, mpq(1, 2), 3),
                         gap_case3(JacobiParams(n, 1, mpq(1, 2), 3)))),
]


def test_criterion_3_oracle_equivalence():
    for tag, make in ORACLE_SETS:
        for n in (1, 2, 3):
            params, form = make(n)
            worst = 0.0
            for s in (mpq(1, 5), mpq(1, 2), mpq(4, 5)):
                got = float(form.value(s))
                want = quadrature_gap(params, s)
                worst = max(worst, abs(got - want))
            assert worst <= 1e-8, (tag, n, worst)
            print("ACCEPTANCE 3 [%s n=%d]: max |pipeline - oracle| = %.2e "
                  "<= 1e-8 PASS" % (tag, n, worst))
    # the exact worked values
    f11 = gap_case1(JacobiParams(1, 0, 1, 2))
    assert f11.gamma == (mpq(2), mpq(-1))
    f22 = gap_case1(JacobiParams(2, 0, 1, 2))
    assert f22.gamma == (mpq(6), mpq(-6), mpq(1))
    with mpmath.workdps(30):
        assert abs(f22.value(mpq(1, 2)) - mpmath.mpf(13) / 64) < 1e-27
    e1 = gap_case3(JacobiParams(1, 2, mpq(1, 2), 1))
    assert e1.gamma_tilde == {(1, 0): mpq(-35, 8), (1, 1): mpq(21, 4),
                              (1, 2): mpq(-15, 8)}
    print("ACCEPTANCE 3 [worked values]: s(2-s), s^4(6-6s+s^2), 13/64, "
          "(-35/8, 21/4, -15/8) all exact PASS")


def test_criterion_4_cross_identities():
    # case (2) == case (1) for even beta at integer lambda2
    f1 = gap_case1(JacobiParams(3, mpq(1, 2), 2, 2))
    f2 = gap_case2(mpq(1, 2), 2, 3, 3)            # lambda2 = -1 + 3 = 2
    worst = 0.0
    with mpmath.workdps(50):
        for j in range(1, 21):
            s = mpq(j, 21)
            worst = max(worst, abs(float(f1.value(s, 50) - f2.value(s, 50))))
    assert worst <= 1e-10, worst
    print("ACCEPTANCE 4a: case2 == case1 at even beta, max dev %.2e "
          "<= 1e-10 PASS" % worst)
    # Frobenius == nested exactly at the stated parameters
    p = JacobiParams(4, 2, mpq(7, 3), 2)
    ef, en = gap_case3_frobenius(p), gap_case3_nested(p)
    assert ef.exact and en.exact and ef.gamma_tilde == en.gamma_tilde
    print("ACCEPTANCE 4b: Frobenius == nested exact table at "
          "(4, 2, 7/3, 2), %d entries PASS" % len(ef.gamma_tilde))
    # one polynomial pass == the terminating closed form exactly
    for n, l1, beta in ((3, mpq(1, 2), mpq(3)), (5, mpq(-3, 4), mpq(1))):
        assert sweep_poly(Poly([1]), n, l1, beta, 0) == \
            case1_seed_polynomial(n, l1, beta)
    print("ACCEPTANCE 4c: one pass == terminating closed form, "
          "coefficient by coefficient PASS")


def test_criterion_5_derivative_consistency():
    # exact polynomial identity: d/ds of the gap vs the direct density
    for params in (JacobiParams(2, 0, 1, 2), JacobiParams(3, mpq(1, 2), 2, 3),
                   JacobiParams(2, mpq(-3, 4), 3, mpq(7, 8))):
        gap = gap_case1(params)
        den = pmax_case1(params)           # raises if the identity fails
        lhs = Poly([(gap.exponent0 + p) * c for p, c in enumerate(gap.gamma)])
        edge = Poly([1])
        for _ in range(int(params.lambda2)):
            edge = edge * Poly([1, -1])
        assert lhs == edge * Poly(den.coeffs)
    print("ACCEPTANCE 5a: gap derivative == direct density, exact "
          "polynomial identity PASS")
    g = gap_case2(2, 3, 4, 2)
    d = pmax_case2(2, 3, 4, 2)
    worst = 0.0
    with mpmath.workdps(50):
        h = mpmath.mpf("1e-10")
        for s0 in ("0.2", "0.4", "0.6", "0.8"):
            s = mpmath.mpf(s0)
            numdiff = (g.value(s + h, 60) - g.value(s - h, 60)) / (2 * h)
            worst = max(worst, abs(float(numdiff - d.value(s, 60))))
    assert worst <= 1e-8, worst
    print("ACCEPTANCE 5b: assembled density vs numeric differentiation, "
          "max dev %.2e <= 1e-8 PASS" % worst)


def test_criterion_6_monte_carlo_reproduction(fig1_forms, fig2_forms,
                                              fig3_forms):
    jobs = []
    for label, (params, form, _) in fig1_forms.items():
        jobs.append((label, params, form))
    for (label, n, beta, lambda1, k), (form, _) in zip(FIG2,
                                                       fig2_forms.values()):
        jobs.append((label, form.params, form))
    for label, (params, form, _) in fig3_forms.items():
        jobs.append((label, params, form))
    assert len(jobs) == 9
    for i, (label, params, form) in enumerate(jobs):
        t0 = time.time()
        rep = mc_gap_check(params, form, n_samples=10 ** 5, seed=101 + i)
        dt = time.time() - t0
        assert rep["pass"], (label, rep)
        assert dt <= MC_BUDGET_S, (label, dt)
        print("ACCEPTANCE 6 [%s]: KS %.4g <= %.4g at 1e5 samples "
              "(%.1fs) PASS" % (label, rep["statistic"], rep["threshold"], dt))


def test_criterion_7_hard_edge_limit():
    n = 40
    for beta in (1, 2, 4):
        params = JacobiParams(n, 0, 0, beta)
        gap = gap_case1(params)
        assert gap.gamma == (mpq(1),)           # E = s^e0 exactly
        dens = pmax_auto(params)
        worst = 0.0
        with mpmath.workdps(40):
            for s in ("0.1", "0.4", "0.8", "1.2", "1.6", "2.0"):
                sv = mpmath.mpf(s)
                x = 1 - sv / n ** 2
                got = dens.value(x, 60) / n ** 2
                want = mpmath.mpf(beta) / 2 * mpmath.exp(-beta * sv / 2)
                worst = max(worst, abs(float((got - want) / want)))
        assert worst <= 0.05, (beta, worst)
        print("ACCEPTANCE 7 [beta=%d]: rescaled density within %.2f%% of "
              "the exponential hard-edge law (<= 5%%) PASS"
              % (beta, 100 * worst))


def test_criterion_8_circular():
    f1 = circ_gap_integer_beta(1, 4)
    with mpmath.workdps(40):
        for phi in ("0", "1.1", "4.4"):
            ph = mpmath.mpf(phi)
            assert abs(f1.value(ph, 40) - (1 - ph / (2 * mpmath.pi))) \
                < mpmath.mpf("1e-35")
    print("ACCEPTANCE 8a: single eigenvalue form is 1 - phi/(2 pi) PASS")
    f22 = circ_gap_integer_beta(2, 2)
    with mpmath.workdps(40):
        for phi in ("0.5", "2.0", "4.5"):
            ph = mpmath.mpf(phi)
            want = ((2 * mpmath.pi - ph) ** 2 - 2 + 2 * mpmath.cos(ph)) \
                / (4 * mpmath.pi ** 2)
            assert abs(f22.value(ph, 40) - want) < mpmath.mpf("1e-35")
    print("ACCEPTANCE 8b: two-eigenvalue form matches the closed form PASS")
    for n, beta in ((2, 2), (3, 2), (2, 4)):
        assert circ_gap_integer_beta(n, beta).equal_exact(
            circ_gap_even_beta(n, beta)), (n, beta)
    print("ACCEPTANCE 8c: direct and even-beta routes agree exactly at "
          "(2,2), (3,2), (2,4) PASS")
    for n, beta in ((1, 1), (2, 1), (2, 2), (2, 3), (3, 2), (2, 4)):
        f = circ_gap_integer_beta(n, beta)
        with mpmath.workdps(40):
            assert f.value(mpq(0), 40) == 1
            assert abs(f.value(2 * mpmath.pi, 40)) < mpmath.mpf("1e-35")
        assert check_monotone(f)
    print("ACCEPTANCE 8d: value(0)=1, value(2pi)=0, realness, "
          "monotonicity on all computed forms PASS")
    for beta in (1, 2, 3):
        f = circ_gap_integer_beta(2, beta)
        for phi in (np.pi / 2, np.pi, 3 * np.pi / 2):
            assert abs(float(f.value(phi, 40))
                       - circular_gap_quad(2, beta, phi)) < 1e-8
    print("ACCEPTANCE 8e: two-eigenvalue oracle agreement at "
          "beta in {1,2,3} PASS")

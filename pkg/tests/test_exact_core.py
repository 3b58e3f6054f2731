"""Exact arithmetic layer: polynomials, shifted series, rational
functions, Gaussian rationals."""

import random

import mpmath
import pytest
from gmpy2 import mpq

from jacobi_edge.errors import ParameterError
from jacobi_edge.poly import Poly, RationalFunction
from jacobi_edge.scalars import QQ_I, GaussianRational, rat, rat_str
from jacobi_edge.series import LambdaSeries

from oracles import incomplete_power_tail


# -- scalars ----------------------------------------------------------------

def test_rat_parsing():
    assert rat("7/8") == mpq(7, 8)
    assert rat("-3/4") == mpq(-3, 4)
    assert rat(5) == 5
    with pytest.raises(ValueError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("0.5")
    with pytest.raises(ValueError):
        rat("1e-3")
    assert rat_str(mpq(6, 4)) == "3/2"
    assert rat_str(mpq(-8, 2)) == "-4"


def test_gaussian_rational_field():
    i = GaussianRational(0, 1)
    assert i * i == -1
    z = GaussianRational(mpq(1, 2), mpq(-1, 3))
    assert z * z.conj() == mpq(1, 4) + mpq(1, 9)
    assert (z / z) == 1
    assert 1 / i == -i
    assert (2 + 3 * i) * (2 - 3 * i) == 13
    assert i ** 4 == 1 and i ** 3 == -i


# -- polynomials --------------------------------------------------------------

def test_poly_arith_examples():
    one_plus = Poly([1, 1])
    one_minus = Poly([1, -1])
    assert one_plus * one_minus == Poly([1, 0, -1])      # 1 - s^2
    assert (Poly([2, 7, 1]) * Poly.zero()).is_zero()
    assert (Poly([2, -1]) + Poly([-2, 1])).is_zero()


def test_poly_tag_mismatch_rejected():
    with pytest.raises(ValueError):
        Poly([1], "s") + Poly([1], "t")


def test_poly_degree_and_reflect():
    p = Poly([1, 0, 3])
    assert p.degree == 2
    q = p.reflect()              # p(1 - t) in the other variable
    assert q.tag == "t"
    for v in (mpq(0), mpq(1, 3), mpq(1)):
        assert q(v) == p(1 - v)


def test_poly_ring_axioms_randomized():
    rng = random.Random(0)

    def rp():
        return Poly([mpq(rng.randint(-4, 4), rng.randint(1, 5))
                     for _ in range(rng.randint(0, 5))])

    for _ in range(50):
        a, b, c = rp(), rp(), rp()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a


# -- shifted series -----------------------------------------------------------

def _series(terms, lam2=mpq(1, 2)):
    return LambdaSeries(lam2, {k: mpq(v) for k, v in terms.items()})


def test_series_derivative_examples():
    assert _series({(0, 0): 1}).deriv().is_zero()
    d = _series({(1, 0): 1}).deriv()
    assert d.terms == {(1, -1): mpq(-1, 2)}
    d2 = _series({(0, 3): 2}).deriv()
    assert d2.terms == {(0, 2): mpq(-6)}


def test_series_affine_multiplication_examples():
    g = _series({(0, 0): 1})
    assert g.times_x().terms == {(0, 0): mpq(1), (0, 1): mpq(-1)}
    h = _series({(1, 2): 3})
    assert h.times_one_minus_x().terms == {(1, 3): mpq(3)}
    assert g.times_x_xm1().terms == {(0, 1): mpq(-1), (0, 2): mpq(1)}


def test_series_leibniz_randomized():
    rng = random.Random(7)
    for _ in range(40):
        terms = {(rng.randint(0, 3), rng.randint(0, 4)):
                 mpq(rng.randint(-5, 5), rng.randint(1, 6))
                 for _ in range(6)}
        g = _series(terms)
        lhs = g.times_one_minus_x().deriv()
        rhs = g.scale(-1) + g.deriv().times_one_minus_x()
        assert lhs.terms == rhs.terms


def test_series_formal_keys_not_merged():
    # with lam2 = 1/2 the keys (2, 0) and (0, 1) coincide numerically
    g = _series({(2, 0): 3, (0, 1): 4})
    assert (2, 0) in g.terms and (0, 1) in g.terms
    with mpmath.workdps(30):
        v = g.eval_mpf(mpq(1, 2), 30)
        assert abs(v - 7 * mpmath.mpf("0.5")) < 1e-25


def test_series_eval():
    g = _series({(0, 0): 1}, lam2=mpq(1, 3))
    with mpmath.workdps(30):
        assert g.eval_mpf(mpq(1, 7)) == 1
    h = _series({(1, 0): 1}, lam2=mpq(1, 2))
    with mpmath.workdps(30):
        assert abs(h.eval_mpf(mpq(3, 4)) - mpmath.mpf("0.5")) < 1e-25
    with pytest.raises(ValueError):
        h.eval_mpf(mpq(3, 2))


def test_series_exit_invariant():
    bad = _series({(1, -1): 1})
    with pytest.raises(ValueError):
        bad.check_exit_invariant()


def test_series_matches_independent_expansion():
    # the package's incomplete-integral seed against the u-substitution oracle
    from jacobi_edge.solvers import incomplete_beta_series
    for a, b in ((2, mpq(1, 2)), (3, mpq(-1, 4)), (0, mpq(5, 3))):
        seed = incomplete_beta_series(a, b)
        const, tail = incomplete_power_tail(a, b)
        assert seed.terms[(0, 0)] == const
        for k, coeff in tail.items():
            assert seed.terms[(1, k + 1)] == coeff


def test_series_json_roundtrip():
    g = _series({(1, 2): mpq(-3, 7), (0, 0): 5})
    back = LambdaSeries.from_json(g.to_json())
    assert back.terms == g.terms and back.lambda2 == g.lambda2


def test_series_eval_matches_quadrature_oracle():
    # the one-variable edge series evaluated numerically against the
    # brute-force integral
    from jacobi_edge.quadrature import quadrature_gap
    from jacobi_edge.solvers import JacobiParams
    g = LambdaSeries(mpq(1, 2), {(0, 0): mpq(1), (1, 1): mpq(-35, 8),
                                 (1, 2): mpq(21, 4), (1, 3): mpq(-15, 8)})
    with mpmath.workdps(30):
        mine = float(g.eval_mpf(mpq(1, 2)))
    want = quadrature_gap(JacobiParams(1, 2, mpq(1, 2), 1), mpq(1, 2))
    assert abs(mine - want) < 1e-10


# -- rational functions -------------------------------------------------------

def test_rational_function_normalization():
    x = RationalFunction.variable()
    f = (x + 1) / (x * x + x)
    assert f == RationalFunction([1], [0, 1])        # 1/x, monic, reduced
    assert f.pole_order() == 1
    g = (2 * x + 2) / (4 * x + 8)                    # (x+1)/(2x+4), monic den
    assert g.den[-1] == 1


def test_rational_function_laurent():
    x = RationalFunction.variable()
    f = 1 / (x * (x + 2))
    lau = f.laurent(2)
    # 1/(x(x+2)) = 1/(2x) - 1/4 + x/8 - x^2/16 + ...
    assert lau[-1] == mpq(1, 2)
    assert lau[0] == mpq(-1, 4)
    assert lau[1] == mpq(1, 8)
    assert lau[2] == mpq(-1, 16)


def test_rational_function_pole_bound_under_product():
    x = RationalFunction.variable(QQ_I)
    one = RationalFunction([GaussianRational(1)], None, QQ_I)
    f = one / x
    g = one / (x * x * (x + 1))
    prod = f * g
    assert f.pole_order() == 1 and g.pole_order() == 2
    assert prod.pole_order() <= f.pole_order() + g.pole_order()
    assert prod.pole_order() == 3


def test_rational_function_subst():
    x = RationalFunction.variable()
    f = 1 / (x + 3)
    g = f.subst_linear(2, -1)      # 1/(2x+2)
    assert g.eval(mpq(1)) == mpq(1, 4)


def test_parameter_error_is_value_error():
    assert issubclass(ParameterError, ValueError)

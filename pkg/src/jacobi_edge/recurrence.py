"""The triangular differential-difference system behind every pipeline.

One family of multiple integrals, indexed by the order p of an inserted
elementary symmetric polynomial, satisfies

    (n-p) E_p J_{p+1}(x)
        = (A_p x + B_p) J_p(x) - x(x-1) J_p'(x) + D_p x(x-1) J_{p-1}(x)

with exact rational coefficients

    A_p = (n-p) (lam1 + lam2 + beta (n-p-1) + 2 (alpha+1))
    B_p = (p-n) (lam1 + alpha + 1 + (beta/2)(n-p-1))
    D_p = p ((beta/2)(n-p) + alpha + 1)
    E_p = lam1 + lam2 + 1 + (beta/2)(2n-p-2) + (alpha+1),

and one full pass p = 0..n-1 turns the p = 0 member at exponent alpha
into the p = 0 member at exponent alpha + 1.  The engine exposes that
pass in three working representations:

  * ``sweep_poly``   - plain polynomials (tilde-transformed system);
  * ``sweep_hyp``    - pairs (P, Q) against a fixed hypergeometric seed
                       and its derivative (tilde-transformed system);
  * ``sweep_series`` - shifted-exponent series in the untransformed
                       variable, generic over the coefficient field.

Coefficients are recomputed from the closed formulas at every step:
the cost is negligible and it removes any drift risk.  All sweeps are
pure functions; independent parameter sets can run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import ParameterError
from .poly import Poly
from .series import LambdaSeries
from .special import HypParams


@dataclass(frozen=True)
class RecurrenceCoeffs:
    a_p: object
    b_p: object
    d_p: object
    e_p: object


def coeffs(p: int, n: int, lambda1, lambda2, beta, alpha) -> RecurrenceCoeffs:
    """Exact coefficient quadruple at step p of an n-variable system.

    The parameters may live in any exact field (plain rationals, or
    rational functions of a formal symbol); the formulas only use ring
    operations and division by 2.
    """
    if not 0 <= p <= n:
        raise ParameterError("step index p=%d outside 0..%d" % (p, n))
    if isinstance(beta, int):
        beta = mpq(beta)  # int/2 must stay exact
    half_beta = beta / 2
    a_p = (n - p) * (lambda1 + lambda2 + beta * (n - p - 1) + 2 * (alpha + 1))
    b_p = (p - n) * (lambda1 + alpha + 1 + half_beta * (n - p - 1))
    d_p = p * (half_beta * (n - p) + alpha + 1)
    e_p = lambda1 + lambda2 + 1 + half_beta * (2 * n - p - 2) + (alpha + 1)
    return RecurrenceCoeffs(a_p, b_p, d_p, e_p)


# ---------------------------------------------------------------------------
# series representation (untransformed variable, region [0, x])
# ---------------------------------------------------------------------------

def sweep_series(seed, n: int, lambda1, lambda2, beta, alpha_from):
    """One full pass of the system on a shifted-exponent series.

    ``seed`` is the p = 0 member at exponent ``alpha_from``; the return
    value is the p = 0 member at ``alpha_from + 1``.  Every step is
    linear, so the pass is linear in the seed.  The exit invariant
    (no negative offsets in shifted classes) is enforced on the result.
    """
    if isinstance(seed, (list, tuple)):
        seed = seed[0]
    j_prev = None
    j_cur = seed
    for p in range(n):
        rc = coeffs(p, n, lambda1, lambda2, beta, alpha_from)
        rhs = (j_cur.times_x().scale(rc.a_p) + j_cur.scale(rc.b_p)
               - j_cur.deriv().times_x_xm1())
        if p >= 1 and rc.d_p:
            rhs = rhs + j_prev.times_x_xm1().scale(rc.d_p)
        denom = (n - p) * rc.e_p
        if not denom:
            raise ParameterError("vanishing pivot (n-p) E_p at p=%d" % p)
        j_prev, j_cur = j_cur, rhs.scale(1 / denom)
    if isinstance(j_cur, LambdaSeries):
        j_cur.check_exit_invariant()
    return j_cur


# ---------------------------------------------------------------------------
# polynomial representation (tilde transform, region [0, 1])
# ---------------------------------------------------------------------------

def _tilde_multiplier(rc: RecurrenceCoeffs, n: int, alpha, p: int) -> Poly:
    """(A_p - (n*alpha + p)) + (B_p + n*alpha + p) x as a Poly in s."""
    shift = n * alpha + p
    return Poly([rc.a_p - shift, rc.b_p + shift])


def sweep_poly(seed: Poly, n: int, lambda1, beta, alpha_from,
               lambda2_weight=0) -> Poly:
    """One full pass in the polynomial representation.

    The weight exponent on (1 - t) is zero for the gap pipelines (the
    target exponent is carried by alpha); the direct extreme-eigenvalue
    density pipeline runs the same pass with ``lambda2_weight = beta``.
    """
    lam1, lam2w = mpq(lambda1), mpq(lambda2_weight)
    alpha = mpq(alpha_from)
    j_prev: Poly | None = None
    j_cur = seed
    one_minus_x = Poly([1, -1])
    x_one_minus_x = Poly([0, 1, -1])
    for p in range(n):
        rc = coeffs(p, n, lam1, lam2w, mpq(beta), alpha)
        rhs = (_tilde_multiplier(rc, n, alpha, p) * j_cur
               + x_one_minus_x * j_cur.deriv())
        if p >= 1 and rc.d_p:
            rhs = rhs + rc.d_p * (one_minus_x * j_prev)
        denom = (n - p) * rc.e_p
        if denom == 0:
            raise ParameterError("vanishing pivot (n-p) E_p at p=%d" % p)
        j_prev, j_cur = j_cur, (1 / denom) * rhs
    return j_cur


# ---------------------------------------------------------------------------
# hypergeometric-pair representation (tilde transform)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypPair:
    """J = P(x) f(x) + Q(x) f'(x) against a fixed 2F1 seed f."""

    p_poly: Poly
    q_poly: Poly
    hyp: HypParams


def sweep_hyp(seed: HypPair, n: int, lambda1, beta, alpha_from,
              lambda2_weight=0) -> HypPair:
    """One full pass on a (P, Q) pair.

    The second-order equation satisfied by the seed eliminates f'' from
    the derivative of P f + Q f', closing the pass on polynomial pairs:

        x(1-x) f'' = a b f - (c - (a+b+1) x) f'.
    """
    lam1, lam2w = mpq(lambda1), mpq(lambda2_weight)
    alpha = mpq(alpha_from)
    hp = seed.hyp
    ab = hp.a * hp.b
    c_lin = Poly([hp.c, -(hp.a + hp.b + 1)])  # c - (a+b+1) x
    one_minus_x = Poly([1, -1])
    x_one_minus_x = Poly([0, 1, -1])
    pp, qq = seed.p_poly, seed.q_poly
    p_prev: Poly | None = None
    q_prev: Poly | None = None
    for p in range(n):
        rc = coeffs(p, n, lam1, lam2w, mpq(beta), alpha)
        mult = _tilde_multiplier(rc, n, alpha, p)
        denom = (n - p) * rc.e_p
        if denom == 0:
            raise ParameterError("vanishing pivot (n-p) E_p at p=%d" % p)
        new_p = mult * pp + x_one_minus_x * pp.deriv() + ab * qq
        new_q = (mult * qq + x_one_minus_x * (pp + qq.deriv())
                 - c_lin * qq)
        if p >= 1 and rc.d_p:
            new_p = new_p + rc.d_p * (one_minus_x * p_prev)
            new_q = new_q + rc.d_p * (one_minus_x * q_prev)
        inv = 1 / denom
        p_prev, q_prev = pp, qq
        pp, qq = inv * new_p, inv * new_q
    return HypPair(pp, qq, hp)


def case1_seed_polynomial(n: int, lambda1, beta) -> Poly:
    """Closed form of the polynomial after a single pass from the trivial
    seed: the terminating 2F1 with parameters

        (-n, -(n-1) - (2/beta)(lambda1+1), -2(n-1) - (2/beta)(lambda1+2)).

    Used as an exact cross-check on the sweep."""
    l1, b = mpq(lambda1), mpq(beta)
    a = mpq(-n)
    bb = -(n - 1) - (2 / b) * (l1 + 1)
    cc = -2 * (n - 1) - (2 / b) * (l1 + 2)
    coeffs_out = [mpq(1)]
    term = mpq(1)
    for k in range(n):
        term = term * (a + k) * (bb + k) / ((cc + k) * (k + 1))
        coeffs_out.append(term)
    return Poly(coeffs_out)

"""Brute-force quadrature oracle for small matrix sizes.

The defining restricted integral is evaluated directly over the ordered
simplex s > x_1 > ... > x_n > 0 (times n!), one nested one-dimensional
integration per variable.  Each level has at most two endpoint power
singularities: x^lambda1 at the origin and the coupling (upper - x)^beta
at the coincidence with the enclosing variable (plus (1-x)^lambda2 when
the upper limit reaches 1).  Every non-smooth endpoint exponent p/q is
removed exactly by the substitution x -> a + (b-a) v^q, after which
composite Gauss-Legendre converges geometrically.

The oracle is capped at n <= 3: cost grows geometrically with n and all
structural claims it guards are already discriminating there.  Estimates
are certified by refinement: panel counts double until two successive
normalized values agree to the requested tolerance.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np
from gmpy2 import mpq

from .errors import NumericError, ParameterError
from .special import selberg_log


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    # map to [0, 1]
    return (x + 1.0) / 2.0, w / 2.0


def _transform_power(exponent) -> int:
    """Substitution order that makes (x - a)^exponent smooth: the
    exponent's denominator (1 means no transform needed)."""
    if exponent is None:
        return 1
    e = mpq(exponent)
    if e.denominator == 1 and e >= 0:
        return 1
    return min(int(e.denominator), 24)


def _half_nodes(a: float, b: float, sing_at_a: bool, k: int,
                order: int, pieces: int):
    """Nodes/weights on [a, b] whose only non-smooth endpoint is a (when
    sing_at_a) or b, removed by a power-k substitution toward it."""
    v, wv = _gl_nodes(order)
    vs = (np.arange(pieces)[:, None] + v[None, :]).ravel() / pieces
    ws = np.tile(wv, pieces) / pieces
    if k == 1:
        x = a + (b - a) * vs
        w = (b - a) * ws
    else:
        t = vs ** k
        jac = k * vs ** (k - 1)
        if sing_at_a:
            x = a + (b - a) * t
        else:
            x = b - (b - a) * t
        w = (b - a) * jac * ws
    return x, np.abs(w)


def segment_rule(a: float, b: float, left_exp, right_exp,
                 order: int = 32, pieces: int = 2):
    """Quadrature rule on [a, b] with endpoint exponents left_exp at a and
    right_exp at b (None or non-negative integers mean smooth)."""
    if b <= a:
        return np.empty(0), np.empty(0)
    m = 0.5 * (a + b)
    kl = _transform_power(left_exp)
    kr = _transform_power(right_exp)
    xl, wl = _half_nodes(a, m, True, kl, order, pieces)
    xr, wr = _half_nodes(m, b, False, kr, order, pieces)
    return np.concatenate([xl, xr]), np.concatenate([wl, wr])


def _ordered_block(lam1: float, lam2: float, beta: float, s: float,
                   n: int, left_exp, right_exp, coupling_exp,
                   order: int, pieces: int) -> float:
    """n! times the ordered restricted integral, unnormalized."""

    def level(uppers: tuple, depth: int) -> float:
        ub = uppers[-1] if uppers else s
        rexp = coupling_exp if uppers else (right_exp if s >= 1.0 else None)
        x, w = segment_rule(0.0, ub, left_exp, rexp, order, pieces)
        if x.size == 0:
            return 0.0
        base = np.power(x, lam1) * np.power(1.0 - x, lam2)
        for u in uppers:
            base = base * np.power(u - x, beta)
        if depth == n:
            return float(np.dot(w, base))
        vals = np.empty_like(x)
        for i, xi in enumerate(x):
            vals[i] = level(uppers + (xi,), depth + 1)
        return float(np.dot(w, base * vals))

    import math
    return math.factorial(n) * level((), 1)


def quadrature_gap(params, s, tol: float = 1e-9, order: int = 32) -> float:
    """Probability that all n <= 3 eigenvalues lie in [0, s], by direct
    nested quadrature of the defining integral, certified by refinement
    until successive estimates differ by less than ``tol``."""
    n = params.n
    if n > 3:
        raise ParameterError("the quadrature oracle is capped at n = 3")
    sf = float(s)
    if sf < 0 or sf > 1:
        raise ParameterError("s must lie in [0, 1]")
    if sf == 0:
        return 0.0
    lam1 = float(params.lambda1)
    lam2 = float(params.lambda2)
    beta = float(params.beta)
    with mpmath.workdps(30):
        log_j = selberg_log(params.lambda1, params.lambda2, params.beta, n)
        jval = float(mpmath.exp(log_j))
    left_exp = params.lambda1
    right_exp = params.lambda2      # active only when s = 1
    prev = None
    for pieces in (1, 2, 4, 8):
        raw = _ordered_block(lam1, lam2, beta, sf, n, left_exp, right_exp,
                             params.beta, order, pieces)
        est = raw / jval
        if prev is not None and abs(est - prev) < tol:
            return est
        prev = est
    raise NumericError("quadrature did not certify: last delta %.3e"
                       % abs(est - prev))


def circular_gap_quad(n: int, beta, phi: float, tol: float = 1e-9,
                      order: int = 32) -> float:
    """Oracle for the circular-ensemble gap: fraction of the angular
    product measure with every angle in [phi, 2 pi], for n <= 3."""
    if n > 3:
        raise ParameterError("circular oracle capped at n = 3")
    b = float(beta)
    two_pi = 2.0 * np.pi

    def block(lo: float, pieces: int) -> float:
        def level(uppers: tuple, depth: int) -> float:
            ub = uppers[-1] if uppers else two_pi
            x, w = segment_rule(lo, ub, None, mpq(beta) if uppers else None,
                                order, pieces)
            if x.size == 0:
                return 0.0
            base = np.ones_like(x)
            for u in uppers:
                base = base * np.power(2.0 * np.abs(np.sin((u - x) / 2.0)), b)
            if depth == n:
                return float(np.dot(w, base))
            vals = np.empty_like(x)
            for i, xi in enumerate(x):
                vals[i] = level(uppers + (xi,), depth + 1)
            return float(np.dot(w, base * vals))

        return level((), 1)

    prev = None
    for pieces in (1, 2, 4, 8):
        est = block(float(phi), pieces) / block(0.0, pieces)
        if prev is not None and abs(est - prev) < tol:
            return est
        prev = est
    raise NumericError("circular quadrature did not certify")

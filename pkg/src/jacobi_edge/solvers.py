"""End-to-end pipelines for the edge gap probability and the extreme
eigenvalue densities.

Three parameter regimes admit finite structured forms for the probability
E(s) that the spectrum lies entirely in [0, s]:

  case 1:  lambda2 a non-negative integer
           -> E(s) = s^e0 * (polynomial of degree lambda2*n);
  case 2:  lambda2 = -beta/2 + k with integer k >= 0
           -> E(s) = s^e0 * norm * (P(s) f(s) + Q(s) f'(s)) with f a
              fixed Gauss 2F1;
  case 3:  lambda1 a non-negative integer and beta a positive integer
           -> E(s) = 1 + sum over classes q >= 1 of
              (1-s)^(q(lambda2+1) + q(q-1)beta/2) * (polynomial in 1-s),

with e0 = n(lambda1+1) + beta n(n-1)/2 throughout.  Case 3 is computed
two independent ways: a Frobenius expansion of the associated Fuchsian
matrix system about the upper edge, and a nested one-variable-at-a-time
integration.  Both produce the identical exact coefficient table; the
Frobenius route fails on resonant lambda2 (vanishing pivots) and then
defers to the nested route.

All coefficient data is exact rational.  The only floating point in a
finished form is the single case-2/pmax-2 normalization constant, which
is irrational in general and is recomputed lazily at whatever precision
an evaluation requests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from gmpy2 import mpq

from .errors import GammaPairingError, ParameterError, ResonanceError
from .poly import Poly
from .recurrence import HypPair, coeffs, sweep_hyp, sweep_poly, sweep_series
from .scalars import Rat, is_integer, is_nonneg_integer, rat_str
from .series import LambdaSeries, _mpf_of
from .special import (HypParams, beta_value_exact_int, gamma_quotient_exact,
                      gauss_2f1, gauss_2f1_deriv, mpf_of, selberg_exact,
                      selberg_gamma_args, selberg_log, selberg_ratio_exact)

CASE1, CASE2, CASE3 = "case1", "case2", "case3"


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiParams:
    """Weight exponents (lambda1, lambda2), repulsion beta, matrix size n."""

    n: int
    lambda1: Rat
    lambda2: Rat
    beta: Rat

    def __post_init__(self):
        object.__setattr__(self, "lambda1", mpq(self.lambda1))
        object.__setattr__(self, "lambda2", mpq(self.lambda2))
        object.__setattr__(self, "beta", mpq(self.beta))
        if self.n < 1:
            raise ParameterError("n must be a positive integer")
        if self.lambda1 <= -1 or self.lambda2 <= -1 or self.beta <= 0:
            raise ParameterError(
                "need lambda1 > -1, lambda2 > -1, beta > 0; got "
                "lambda1=%s lambda2=%s beta=%s"
                % (self.lambda1, self.lambda2, self.beta))

    @property
    def exponent0(self) -> Rat:
        n = self.n
        return n * (self.lambda1 + 1) + self.beta * n * (n - 1) / 2

    def admissible_cases(self) -> list[str]:
        out = []
        if is_nonneg_integer(self.lambda2):
            out.append(CASE1)
        if is_nonneg_integer(self.lambda2 + self.beta / 2):
            out.append(CASE2)
        if is_nonneg_integer(self.lambda1) and is_integer(self.beta) \
                and self.beta >= 1:
            out.append(CASE3)
        return out

    @property
    def case2_k(self) -> int:
        return int(self.lambda2 + self.beta / 2)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.n, self.lambda2, self.lambda1, self.beta)

    def describe_ranges(self) -> str:
        return ("admissible ranges: (1) lambda2 a non-negative integer; "
                "(2) lambda2 = -beta/2 + k for integer k >= 0; "
                "(3) lambda1 a non-negative integer and beta a positive "
                "integer")


# ---------------------------------------------------------------------------
# structured forms
# ---------------------------------------------------------------------------

def _as_mpq(s) -> Rat:
    """Exact rational image of an evaluation point (floats and mpf values
    convert exactly through their binary representation)."""
    if isinstance(s, mpmath.mpf):
        sign, man, exp, _ = s._mpf_
        if man == 0:
            return mpq(0)
        val = mpq(man) * mpq(2) ** exp if exp >= 0 else mpq(man, 2 ** -exp)
        return -val if sign else val
    return mpq(s)


def _digits(values) -> int:
    """Decimal magnitude of the largest coefficient value (not its exact
    representation size): evaluation precision must cover cancellation
    between terms of this size, nothing more."""
    bits = 1
    for c in values:
        if isinstance(c, mpq) and c:
            bits = max(bits, c.numerator.bit_length() - c.denominator.bit_length())
    return int(bits * 0.302) + 1


@dataclass(frozen=True)
class PolyGapForm:
    """E(s) = s^exponent0 * sum_p gamma[p] s^p, all coefficients exact."""

    params: JacobiParams
    exponent0: Rat
    gamma: tuple

    def value(self, s, dps: int | None = None):
        dps = dps or (_digits(self.gamma) + 25)
        with mpmath.workdps(dps):
            sq = mpq(s) if not isinstance(s, (float, mpmath.mpf)) else None
            if sq is not None:
                acc = mpq(0)
                for c in reversed(self.gamma):
                    acc = acc * sq + c
                sm = mpf_of(sq)
                poly = mpf_of(acc)
            else:
                sm = mpmath.mpf(s)
                poly = mpmath.mpf(0)
                for c in reversed(self.gamma):
                    poly = poly * sm + mpf_of(c)
            if sm == 0:
                return mpmath.mpf(0) if self.exponent0 > 0 else poly
            return +(mpmath.power(sm, mpf_of(self.exponent0)) * poly)

    def to_json(self):
        return {"kind": "gap_poly",
                "n": self.params.n,
                "lambda1": rat_str(self.params.lambda1),
                "lambda2": rat_str(self.params.lambda2),
                "beta": rat_str(self.params.beta),
                "exponent0": rat_str(self.exponent0),
                "gamma": [rat_str(c) for c in self.gamma]}


@lru_cache(maxsize=None)
def _norm_ratio_cached(l1_s: str, l2_s: str, beta_s: str, n: int, dps: int):
    """exp(ln J(l1, 0) - ln J(l1, l2)) at the requested precision."""
    l1, l2, b = mpq(l1_s), mpq(l2_s), mpq(beta_s)
    with mpmath.workdps(dps):
        return +mpmath.exp(selberg_log(l1, 0, b, n, dps)
                           - selberg_log(l1, l2, b, n, dps))


@dataclass(frozen=True)
class HypGapForm:
    """E(s) = s^exponent0 * norm * (P(s) f(s) + Q(s) f'(s))."""

    params: JacobiParams
    k: int
    exponent0: Rat
    p_poly: Poly
    q_poly: Poly
    hyp: HypParams

    def norm(self, dps: int = 40):
        p = self.params
        return _norm_ratio_cached(rat_str(p.lambda1), rat_str(p.lambda2),
                                  rat_str(p.beta), p.n, dps)

    def _dps(self):
        return _digits(self.p_poly.coeffs + self.q_poly.coeffs) + 35

    def value(self, s, dps: int | None = None):
        dps = dps or self._dps()
        # the polynomial values are computed exactly: near the upper
        # endpoint they emerge from massive cancellation between their
        # coefficients, far beyond any fixed float budget
        arg = _as_mpq(s)
        if arg < 0 or arg > 1:
            raise ParameterError("evaluation point outside [0, 1]")
        if arg == 0:
            return mpmath.mpf(0)
        if arg == 1:
            # the endpoint value is pinned by the total-probability sum
            # rule; check_endpoint() probes the assembled expression
            return mpmath.mpf(1)
        pv_exact = self.p_poly(arg)
        qv_exact = self.q_poly(arg)
        for attempt in range(4):
            with mpmath.workdps(dps):
                sm = mpf_of(arg)
                pv, qv = mpf_of(pv_exact), mpf_of(qv_exact)
                f = gauss_2f1(self.hyp, arg, dps)
                fd = gauss_2f1_deriv(self.hyp, arg, dps)
                combo = pv * f + qv * fd
                scale = abs(pv * f) + abs(qv * fd)
                # the two products may still cancel against each other;
                # retry with the lost digits restored
                if scale and abs(combo) < scale * mpmath.mpf(10) ** (22 - dps):
                    dps = dps * 2 + 30
                    continue
                return +(mpmath.power(sm, mpf_of(self.exponent0))
                         * self.norm(dps) * combo)
        raise NumericError("hypergeometric form evaluation did not "
                           "stabilize at %d digits" % dps)

    def check_endpoint(self, eps: str = "1e-6", tol: str = "1e-6") -> bool:
        """Assembled value at 1 - eps must sit within tol of 1."""
        dps = self._dps() + 20
        with mpmath.workdps(dps):
            s = 1 - mpmath.mpf(eps)
            v = self.value(s, dps)
            return bool(abs(v - 1) <= mpmath.mpf(tol))

    def to_json(self):
        return {"kind": "gap_hyp",
                "n": self.params.n,
                "lambda1": rat_str(self.params.lambda1),
                "lambda2": rat_str(self.params.lambda2),
                "beta": rat_str(self.params.beta),
                "k": self.k,
                "exponent0": rat_str(self.exponent0),
                "p_poly": self.p_poly.to_json(),
                "q_poly": self.q_poly.to_json(),
                "hyp": self.hyp.to_json(),
                "norm": mpmath.nstr(self.norm(40), 30)}


def _poly_mpf(p: Poly, x):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + mpf_of(c)
    return acc


@dataclass(frozen=True)
class EdgeSeriesForm:
    """E(s) = 1 + sum_{q=1..n} u^(q(lambda2+1)+q(q-1)beta/2)
                  * sum_l gamma_tilde[q, l] u^l,  u = 1 - s.

    ``exact`` marks whether the table is rational (it is whenever the
    normalization Gamma quotients telescope, which covers the whole
    admissible case-3 range) or carried as high-precision floats."""

    params: JacobiParams
    gamma_tilde: dict
    exact: bool = True

    def class_exponent(self, q: int) -> Rat:
        p = self.params
        return q * (p.lambda2 + 1) + mpq(q * (q - 1)) * p.beta / 2

    def l_max(self, q: int) -> int:
        p = self.params
        return int(q * p.lambda1) + q * (p.n - q) * int(p.beta)

    def sum_rule_defect(self):
        """1 + sum of all coefficients; zero when the table is exact."""
        if self.exact:
            total = mpq(1)
            for c in self.gamma_tilde.values():
                total += c
            return total
        with mpmath.workdps(40):
            total = mpmath.mpf(1)
            for c in self.gamma_tilde.values():
                total += c
            return total

    def value(self, s, dps: int | None = None):
        if dps is None:
            dps = (_digits(self.gamma_tilde.values()) + 25) if self.exact else 40
        p = self.params
        with mpmath.workdps(dps):
            sm = mpf_of(mpq(s)) if not isinstance(s, (float, mpmath.mpf)) \
                else mpmath.mpf(s)
            if sm < 0 or sm > 1:
                raise ParameterError("evaluation point outside [0, 1]")
            u = 1 - sm
            total = mpmath.mpf(1)
            by_q: dict[int, dict] = {}
            for (q, l), c in self.gamma_tilde.items():
                by_q.setdefault(q, {})[l] = c
            for q, row in by_q.items():
                lmax = max(row)
                acc = mpmath.mpf(0)
                for l in range(lmax, -1, -1):
                    c = row.get(l)
                    acc = acc * u + (_mpf_of(c) if c is not None else 0)
                e = self.class_exponent(q)
                if u == 0:
                    if e == 0:
                        total += acc
                    continue
                total += acc * mpmath.power(u, mpf_of(e))
            return +total

    def to_json(self):
        enc = rat_str if self.exact else (lambda c: mpmath.nstr(c, 30))
        return {"kind": "gap_edge_series",
                "n": self.params.n,
                "lambda1": rat_str(self.params.lambda1),
                "lambda2": rat_str(self.params.lambda2),
                "beta": rat_str(self.params.beta),
                "exact": self.exact,
                "exponent_law": "q*(lambda2+1) + q*(q-1)*beta/2 + l",
                "gamma_tilde": [{"q": q, "l": l, "coeff": enc(c)}
                                for (q, l), c in sorted(self.gamma_tilde.items())]}


@dataclass(frozen=True)
class DensityPolyForm:
    """p_max(s) = s^exponent * (1-s)^lambda2 * sum_p coeffs[p] s^p."""

    params: JacobiParams
    exponent: Rat
    coeffs: tuple

    def value(self, s, dps: int | None = None):
        dps = dps or (_digits(self.coeffs) + 25)
        lam2 = self.params.lambda2
        with mpmath.workdps(dps):
            sq = mpq(s) if not isinstance(s, (float, mpmath.mpf)) else None
            if sq is not None:
                acc = mpq(0)
                for c in reversed(self.coeffs):
                    acc = acc * sq + c
                sm, poly = mpf_of(sq), mpf_of(acc)
            else:
                sm = mpmath.mpf(s)
                poly = _poly_mpf(Poly(self.coeffs), sm)
            if sm == 0:
                return mpmath.mpf(0) if self.exponent > 0 else poly
            return +(mpmath.power(sm, mpf_of(self.exponent))
                     * mpmath.power(1 - sm, mpf_of(lam2)) * poly)

    def to_json(self):
        return {"kind": "pmax_poly",
                "n": self.params.n,
                "lambda1": rat_str(self.params.lambda1),
                "lambda2": rat_str(self.params.lambda2),
                "beta": rat_str(self.params.beta),
                "exponent": rat_str(self.exponent),
                "edge_factor_exponent": rat_str(self.params.lambda2),
                "coeffs": [rat_str(c) for c in self.coeffs]}


@lru_cache(maxsize=None)
def _pmax2_norm_cached(l1_s, l2_s, beta_s, n, dps):
    l1, l2, b = mpq(l1_s), mpq(l2_s), mpq(beta_s)
    with mpmath.workdps(dps):
        return +(n * mpmath.exp(selberg_log(l1, b, b, n - 1, dps)
                                - selberg_log(l1, l2, b, n, dps)))


@dataclass(frozen=True)
class DensityHypForm:
    """p_max(s) = s^exponent (1-s)^lambda2 norm (P f + Q f')."""

    params: JacobiParams
    k: int
    exponent: Rat
    p_poly: Poly
    q_poly: Poly
    hyp: HypParams

    def norm(self, dps: int = 40):
        p = self.params
        if p.n == 1:
            with mpmath.workdps(dps):
                return +mpmath.exp(-selberg_log(p.lambda1, p.lambda2, p.beta,
                                                1, dps))
        return _pmax2_norm_cached(rat_str(p.lambda1), rat_str(p.lambda2),
                                  rat_str(p.beta), p.n, dps)

    def value(self, s, dps: int | None = None):
        dps = dps or (_digits(self.p_poly.coeffs + self.q_poly.coeffs) + 35)
        lam2 = self.params.lambda2
        arg = _as_mpq(s)
        if arg == 0:
            return mpmath.mpf(0) if self.exponent > 0 else mpmath.nan
        if arg == 1:
            return mpmath.mpf(0) if lam2 > 0 else mpmath.nan
        pv_exact = self.p_poly(arg)
        qv_exact = self.q_poly(arg)
        for attempt in range(4):
            with mpmath.workdps(dps):
                sm = mpf_of(arg)
                pv, qv = mpf_of(pv_exact), mpf_of(qv_exact)
                f = gauss_2f1(self.hyp, arg, dps)
                fd = gauss_2f1_deriv(self.hyp, arg, dps)
                combo = pv * f + qv * fd
                scale = abs(pv * f) + abs(qv * fd)
                if scale and abs(combo) < scale * mpmath.mpf(10) ** (22 - dps):
                    dps = dps * 2 + 30
                    continue
                return +(mpmath.power(sm, mpf_of(self.exponent))
                         * mpmath.power(1 - sm, mpf_of(lam2))
                         * self.norm(dps) * combo)
        raise NumericError("hypergeometric density evaluation did not "
                           "stabilize at %d digits" % dps)

    def to_json(self):
        return {"kind": "pmax_hyp",
                "n": self.params.n,
                "lambda1": rat_str(self.params.lambda1),
                "lambda2": rat_str(self.params.lambda2),
                "beta": rat_str(self.params.beta),
                "k": self.k,
                "exponent": rat_str(self.exponent),
                "edge_factor_exponent": rat_str(self.params.lambda2),
                "p_poly": self.p_poly.to_json(),
                "q_poly": self.q_poly.to_json(),
                "hyp": self.hyp.to_json(),
                "norm": mpmath.nstr(self.norm(40), 30)}


# ---------------------------------------------------------------------------
# case 1
# ---------------------------------------------------------------------------

def gap_case1(params: JacobiParams) -> PolyGapForm:
    """Polynomial gap form for integer lambda2, by repeated sweeps from
    the trivial seed followed by the exact normalization ratio."""
    if not is_nonneg_integer(params.lambda2):
        raise ParameterError("case 1 needs lambda2 a non-negative integer")
    lam2 = int(params.lambda2)
    n = params.n
    poly = Poly([1])
    for alpha in range(lam2):
        poly = sweep_poly(poly, n, params.lambda1, params.beta, alpha)
        if poly.coeff(0) != 1:
            raise ArithmeticError("normalization drifted during sweep")
    ratio = selberg_ratio_exact(params.lambda1, lam2, params.beta, n)
    gamma = [ratio * poly.coeff(p) for p in range(lam2 * n + 1)]
    if sum(gamma, mpq(0)) != 1:
        raise ArithmeticError("sum rule failed: coefficients do not sum to 1")
    return PolyGapForm(params, params.exponent0, tuple(gamma))


# ---------------------------------------------------------------------------
# case 2
# ---------------------------------------------------------------------------

def case2_seed_hyp(n: int, lambda1, beta) -> HypParams:
    l1, b = mpq(lambda1), mpq(beta)
    return HypParams(b * n / 2, b / 2 * (n - 1) + l1 + 1, b * (n - 1) + l1 + 2)


def gap_case2(lambda1, beta, k: int, n: int) -> HypGapForm:
    """Hypergeometric-pair gap form at lambda2 = -beta/2 + k."""
    l1, b = mpq(lambda1), mpq(beta)
    lam2 = -b / 2 + k
    if k < 0 or lam2 <= -1:
        raise ParameterError("case 2 needs integer k >= 0 with "
                             "-beta/2 + k > -1")
    params = JacobiParams(n, l1, lam2, b)
    hp = case2_seed_hyp(n, l1, b)
    pair = HypPair(Poly([1]), Poly.zero(), hp)
    for j in range(k):
        pair = sweep_hyp(pair, n, l1, b, -b / 2 + j)
    if pair.p_poly.degree > k * n or pair.q_poly.degree > k * (n + 1):
        raise ArithmeticError("degree bound violated in hypergeometric sweep")
    return HypGapForm(params, k, params.exponent0, pair.p_poly, pair.q_poly, hp)


# ---------------------------------------------------------------------------
# case 3, Frobenius route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusSolution:
    """One exponent class of the edge expansion: leading exponent mu_q and
    the (n+1)-component coefficient vectors indexed by the series offset."""

    q: int
    mu_q: Rat
    coeff_vectors: tuple


def _case3_check(params: JacobiParams):
    if not (is_nonneg_integer(params.lambda1) and is_integer(params.beta)
            and params.beta >= 1):
        raise ParameterError("case 3 needs a non-negative integer lambda1 "
                             "and a positive integer beta")


def _kappa(params: JacobiParams, q: int):
    """Proportionality constant of class q: binomial(n, q) times the
    Selberg values of the two edge blocks over the full normalization.
    Exact whenever the Gamma quotients telescope, else high precision."""
    n = params.n
    l1, l2, b = params.lambda1, params.lambda2, params.beta
    try:
        num1, den1 = selberg_gamma_args(l2, 0, b, q)
        num2, den2 = selberg_gamma_args(l1, l2 + q * b, b, n - q)
        num3, den3 = selberg_gamma_args(l1, l2, b, n)
        val = gamma_quotient_exact(num1 + num2 + den3, den1 + den2 + num3)
        return math.comb(n, q) * val, True
    except GammaPairingError:
        with mpmath.workdps(50):
            val = mpmath.exp(selberg_log(l2, 0, b, q, 50)
                             + selberg_log(l1, l2 + q * b, b, n - q, 50)
                             - selberg_log(l1, l2, b, n, 50))
            return +(math.comb(n, q) * val), False


def frobenius_solution(params: JacobiParams, q_class: int,
                       extra_steps: int = 0) -> FrobeniusSolution:
    """Frobenius series of the matrix system for exponent class
    ``q_class`` (solution index n - q_class), by back-substitution of the
    upper-bidiagonal linear systems.  Raises ResonanceError on a vanishing
    pivot within the needed range.

    Only even beta qualifies: the identification of the extracted
    integral with a single Frobenius solution needs the edge rescaling to
    produce a pure power series, and for odd beta the cross couplings
    between confined and free variables contaminate the expansion with
    faster-vanishing solutions (the assembled table then breaks its sum
    rule).  Odd beta always goes through the nested scheme."""
    _case3_check(params)
    if int(params.beta) % 2:
        raise ParameterError("the Frobenius route needs even beta; "
                             "use the nested scheme for odd beta")
    n = params.n
    l1, l2, b = params.lambda1, params.lambda2, params.beta
    rc = [coeffs(p, n, l1, l2, b, 0) for p in range(n + 1)]
    mu = [rc[p].a_p + rc[p].b_p for p in range(n + 1)]
    super_ = [(n - p) * rc[p].e_p for p in range(n)]   # -super of Z_{-1}, +super of Z_0
    z0_diag = [-rc[p].b_p for p in range(n + 1)]
    y_sub = [rc[p].d_p for p in range(1, n + 1)]       # entry (p, p-1)
    qp = n - q_class                                   # solution index
    mu_q = mu[qp]
    l_top = int(q_class * l1) + q_class * (n - q_class) * int(b)
    for p in range(n + 1):
        diff = mu[p] - mu_q
        if p != qp and diff.denominator == 1 and 1 <= diff <= l_top + extra_steps:
            # another exponent sits an integer above this one within the
            # range we must walk: the recursion no longer selects the
            # solution attached to the integral
            raise ResonanceError(
                "exponent collision mu_%d = mu_%d + %d within range %d "
                "(class q=%d); use the nested scheme"
                % (p, qp, int(diff), l_top, q_class),
                q=q_class, step=int(diff))

    c0 = [mpq(0)] * (n + 1)
    c0[0] = mpq(1)
    for p in range(qp):
        c0[p + 1] = (mu[p] - mu_q) / super_[p] * c0[p]

    def z0_times(v):
        return [z0_diag[p] * v[p] + (super_[p] * v[p + 1] if p < n else 0)
                for p in range(n + 1)]

    def z0y_times(v):
        out = z0_times(v)
        for p in range(1, n + 1):
            out[p] += y_sub[p - 1] * v[p - 1]
        return out

    vectors = [c0]
    prefix = [mpq(0)] * (n + 1)          # sum of c_0 .. c_{m-2}
    for m in range(1, l_top + 1 + extra_steps):
        rhs = z0y_times(vectors[-1])
        if m >= 2:
            for p in range(n + 1):
                prefix[p] += vectors[-2][p]
            z0p = z0_times(prefix)
            for p in range(n + 1):
                rhs[p] += z0p[p]
        cm = [mpq(0)] * (n + 1)
        for p in range(n, -1, -1):
            pivot = mu[p] - mu_q - m
            num = rhs[p] + (super_[p] * cm[p + 1] if p < n else 0)
            if pivot == 0:
                if num == 0:
                    cm[p] = mpq(0)
                    continue
                raise ResonanceError(
                    "Frobenius pivot vanished (class q=%d, offset %d, row %d); "
                    "use the nested scheme" % (q_class, m, p),
                    q=q_class, step=m)
            cm[p] = num / pivot
        vectors.append(cm)
    return FrobeniusSolution(qp, mu_q, tuple(tuple(v) for v in vectors))


def gap_case3_frobenius(params: JacobiParams) -> EdgeSeriesForm:
    """Edge series by the Frobenius matrix route; exact table."""
    _case3_check(params)
    n = params.n
    table = {}
    exact = True
    for q in range(1, n + 1):
        sol = frobenius_solution(params, q, extra_steps=0)
        kq, kq_exact = _kappa(params, q)
        exact = exact and kq_exact
        sign = -1 if q % 2 else 1
        l_top = int(q * params.lambda1) + q * (n - q) * int(params.beta)
        for l in range(l_top + 1):
            c = sol.coeff_vectors[l][0]
            val = sign * kq * c if kq_exact else sign * kq * mpf_of(c)
            if val:
                table[(q, l)] = val
    form = EdgeSeriesForm(params, table, exact)
    _check_sum_rule_case3(form)
    return form


def _check_sum_rule_case3(form: EdgeSeriesForm):
    defect = form.sum_rule_defect()
    if form.exact:
        if defect != 0:
            raise ArithmeticError("edge sum rule failed exactly: %s" % defect)
    else:
        scale = max([abs(c) for c in form.gamma_tilde.values()] + [1])
        if abs(defect) > mpmath.mpf("1e-10") * scale:
            raise ArithmeticError("edge sum rule defect %s too large" % defect)


# ---------------------------------------------------------------------------
# case 3, nested route
# ---------------------------------------------------------------------------

def incomplete_beta_series(lambda1: int, lambda2, field=None) -> LambdaSeries:
    """The one-variable integral of t^lambda1 (1-t)^lambda2 from 0 to x in
    shifted-series form: the exact beta value minus the binomial tail."""
    from .scalars import QQ
    field = field or QQ
    lam2 = lambda2 if field is not QQ else mpq(lambda2)
    terms = {(0, 0): field.coerce(1) * beta_value_exact_int(lambda1, lam2)}
    for p in range(lambda1 + 1):
        coeff = -(-1) ** p * math.comb(lambda1, p) / (lam2 + p + 1)
        key = (1, p + 1)
        terms[key] = terms.get(key, field.zero) + coeff
    return LambdaSeries(lam2, terms, field)


def weighted_integral_step(series: LambdaSeries, lambda1: int,
                           unordered_factor: int) -> LambdaSeries:
    """Integrate t^lambda1 (1-t)^lambda2 * series(t) from 0 to x termwise
    and scale by the count factor that keeps the result an unordered
    integral.  Each source class (q, l) lands in (q+1, l+p+1) plus one
    exact constant."""
    field = series.field
    lam2 = series.lambda2
    out: dict = {}

    def bump(key, val):
        acc = out.get(key)
        acc = val if acc is None else acc + val
        if acc:
            out[key] = acc
        elif key in out:
            del out[key]

    for (q, l), c in series.terms.items():
        b = (q + 1) * lam2 + l
        bump((0, 0), c * beta_value_exact_int(lambda1, b))
        for p in range(lambda1 + 1):
            denom = b + p + 1
            if not denom:
                raise ParameterError(
                    "pole in the nested integration at class (%d,%d), p=%d"
                    % (q, l, p))
            bump((q + 1, l + p + 1), -(-1) ** p * math.comb(lambda1, p) * c / denom)
    return LambdaSeries(lam2, out, field).scale(unordered_factor)


def nested_series(n: int, lambda1: int, lambda2, beta: int,
                  field=None) -> LambdaSeries:
    """Unordered n-variable restricted integral as a shifted series: seed
    with one variable, then alternately raise the coupling exponent to
    beta (full sweeps) and integrate in the next variable."""
    series = incomplete_beta_series(lambda1, lambda2, field)
    lam2 = series.lambda2
    for m in range(1, n):
        for alpha in range(beta):
            series = sweep_series(series, m, lambda1, lam2, beta, alpha)
        series = weighted_integral_step(series, lambda1, m + 1)
    return series


def gap_case3_nested(params: JacobiParams) -> EdgeSeriesForm:
    """Edge series by nested one-dimensional integration; exact table."""
    _case3_check(params)
    n = params.n
    l1, l2, b = int(params.lambda1), params.lambda2, int(params.beta)
    series = nested_series(n, l1, l2, b)
    try:
        jn = selberg_exact(l1, l2, b, n)
        exact = True
    except GammaPairingError:
        with mpmath.workdps(60):
            jn = mpmath.exp(selberg_log(l1, l2, b, n, 60))
        exact = False
    const = series.terms.get((0, 0), mpq(0))
    if exact and const != jn:
        raise ArithmeticError("constant term does not reproduce the "
                              "normalization integral")
    table = {}
    half = mpq(params.beta) / 2
    for (q, l), c in series.terms.items():
        if q == 0:
            continue
        l_hat_q = l - q - q * (q - 1) * half
        if l_hat_q.denominator != 1:
            raise ArithmeticError("non-integer offset in edge table")
        l_hat = int(l_hat_q)
        ltop = int(q * l1) + q * (n - q) * b
        if l_hat < 0 or l_hat > ltop:
            raise ArithmeticError(
                "offset bounds violated: class %d offset %d not in [0, %d]"
                % (q, l_hat, ltop))
        val = c / jn if exact else mpf_of(c) / jn
        key = (q, l_hat)
        table[key] = table.get(key, mpq(0) if exact else mpmath.mpf(0)) + val
    table = {k: v for k, v in table.items() if v}
    form = EdgeSeriesForm(params, table, exact)
    _check_sum_rule_case3(form)
    return form


def gap_case3(params: JacobiParams) -> EdgeSeriesForm:
    """Frobenius route (even beta) with automatic nested fallback on
    resonance; odd beta goes straight to the nested scheme."""
    _case3_check(params)
    if int(params.beta) % 2:
        return gap_case3_nested(params)
    try:
        return gap_case3_frobenius(params)
    except ResonanceError:
        return gap_case3_nested(params)


# ---------------------------------------------------------------------------
# direct extreme-eigenvalue densities
# ---------------------------------------------------------------------------

def _selberg_ratio_generic(args_num: tuple, args_den: tuple) -> Rat:
    (n_a, d_a), (n_b, d_b) = args_num, args_den
    return gamma_quotient_exact(list(n_a) + list(d_b), list(d_a) + list(n_b))


def pmax_case1(params: JacobiParams, check: bool = True) -> DensityPolyForm:
    """Largest-eigenvalue density for integer lambda2 >= 1, computed
    directly: the same sweeps on one fewer variable with the coupling
    weight taking over the (1-t) exponent slot."""
    if not is_nonneg_integer(params.lambda2) or params.lambda2 < 1:
        raise ParameterError("direct density needs integer lambda2 >= 1")
    n = params.n
    lam2 = int(params.lambda2)
    l1, b = params.lambda1, params.beta
    poly = Poly([1])
    for alpha in range(lam2):
        poly = sweep_poly(poly, n - 1, l1, b, alpha, lambda2_weight=b)
    ratio = _selberg_ratio_generic(selberg_gamma_args(l1, b, b, n - 1),
                                   selberg_gamma_args(l1, lam2, b, n))
    lead = n * ratio
    coeffs_out = tuple(lead * c for c in poly.coeffs)
    form = DensityPolyForm(params, params.exponent0 - 1, coeffs_out)
    if check:
        gap = gap_case1(params)
        lhs = Poly([(gap.exponent0 + p) * c for p, c in enumerate(gap.gamma)])
        edge = Poly([1])
        for _ in range(lam2):
            edge = edge * Poly([1, -1])
        if lhs != edge * Poly(coeffs_out):
            raise ArithmeticError("density does not match the derivative of "
                                  "the gap polynomial")
    return form


def pmax_case2(lambda1, beta, k: int, n: int) -> DensityHypForm:
    """Largest-eigenvalue density in the hypergeometric regime."""
    l1, b = mpq(lambda1), mpq(beta)
    lam2 = -b / 2 + k
    if k < 0 or lam2 <= -1:
        raise ParameterError("case 2 needs integer k >= 0 with "
                             "-beta/2 + k > -1")
    params = JacobiParams(n, l1, lam2, b)
    hp = HypParams(b * (n - 1) / 2, b / 2 * (n - 2) + l1 + 1,
                   b * (n - 1) + l1 + 2)
    pair = HypPair(Poly([1]), Poly.zero(), hp)
    for j in range(k):
        pair = sweep_hyp(pair, n - 1, l1, b, -b / 2 + j, lambda2_weight=b)
    return DensityHypForm(params, k, params.exponent0 - 1,
                          pair.p_poly, pair.q_poly, hp)


def pmax_auto(params: JacobiParams, k: int | None = None):
    cases = params.admissible_cases()
    if CASE1 in cases and params.lambda2 == 0:
        # E = s^e0 exactly; the density is the pure power e0 s^(e0-1)
        return DensityPolyForm(params, params.exponent0 - 1,
                               (params.exponent0,))
    if CASE1 in cases and params.lambda2 >= 1:
        return pmax_case1(params)
    if CASE2 in cases:
        return pmax_case2(params.lambda1, params.beta,
                          k if k is not None else params.case2_k, params.n)
    raise ParameterError("no direct density pipeline applies; "
                         + params.describe_ranges())


@dataclass(frozen=True)
class ReflectedDensityForm:
    """Smallest-eigenvalue density expressed through the largest one of
    the exponent-swapped ensemble: under x -> 1 - x the (l1, l2) ensemble
    maps onto the (l2, l1) ensemble, the smallest eigenvalue onto one
    minus the largest, so p_min(s; l1, l2) = p_max(1 - s; l2, l1)."""

    inner: object

    def value(self, s, dps: int | None = None):
        if isinstance(s, (float, mpmath.mpf)):
            return self.inner.value(1 - s, dps)
        return self.inner.value(1 - mpq(s), dps)

    def to_json(self):
        d = dict(self.inner.to_json())
        d["kind"] = "pmin_reflected"
        d["argument"] = "1-s"
        return d


def pmin_density(params: JacobiParams, s, dps: int | None = None):
    """Smallest-eigenvalue density at s."""
    return pmin_form(params).value(s, dps)


def pmin_form(params: JacobiParams) -> ReflectedDensityForm:
    try:
        return ReflectedDensityForm(pmax_auto(params.swapped()))
    except ParameterError as exc:
        raise ParameterError(
            "neither orientation admits a density pipeline: %s" % exc) from exc


# ---------------------------------------------------------------------------
# front door
# ---------------------------------------------------------------------------

def gap_auto(params: JacobiParams, scheme: str = "auto"):
    """Structured gap form by the preferred admissible pipeline."""
    cases = params.admissible_cases()
    if scheme == "case1" or (scheme == "auto" and CASE1 in cases):
        return gap_case1(params)
    if scheme == "case2" or (scheme == "auto" and CASE2 in cases):
        return gap_case2(params.lambda1, params.beta, params.case2_k, params.n)
    if scheme == "case3-frobenius":
        return gap_case3_frobenius(params)
    if scheme == "case3-nested":
        return gap_case3_nested(params)
    if scheme == "auto" and CASE3 in cases:
        return gap_case3(params)
    if scheme != "auto":
        raise ParameterError("unknown or inadmissible scheme %r" % scheme)
    raise ParameterError(
        "parameters (lambda1=%s, lambda2=%s, beta=%s) fit no computable "
        "range; %s" % (rat_str(params.lambda1), rat_str(params.lambda2),
                       rat_str(params.beta), params.describe_ranges()))


def evaluate(form, s, dps: int | None = None):
    """Numeric value of a structured form at s in [0, 1]."""
    sm = float(s) if not isinstance(s, mpq) else s
    if isinstance(sm, float) and not 0 <= sm <= 1:
        raise ParameterError("evaluation point outside [0, 1]")
    return form.value(s, dps)


def gap_grid(form, points, dps: int | None = None) -> list[float]:
    return [float(form.value(s, dps)) for s in points]


def check_gap_monotone(form, points: int = 101, dps: int | None = None) -> bool:
    """Probe that a gap form is non-decreasing and stays inside [0, 1]."""
    vals = [float(form.value(mpq(i, points - 1), dps))
            for i in range(points)]
    in_range = all(-1e-12 <= v <= 1 + 1e-12 for v in vals)
    rising = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    return in_range and rising


def adaptive_cdf_grid(form, rise_tol: float = 2.5e-4, start: int = 129,
                      max_points: int = 20000, dps: int | None = None):
    """Monotone grid of (s, E(s)) pairs fine enough that every interval
    rises by at most ``rise_tol``; linear interpolation between nodes then
    carries the same bound as a worst-case error."""
    from bisect import insort
    if dps is None and hasattr(form, "gamma"):
        dps = _digits(form.gamma) + 25
    elif dps is None and hasattr(form, "gamma_tilde"):
        dps = (_digits(form.gamma_tilde.values()) + 25) if form.exact else 40
    xs = [mpq(i, start - 1) for i in range(start)]
    ys = {x: float(form.value(x, dps)) for x in xs}
    work = list(xs)
    while len(ys) < max_points:
        new = []
        for a, b in zip(work, work[1:]):
            if abs(ys[b] - ys[a]) > rise_tol:
                mid = (a + b) / 2
                if mid not in ys:
                    new.append(mid)
        if not new:
            break
        for m in new:
            ys[m] = float(form.value(m, dps))
            insort(work, m)
    xs_sorted = sorted(ys)
    return [float(x) for x in xs_sorted], [ys[x] for x in xs_sorted]

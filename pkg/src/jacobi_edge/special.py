"""Floating-point special functions and exact Gamma-quotient telescoping.

Everything numeric here runs on mpmath so the accuracy contracts hold far
beyond double precision (the normalization constants involve log-Gamma
values around 1e9 where a double's ulp alone would already blow the
budget).  Everything exact runs on rationals: ratios of Gamma functions
whose arguments differ by integers telescope into Pochhammer products,
which is what keeps the recursion normalizations in the rational field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from .errors import GammaPairingError, NumericError, ParameterError
from .scalars import Rat, frac_part, is_integer, rat_str

DEFAULT_DPS = 30


def mpf_of(x):
    """Exact-to-float conversion of a rational at the working precision."""
    if isinstance(x, mpq):
        return mpmath.mpf(int(x.numerator)) / mpmath.mpf(int(x.denominator))
    return mpmath.mpf(x)


# ---------------------------------------------------------------------------
# log-Gamma, beta integrals, Selberg normalization
# ---------------------------------------------------------------------------

def ln_gamma(z, dps: int = DEFAULT_DPS):
    """ln Gamma(z) for z > 0 as a high-precision real."""
    with mpmath.workdps(dps):
        zm = mpf_of(z)
        if zm <= 0:
            raise ParameterError("ln_gamma needs a positive argument, got %s" % z)
        return +mpmath.loggamma(zm)


def beta_value(a, b, dps: int = DEFAULT_DPS):
    """The beta integral of x^a (1-x)^b over [0,1]:
    Gamma(a+1) Gamma(b+1) / Gamma(a+b+2).  Requires a, b > -1."""
    with mpmath.workdps(dps):
        am, bm = mpf_of(a), mpf_of(b)
        if am <= -1 or bm <= -1:
            raise ParameterError("beta integral diverges for a=%s, b=%s" % (a, b))
        return +mpmath.exp(mpmath.loggamma(am + 1) + mpmath.loggamma(bm + 1)
                           - mpmath.loggamma(am + bm + 2))


def beta_value_exact_int(a: int, b):
    """Exact beta integral for a non-negative integer first exponent:
    a! / prod_{p=1..a+1} (b + p).

    ``b`` may be a rational or any field element supporting the ring
    operations (a rational function of a formal shift parameter, say).
    """
    if a < 0 or not isinstance(a, int):
        raise ParameterError("first exponent must be a non-negative integer")
    prod = b + 1
    for p in range(2, a + 2):
        prod = prod * (b + p)
    if not prod:
        raise ParameterError("beta integral pole: b + p = 0 within 1..%d" % (a + 1))
    return math.factorial(a) / prod


def selberg_gamma_args(lambda1, lambda2, beta, n: int):
    """Numerator and denominator Gamma arguments of the n-variable
    Selberg normalization integral."""
    l1, l2, b = mpq(lambda1), mpq(lambda2), mpq(beta)
    num, den = [], []
    for j in range(n):
        num.append(l1 + 1 + j * b / 2)
        num.append(l2 + 1 + j * b / 2)
        num.append(1 + (j + 1) * b / 2)
        den.append(l1 + l2 + 2 + (n + j - 1) * b / 2)
        den.append(1 + b / 2)
    return num, den


def selberg_log(lambda1, lambda2, beta, n: int, dps: int = DEFAULT_DPS):
    """ln of the Selberg normalization integral."""
    l1, l2, b = mpq(lambda1), mpq(lambda2), mpq(beta)
    if l1 <= -1 or l2 <= -1 or b <= 0:
        raise ParameterError(
            "Selberg integral needs lambda1, lambda2 > -1 and beta > 0; "
            "got lambda1=%s lambda2=%s beta=%s" % (l1, l2, b))
    num, den = selberg_gamma_args(l1, l2, b, n)
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for z in num:
            total += mpmath.loggamma(mpf_of(z))
        for z in den:
            total -= mpmath.loggamma(mpf_of(z))
        return +total


def gamma_quotient_exact(num_args, den_args) -> Rat:
    """Exact value of prod Gamma(num) / prod Gamma(den) when it is rational.

    Arguments are grouped by their fractional part; within a group the
    quotient telescopes into Pochhammer products.  Arguments at integers
    evaluate directly as factorials, so the integer group may be
    unbalanced.  Raises GammaPairingError when some non-integer group
    cannot be fully paired (the quotient is then irrational).
    """
    groups: dict[Rat, tuple[list, list]] = {}
    for side, args in ((0, num_args), (1, den_args)):
        for z in args:
            z = mpq(z)
            if z <= 0:
                raise ParameterError("Gamma argument must be positive, got %s" % z)
            groups.setdefault(frac_part(z), ([], []))[side].append(z)
    out = mpq(1)
    for frac, (nu, de) in groups.items():
        if frac == 0:
            for z in nu:
                out *= math.factorial(int(z) - 1)
            for z in de:
                out /= math.factorial(int(z) - 1)
            continue
        if len(nu) != len(de):
            raise GammaPairingError(
                "unbalanced Gamma arguments in fractional class %s" % frac)
        nu.sort()
        de.sort()
        for a, b in zip(nu, de):
            if a >= b:
                k = int(a - b)
                for j in range(k):
                    out *= b + j
            else:
                k = int(b - a)
                for j in range(k):
                    out /= a + j
    return out


def selberg_exact(lambda1, lambda2, beta, n: int) -> Rat:
    """Exact rational Selberg value when the Gamma product telescopes
    (it always does for a non-negative integer lambda1 with integer beta,
    and in a number of other regimes)."""
    num, den = selberg_gamma_args(lambda1, lambda2, beta, n)
    return gamma_quotient_exact(num, den)


def selberg_ratio_exact(lambda1, lambda2: int, beta, n: int) -> Rat:
    """Exact normalization ratio between the lambda2 = 0 Selberg integral
    and the integer-lambda2 one, arranged so every Gamma ratio telescopes:

        prod_{j<n} prod_{m=1..lambda2}
            (lambda1+lambda2+2+(n+j-1)beta/2 - m) / (1+j beta/2+lambda2-m)
    """
    l1, b = mpq(lambda1), mpq(beta)
    if not isinstance(lambda2, int) or lambda2 < 0:
        raise ParameterError("lambda2 must be a non-negative integer")
    out = mpq(1)
    for j in range(n):
        for m in range(1, lambda2 + 1):
            den = 1 + j * b / 2 + lambda2 - m
            if den == 0:
                raise ParameterError("zero factor in Selberg ratio")
            out *= (l1 + lambda2 + 2 + (n + j - 1) * b / 2 - m) / den
    return out


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypParams:
    """Parameter triple of the Gauss hypergeometric seed function."""

    a: Rat
    b: Rat
    c: Rat

    def __post_init__(self):
        a, b, c = mpq(self.a), mpq(self.b), mpq(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if is_integer(c) and c <= 0:
            raise ParameterError("hypergeometric c must not be a non-positive "
                                 "integer, got %s" % c)

    def shifted(self) -> "HypParams":
        return HypParams(self.a + 1, self.b + 1, self.c + 1)

    def to_json(self):
        return {"a": rat_str(self.a), "b": rat_str(self.b), "c": rat_str(self.c)}


def _terminating_order(a: Rat, b: Rat) -> int | None:
    best = None
    for z in (a, b):
        if is_integer(z) and z <= 0:
            k = -int(z)
            best = k if best is None else min(best, k)
    return best


def _series_2f1(a: Rat, b: Rat, c: Rat, s, cap: int = 10 ** 6):
    """Direct power-series summation with the term recurrence
    t_{k+1} = t_k (a+k)(b+k) / ((c+k)(k+1)) * s, at the ambient precision."""
    am, bm, cm = mpf_of(a), mpf_of(b), mpf_of(c)
    sm = mpmath.mpf(s)
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    eps = mpmath.mpf(10) ** (-(mpmath.mp.dps + 4))
    nmax = _terminating_order(mpq(a), mpq(b))
    for k in range(cap):
        if nmax is not None and k >= nmax:
            return total
        term = term * (am + k) * (bm + k) / ((cm + k) * (k + 1)) * sm
        total += term
        if nmax is None and abs(term) < eps * (abs(total) + 1):
            return total
    raise NumericError("hypergeometric series did not converge within "
                       "%d terms at s=%s" % (cap, mpmath.nstr(sm, 8)))


def gauss_2f1(hp: HypParams, s, dps: int = DEFAULT_DPS):
    """Gauss 2F1(a, b; c; s) on 0 <= s < 1 as a high-precision real.

    Terminating cases sum exactly; for s > 1/2 with a non-integer
    c - a - b the evaluation is routed through the standard connection
    to argument 1 - s; an integer c - a - b falls back to direct
    summation at raised precision (no cancellation occurs there because
    every in-range parameter set has positive parameters).
    """
    a, b, c = hp.a, hp.b, hp.c
    with mpmath.workdps(dps + 10):
        sm = mpf_of(s) if isinstance(s, mpq) else mpmath.mpf(s)
        if sm < 0 or sm >= 1:
            raise ParameterError("argument must lie in [0, 1), got %s" % s)
        if sm == 0:
            return mpmath.mpf(1)
        if _terminating_order(a, b) is not None or sm <= 0.5:
            return +_series_2f1(a, b, c, sm)
        omega = c - a - b
        if not is_integer(omega):
            u = 1 - sm
            ga, rga = mpmath.gamma, mpmath.rgamma
            A = (ga(mpf_of(c)) * ga(mpf_of(omega))
                 * rga(mpf_of(c - a)) * rga(mpf_of(c - b)))
            B = (ga(mpf_of(c)) * ga(mpf_of(-omega))
                 * rga(mpf_of(a)) * rga(mpf_of(b)))
            f1 = _series_2f1(a, b, a + b - c + 1, u) if A else mpmath.mpf(0)
            f2 = _series_2f1(c - a, c - b, omega + 1, u) if B else mpmath.mpf(0)
            return +(A * f1 + B * mpmath.power(u, mpf_of(omega)) * f2)
        # integer c-a-b: the 1-s connection formula degenerates into its
        # logarithmic variant.  Moderate arguments are still summed
        # directly at raised precision; close to 1 the evaluation runs on
        # the library implementation of the logarithmic connection.
        need = int(mpmath.ceil((mpmath.mp.dps + 6) * mpmath.log(10)
                               / -mpmath.log(sm))) + 10
        if need <= 5000:
            with mpmath.workdps(dps + 30):
                val = _series_2f1(a, b, c, mpmath.mpf(sm))
            return +val
        val = mpmath.hyp2f1(mpf_of(a), mpf_of(b), mpf_of(c), sm)
        if not mpmath.isfinite(val):
            raise NumericError("hypergeometric evaluation failed at s=%s"
                               % mpmath.nstr(sm, 8))
        return +val


def gauss_2f1_deriv(hp: HypParams, s, dps: int = DEFAULT_DPS):
    """d/ds 2F1(a,b;c;s) = (ab/c) 2F1(a+1,b+1;c+1;s)."""
    with mpmath.workdps(dps + 10):
        factor = mpf_of(hp.a) * mpf_of(hp.b) / mpf_of(hp.c)
        if factor == 0:
            return mpmath.mpf(0)
        return +(factor * gauss_2f1(hp.shifted(), s, dps))

"""Gap probability of the circular ensemble for integer repulsion beta.

Working representation: finite sums of terms

    c(mu) * exp(i * L * (j*mu_tilde + m)),      mu_tilde = mu - beta(n-1)/2,

where L is the arc length not excluded (the complement of the gap), j
counts accumulated regularizer twists and m is an integer Fourier
offset.  The coefficients c are exact rational functions of the
regularizer mu over the Gaussian rationals: divisions by linear factors
(j mu_tilde + m) from arc antiderivatives and by the recursion pivots
keep them rational, and keeping them unexpanded until the very end is
what makes the final limit exact.

The regularizer is eliminated once, after the last level: within every
harmonic class the Laurent parts below mu^0 must cancel identically
(checked term by term), and the mu^0 extraction trades each pole order
for one power of L.  The arc-length variable is then converted to the
gap angle phi = 2 pi - L, which introduces polynomials in pi; the final
normalization (value 1 at phi = 0) and the realness of the result are
imposed exactly and double as structural checks: the phase and overall
constant the construction leaves open are fixed by them, never computed
from closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from .errors import NumericError, ParameterError, VerificationError
from .poly import RationalFunction, ratfunc_field
from .recurrence import sweep_series
from .scalars import QQ, QQ_I, GaussianRational, rat_str
from .solvers import nested_series
from .special import mpf_of

GR0 = GaussianRational(0)
GR1 = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def _rf_qqi(coeffs) -> RationalFunction:
    return RationalFunction([GaussianRational.coerce(c) for c in coeffs],
                            None, QQ_I)


# ---------------------------------------------------------------------------
# mu-series
# ---------------------------------------------------------------------------

class MuSeries:
    """Finite sum of c(mu) x^(j mu_tilde + m) with x = exp(i u) along the
    arc; supports exactly the operations the recursion engine needs."""

    __slots__ = ("c0", "terms")

    def __init__(self, c0, terms: dict | None = None):
        object.__setattr__(self, "c0", mpq(c0))
        clean = {}
        if terms:
            for (j, m), c in terms.items():
                if not isinstance(c, RationalFunction):
                    c = _rf_qqi([c])
                if c:
                    clean[(int(j), int(m))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("MuSeries is immutable")

    def _like(self, terms) -> "MuSeries":
        return MuSeries(self.c0, terms)

    def exponent_linear(self, j: int, m: int) -> RationalFunction:
        """j*mu_tilde + m as a rational function of mu."""
        return _rf_qqi([m - j * self.c0, j])

    # -- linear structure ----------------------------------------------
    def __add__(self, other: "MuSeries") -> "MuSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc:
                out[k] = acc
            elif k in out:
                del out[k]
        return self._like(out)

    def __sub__(self, other: "MuSeries") -> "MuSeries":
        return self + other.scale(-1)

    def scale(self, k) -> "MuSeries":
        if isinstance(k, int) and k == 0:
            return self._like({})
        return self._like({key: c * k for key, c in self.terms.items()})

    # -- recursion interface ---------------------------------------------
    def deriv(self) -> "MuSeries":
        out = {}
        for (j, m), c in self.terms.items():
            nc = c * self.exponent_linear(j, m)
            if nc:
                key = (j, m - 1)
                acc = out.get(key)
                acc = nc if acc is None else acc + nc
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return self._like(out)

    def times_x(self) -> "MuSeries":
        return self._like({(j, m + 1): c for (j, m), c in self.terms.items()})

    def times_x_xm1(self) -> "MuSeries":
        out = {}
        for (j, m), c in self.terms.items():
            for key, val in (((j, m + 2), c), ((j, m + 1), -1 * c)):
                acc = out.get(key)
                acc = val if acc is None else acc + val
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return self._like(out)

    # -- arc integration ---------------------------------------------------
    def integrate_twist(self) -> "MuSeries":
        """int_0^L e^(i u mu_tilde) series(u) du: each term picks up one
        twist and the antiderivative splits into the boundary term and an
        exact constant."""
        out: dict = {}

        def bump(key, val):
            acc = out.get(key)
            acc = val if acc is None else acc + val
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]

        for (j, m), c in self.terms.items():
            nu = self.exponent_linear(j + 1, m)
            w = c / (nu * GR_I)
            bump((j + 1, m), w)
            bump((0, 0), -1 * w)
        return self._like(out)

    def max_pole(self) -> int:
        return max([c.pole_order() for c in self.terms.values()] + [0])

    def to_json(self):
        return {"c0": rat_str(self.c0),
                "terms": [{"j": j, "m": m, "coeff": c.to_json()}
                          for (j, m), c in sorted(self.terms.items())]}


def arc_primitive(j: int, m: int, c0) -> MuSeries:
    """Antiderivative of exp(i u (j mu_tilde + m)) from 0 to L, as the
    two-term series (boundary value minus constant) with the reciprocal
    frequency kept unexpanded until the limit.  The identically-zero
    frequency (j = m = 0) has the linear-in-arc primitive and is produced
    only by the final limit, never stored here."""
    if j == 0 and m == 0:
        raise ParameterError("zero frequency: the primitive is linear in "
                             "the arc length and is handled at the limit")
    ser = MuSeries(c0)
    nu = ser.exponent_linear(j, m)
    w = GR1 / (nu * GR_I)
    return MuSeries(c0, {(j, m): w, (0, 0): -1 * w})


# ---------------------------------------------------------------------------
# the mu -> 0 limit
# ---------------------------------------------------------------------------

def mu_limit(series: MuSeries) -> dict:
    """Exact limit of the series as the regularizer vanishes.

    Terms are grouped by the true harmonic index m_hat = m - j c0; within
    a group the product of each coefficient's Laurent expansion with the
    expansion of exp(i L j mu) must cancel below mu^0 (hard failure if it
    does not), and the mu^0 coefficient of L^d collects
    laurent_(-d)(c) (i j)^d / d!.

    Returns a map (m_hat, d) -> GaussianRational for the value
    sum c * L^d * exp(i L m_hat).
    """
    groups: dict = {}
    for (j, m), c in series.terms.items():
        m_hat = m - j * series.c0
        groups.setdefault(m_hat, []).append((j, c))
    out: dict = {}
    for m_hat, items in groups.items():
        buckets: dict = {}
        for j, c in items:
            lau = c.laurent(0)
            for k, coeff in lau.items():
                for t in range(0, -k + 1):
                    w = k + t
                    val = coeff * (GR_I * j) ** t / math.factorial(t)
                    key = (w, t)
                    acc = buckets.get(key)
                    acc = val if acc is None else acc + val
                    if acc:
                        buckets[key] = acc
                    elif key in buckets:
                        del buckets[key]
        for (w, t), val in buckets.items():
            if w < 0 and val:
                raise NumericError(
                    "residual regularizer pole of order %d in harmonic %s "
                    "(arc power %d): %r" % (-w, m_hat, t, val))
        for (w, t), val in buckets.items():
            if w == 0 and val:
                key = (m_hat, t)
                acc = out.get(key)
                acc = val if acc is None else acc + val
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
    return out


# ---------------------------------------------------------------------------
# polynomials in pi (exact normalizers)
# ---------------------------------------------------------------------------

class PiPoly:
    """Polynomial in pi over the Gaussian rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = GaussianRational.coerce(c)
                if c:
                    clean[int(k)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PiPoly is immutable")

    @staticmethod
    def const(c) -> "PiPoly":
        return PiPoly({0: GaussianRational.coerce(c)})

    @staticmethod
    def two_pi_power(d: int) -> "PiPoly":
        return PiPoly({d: GaussianRational(2 ** d)})

    def __add__(self, other: "PiPoly") -> "PiPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, GR0) + c
        return PiPoly(out)

    def __mul__(self, other) -> "PiPoly":
        if not isinstance(other, PiPoly):
            return PiPoly({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, GR0) + c1 * c2
        return PiPoly(out)

    __rmul__ = __mul__

    def conj(self) -> "PiPoly":
        return PiPoly({k: c.conj() for k, c in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, PiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def eval_mpc(self, dps: int = 30):
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for k, c in self.terms.items():
                total += mpmath.mpc(mpf_of(c.re), mpf_of(c.im)) * mpmath.pi ** k
            return total

    def to_json(self):
        return [{"pi_power": k, "re": rat_str(c.re), "im": rat_str(c.im)}
                for k, c in sorted(self.terms.items())]

    def __repr__(self):
        return "PiPoly(%s)" % (self.terms,)


def _harmonic_sign(m_hat: mpq) -> GaussianRational:
    """exp(2 pi i m_hat) for m_hat with denominator 1 or 2."""
    if m_hat.denominator == 1:
        return GR1
    if m_hat.denominator == 2:
        return GaussianRational(-1) if m_hat.numerator % 2 else GR1
    raise NumericError("harmonic index %s has denominator > 2" % m_hat)


# ---------------------------------------------------------------------------
# the public form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircularGapForm:
    """Probability of an eigenvalue-free arc of angle phi:

        value(phi) = [ sum over (m, d) of terms[m, d](pi) phi^d e^(i m phi) ]
                     / normalizer(pi).

    Coefficients are exact (Gaussian-rational polynomials in pi); m may be
    half-integer for odd beta.  value(0) = 1 holds by construction; the
    remaining structure (realness, vanishing at a full-circle gap) is
    asserted exactly when the form is built.
    """

    n: int
    beta: int
    scheme: str
    terms: dict
    normalizer: PiPoly

    def value(self, phi, dps: int = 30):
        with mpmath.workdps(dps):
            ph = mpmath.mpf(phi) if not isinstance(phi, mpq) else mpf_of(phi)
            if ph < 0 or ph > 2 * mpmath.pi + mpmath.mpf("1e-12"):
                raise ParameterError("angle outside [0, 2 pi]")
            total = mpmath.mpc(0)
            for (m_hat, d), c in self.terms.items():
                total += (c.eval_mpc(dps) * ph ** d
                          * mpmath.exp(mpmath.mpc(0, mpf_of(m_hat) * ph)))
            total = total / self.normalizer.eval_mpc(dps)
            if abs(total.imag) > mpmath.mpf(10) ** (-dps // 2):
                raise NumericError("imaginary residue %s in circular value"
                                   % total.imag)
            return total.real

    def grid(self, points: int = 101, dps: int = 30):
        with mpmath.workdps(dps):
            two_pi = 2 * mpmath.pi
            xs = [two_pi * i / (points - 1) for i in range(points)]
            return [float(x) for x in xs], [float(self.value(x, dps)) for x in xs]

    def equal_exact(self, other: "CircularGapForm") -> bool:
        """Cross-multiplied exact equality of two normalized forms."""
        keys = set(self.terms) | set(other.terms)
        zero = PiPoly()
        for k in keys:
            left = self.terms.get(k, zero) * other.normalizer
            right = other.terms.get(k, zero) * self.normalizer
            if left != right:
                return False
        return True

    def to_json(self):
        return {"kind": "circular_gap",
                "n": self.n,
                "beta": self.beta,
                "scheme": self.scheme,
                "terms": [{"m": rat_str(m), "d": d, "coeff": c.to_json()}
                          for (m, d), c in sorted(
                              self.terms.items(),
                              key=lambda kv: (kv[0][0], kv[0][1]))],
                "normalization": self.normalizer.to_json()}


def _canonical_form(raw: dict, n: int, beta: int, scheme: str) -> CircularGapForm:
    """Convert an exact arc-length table (m_hat, d) -> coefficient into the
    normalized gap-angle form, asserting the endpoint and realness
    structure exactly."""
    # value at zero gap (full arc L = 2 pi): the normalizer
    p0 = PiPoly()
    for (m_hat, d), c in raw.items():
        p0 = p0 + PiPoly.two_pi_power(d) * (c * _harmonic_sign(m_hat))
    if not p0:
        raise NumericError("degenerate normalization: zero value at zero gap")
    # full-circle gap: L = 0 leaves only d = 0 terms
    full = GR0
    for (m_hat, d), c in raw.items():
        if d == 0:
            full = full + c
    if full:
        raise VerificationError("gap probability at a full-circle gap "
                                "is not exactly zero: %r" % full)
    # gap-angle basis: L^d e^(i L m) with L = 2 pi - phi
    terms: dict = {}
    for (m_hat, d), c in raw.items():
        sign = _harmonic_sign(m_hat)
        for t in range(d + 1):
            contrib = (PiPoly.two_pi_power(d - t)
                       * (c * sign * math.comb(d, t) * (-1) ** t))
            key = (-m_hat, t)
            acc = terms.get(key)
            terms[key] = contrib if acc is None else acc + contrib
    terms = {k: v for k, v in terms.items() if v}
    # realness: conj-flip cross-multiplied against the normalizer
    p0c = p0.conj()
    for (m_hat, t), c in terms.items():
        mirror = terms.get((-m_hat, t), PiPoly())
        if c * p0c != mirror.conj() * p0:
            raise VerificationError(
                "circular form is not real at harmonic %s, power %d"
                % (m_hat, t))
    # value(0) == 1 by construction
    at_zero = PiPoly()
    for (m_hat, t), c in terms.items():
        if t == 0:
            at_zero = at_zero + c
    if at_zero != p0:
        raise VerificationError("normalization lost: value at zero gap "
                                "differs from the normalizer")
    return CircularGapForm(n, beta, scheme, terms, p0)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------

def circ_gap_integer_beta(n: int, beta: int) -> CircularGapForm:
    """Direct mu-regularized recursion over the ordered arc, one variable
    per level: integrate with the twist, then raise the coupling exponent
    to beta by full sweeps before admitting the next variable."""
    if not isinstance(beta, int) or beta < 1:
        raise ParameterError("the circular pipeline needs a positive "
                             "integer beta")
    if n < 1:
        raise ParameterError("n must be positive")
    c0 = mpq(beta) * (n - 1) / 2
    lam1 = _rf_qqi([-(c0 + 1), 1])  # mu_tilde - 1, linear in mu
    ser = MuSeries(c0, {(0, 0): GR1})
    for level in range(1, n + 1):
        ser = ser.integrate_twist()
        if level < n:
            for alpha in range(beta):
                ser = sweep_series(ser, level, lam1, 0, mpq(beta), alpha)
    pole = ser.max_pole()
    if pole > n:
        raise NumericError("pole order %d exceeds the variable count" % pole)
    raw = mu_limit(ser)
    return _canonical_form(raw, n, beta, "mu-regularized")


def circ_gap_even_beta(n: int, beta: int) -> CircularGapForm:
    """Even-beta route: run the nested edge pipeline with the exponent
    shift kept symbolic, then substitute the regularizer for the shift
    and the boundary harmonic for the edge variable and take the limit."""
    if not isinstance(beta, int) or beta < 1 or beta % 2:
        raise ParameterError("this route needs a positive even beta "
                             "(use the mu-regularized pipeline otherwise)")
    sigma = beta * (n - 1) // 2
    rf_field = ratfunc_field(QQ)
    lam_sym = RationalFunction.variable(QQ)
    series = nested_series(n, 0, lam_sym, beta, field=rf_field)
    c0 = mpq(0)
    terms: dict = {}
    for (q, l), c in series.terms.items():
        c_mu = _lift_rf(c.subst_linear(1, -(sigma + 1)))
        key = (q, l - q * (sigma + 1))
        acc = terms.get(key)
        acc = c_mu if acc is None else acc + c_mu
        if acc:
            terms[key] = acc
        elif key in terms:
            del terms[key]
    ser = MuSeries(c0, terms)
    raw = mu_limit(ser)
    return _canonical_form(raw, n, beta, "even-beta-substitution")


def _lift_rf(rf: RationalFunction) -> RationalFunction:
    return RationalFunction([GaussianRational(c) for c in rf.num],
                            [GaussianRational(c) for c in rf.den],
                            QQ_I, _reduced=True)


def circ_gap(n: int, beta: int) -> CircularGapForm:
    return circ_gap_integer_beta(n, beta)


def check_monotone(form: CircularGapForm, points: int = 101,
                   dps: int = 30) -> bool:
    _, ys = form.grid(points, dps)
    return all(a >= b - 1e-12 for a, b in zip(ys, ys[1:]))

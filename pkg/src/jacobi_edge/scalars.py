"""Exact scalar arithmetic underlying every recursion in the package.

Three coefficient fields appear:

  * plain rationals (``gmpy2.mpq``), used by the polynomial and
    edge-series pipelines;
  * Gaussian rationals (pairs of rationals for the real and imaginary
    parts), used by the circular-ensemble pipeline;
  * rational functions of one formal symbol over either of the above,
    used when a parameter is kept symbolic (the exponent-shift parameter
    of the edge series, or the circular regularizer).

All values are immutable after construction; operations return new
objects and are safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

from .errors import ParameterError

# The exact rational scalar.  gmpy2.mpq is kept in lowest terms with a
# positive denominator, which is exactly the invariant we need, and it is
# much faster than fractions.Fraction on the multi-hundred-digit values
# the recursions produce.
Rat = mpq

RatLike = int | Rat | Fraction


def rat(value: int | str | Rat | Fraction) -> Rat:
    """Parse an exact rational.

    Accepts integers, ``mpq``/``Fraction`` values and strings like
    ``"7/8"`` or ``"-3"``.  Floats and float-looking strings are
    rejected: the exact pipelines must never be seeded from binary
    floating point.
    """
    if isinstance(value, float):
        raise ParameterError("exact rational required, got float %r" % (value,))
    if isinstance(value, str):
        s = value.strip()
        if any(ch in s for ch in ".eE"):
            raise ParameterError("exact rational required, got %r" % (value,))
        try:
            return mpq(s)
        except ValueError as exc:
            raise ParameterError("cannot parse %r as an exact rational"
                                 % (value,)) from exc
    return mpq(value)


def rat_str(x: RatLike) -> str:
    """Canonical string form: ``"n"`` or ``"n/d"`` in lowest terms."""
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def is_integer(x: RatLike) -> bool:
    return mpq(x).denominator == 1


def is_nonneg_integer(x: RatLike) -> bool:
    x = mpq(x)
    return x.denominator == 1 and x.numerator >= 0


def rat_floor(x: RatLike) -> int:
    x = mpq(x)
    return x.numerator // x.denominator


def frac_part(x: RatLike) -> Rat:
    """x mod 1, in [0, 1)."""
    x = mpq(x)
    return x - rat_floor(x)


def to_fraction(x: RatLike) -> Fraction:
    x = mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", mpq(re))
        object.__setattr__(self, "im", mpq(im))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("GaussianRational is immutable")

    # -- coercion -------------------------------------------------------
    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(mpq(x))

    @staticmethod
    def _try(x):
        if isinstance(x, GaussianRational):
            return x
        try:
            return GaussianRational(mpq(x))
        except TypeError:
            return None

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = GaussianRational._try(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ------------------------------------------------------
    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return rat_str(self.re)
        return "(%s%+si)" % (rat_str(self.re), rat_str(self.im))

    def to_json(self):
        return {"re": rat_str(self.re), "im": rat_str(self.im)}


GR_I = GaussianRational(0, 1)


class Field:
    """Minimal field descriptor so generic code can build 0, 1 and coerce
    integers/rationals into the right coefficient type."""

    __slots__ = ("name", "zero", "one", "coerce", "conj")

    def __init__(self, name, zero, one, coerce, conj=None):
        self.name = name
        self.zero = zero
        self.one = one
        self.coerce = coerce
        self.conj = conj if conj is not None else (lambda x: x)

    def __repr__(self):
        return "Field(%s)" % self.name


QQ = Field("QQ", mpq(0), mpq(1), lambda x: mpq(x))
QQ_I = Field("QQ_i", GaussianRational(0), GaussianRational(1),
             GaussianRational.coerce, lambda x: x.conj())

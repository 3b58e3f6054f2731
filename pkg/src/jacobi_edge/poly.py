"""Dense exact polynomials and rational functions.

``Poly`` is a dense univariate polynomial over the rationals with a
variable tag, either ``"s"`` (distance from the lower spectrum edge) or
``"t"`` (the reflected variable 1 - s).  Arithmetic between different
tags is rejected; the tag is bookkeeping that stops basis mix-ups in the
gap-probability pipelines.

``RationalFunction`` is a reduced fraction of dense polynomials over an
arbitrary exact coefficient field.  It serves two roles: coefficients
that keep the edge exponent-shift parameter symbolic, and coefficients
that are exact rational functions of the circular regularizer.  The
denominator is kept monic and coprime to the numerator at all times
(eager normalization keeps coefficient growth in check).
"""

from __future__ import annotations

from gmpy2 import mpq

from .scalars import Field, QQ, Rat, rat_str


def _trim(cs: list) -> list:
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return cs[:n]


# ---------------------------------------------------------------------------
# generic dense helpers over a Field (coefficients ascending by degree)
# ---------------------------------------------------------------------------

def dense_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)

def dense_neg(a: list) -> list:
    return [-c for c in a]

def dense_sub(a: list, b: list) -> list:
    return dense_add(a, dense_neg(b))

def dense_scale(a: list, k) -> list:
    if not k:
        return []
    return _trim([c * k for c in a])

def dense_mul(a: list, b: list, field: Field) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] = out[i + j] + ca * cb
    return _trim(out)

def dense_divmod(a: list, b: list, field: Field) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = field.one / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        if c:
            q[i] = c
            for j, cb in enumerate(b):
                a[i + j] = a[i + j] - c * cb
    return _trim(q), _trim(a)

def dense_gcd(a: list, b: list, field: Field) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = dense_divmod(a, b, field)
        a, b = b, r
    if a:
        inv = field.one / a[-1]
        a = [c * inv for c in a]  # monic
    return a

def dense_eval(a: list, x, field: Field):
    out = field.zero
    for c in reversed(a):
        out = out * x + c
    return out

def dense_shift_mul(a: list, k: int, field: Field) -> list:
    """Multiply by x**k (k >= 0)."""
    if not a:
        return []
    return [field.zero] * k + list(a)


# ---------------------------------------------------------------------------
# Poly over the rationals, with a variable tag
# ---------------------------------------------------------------------------

class Poly:
    """Dense exact polynomial over the rationals in a tagged variable."""

    __slots__ = ("tag", "coeffs")

    def __init__(self, coeffs, tag: str = "s"):
        if tag not in ("s", "t"):
            raise ValueError("variable tag must be 's' or 't'")
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "coeffs", tuple(_trim([mpq(c) for c in coeffs])))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    @staticmethod
    def zero(tag: str = "s") -> "Poly":
        return Poly([], tag)

    @staticmethod
    def const(c, tag: str = "s") -> "Poly":
        return Poly([c], tag)

    @staticmethod
    def x(tag: str = "s") -> "Poly":
        return Poly([0, 1], tag)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "Poly"):
        if self.tag != other.tag:
            raise ValueError("mismatched variable tags %r and %r"
                             % (self.tag, other.tag))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(dense_add(list(self.coeffs), list(other.coeffs)), self.tag)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(dense_sub(list(self.coeffs), list(other.coeffs)), self.tag)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.tag)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return Poly(dense_mul(list(self.coeffs), list(other.coeffs), QQ),
                        self.tag)
        return Poly(dense_scale(list(self.coeffs), mpq(other)), self.tag)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.tag == other.tag
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.tag, self.coeffs))

    def deriv(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.tag)

    def times_x(self) -> "Poly":
        return Poly((mpq(0),) + self.coeffs, self.tag)

    def __call__(self, x):
        out = mpq(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def coeff(self, k: int) -> Rat:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else mpq(0)

    def reflect(self) -> "Poly":
        """Rewrite in the complementary variable: p(x) -> p(1 - y) where
        y carries the other tag."""
        out = [mpq(0)] * max(1, len(self.coeffs))
        # expand sum c_k (1-y)^k via repeated multiplication
        acc = [mpq(1)]
        for k, c in enumerate(self.coeffs):
            if k:
                acc = dense_mul(acc, [mpq(1), mpq(-1)], QQ)
            if c:
                out = dense_add(out, dense_scale(acc, c))
        return Poly(out, "t" if self.tag == "s" else "s")

    def __repr__(self):
        return "Poly(%s; %s)" % (self.tag,
                                 "[" + ", ".join(rat_str(c) for c in self.coeffs) + "]")

    def to_json(self):
        return {"var": self.tag, "coeffs": [rat_str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(d) -> "Poly":
        from .scalars import rat
        return Poly([rat(c) for c in d["coeffs"]], d["var"])


# ---------------------------------------------------------------------------
# RationalFunction over a generic field
# ---------------------------------------------------------------------------

class RationalFunction:
    """Reduced num/den pair of dense polynomials in one formal symbol.

    Invariants: gcd(num, den) = 1 and den is monic.  Poles at the origin
    are permitted (the denominator may have zero constant term); the
    Laurent expansion about the origin is available exactly.
    """

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den=None, field: Field = QQ, *, _reduced=False):
        object.__setattr__(self, "field", field)
        num = _trim([field.coerce(c) for c in num])
        den = [field.one] if den is None else _trim([field.coerce(c) for c in den])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = self._reduce(num, den, field)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def _reduce(num, den, field):
        if not num:
            return [], [field.one]
        g = dense_gcd(num, den, field)
        if len(g) > 1:
            num, _ = dense_divmod(num, g, field)
            den, _ = dense_divmod(den, g, field)
        lead = den[-1]
        if lead != field.one:
            inv = field.one / lead
            num = [c * inv for c in num]
            den = [c * inv for c in den]
        return num, den

    # -- constructors ---------------------------------------------------
    @staticmethod
    def const(c, field: Field = QQ) -> "RationalFunction":
        return RationalFunction([field.coerce(c)], None, field)

    @staticmethod
    def variable(field: Field = QQ) -> "RationalFunction":
        return RationalFunction([field.zero, field.one], None, field)

    # -- arithmetic -----------------------------------------------------
    def _c(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction([self.field.coerce(other)], None, self.field)

    def __add__(self, other):
        o = self._c(other)
        f = self.field
        num = dense_add(dense_mul(list(self.num), list(o.den), f),
                        dense_mul(list(o.num), list(self.den), f))
        den = dense_mul(list(self.den), list(o.den), f)
        return RationalFunction(num, den, f)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction([-c for c in self.num], list(self.den),
                                self.field, _reduced=True)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) + (-self)

    def __mul__(self, other):
        o = self._c(other)
        f = self.field
        return RationalFunction(dense_mul(list(self.num), list(o.num), f),
                                dense_mul(list(self.den), list(o.den), f), f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        f = self.field
        return RationalFunction(dense_mul(list(self.num), list(o.den), f),
                                dense_mul(list(self.den), list(o.num), f), f)

    def __rtruediv__(self, other):
        return self._c(other) / self

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, int)) and other != 0:
            return NotImplemented
        o = self._c(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- structure ------------------------------------------------------
    def valuation(self) -> int | None:
        """Order of vanishing at the origin (None for the zero function).
        Negative values are pole orders."""
        if not self.num:
            return None
        vn = next(i for i, c in enumerate(self.num) if c)
        vd = next(i for i, c in enumerate(self.den) if c)
        return vn - vd

    def pole_order(self) -> int:
        v = self.valuation()
        return max(0, -v) if v is not None else 0

    def eval(self, x):
        """Exact evaluation at a field point (must not be a pole)."""
        f = self.field
        d = dense_eval(list(self.den), x, f)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return dense_eval(list(self.num), x, f) / d

    def subst_linear(self, a, b) -> "RationalFunction":
        """Substitute symbol -> a*symbol + b exactly."""
        f = self.field
        a = f.coerce(a)
        b = f.coerce(b)
        lin = [b, a]

        def comp(cs):
            out = []
            acc = [f.one]
            for k, c in enumerate(cs):
                if k:
                    acc = dense_mul(acc, lin, f)
                if c:
                    out = dense_add(out, dense_scale(acc, c))
            return out

        return RationalFunction(comp(list(self.num)), comp(list(self.den)), f)

    def laurent(self, upto: int) -> dict[int, object]:
        """Exact Laurent coefficients about the origin for orders
        <= ``upto`` (and >= the leading order)."""
        if not self.num:
            return {}
        f = self.field
        vn = next(i for i, c in enumerate(self.num) if c)
        vd = next(i for i, c in enumerate(self.den) if c)
        lead = vn - vd
        if upto < lead:
            return {}
        n = upto - lead + 1
        nhat = list(self.num[vn:])
        dhat = list(self.den[vd:])
        inv0 = f.one / dhat[0]
        series = []
        for k in range(n):
            acc = nhat[k] if k < len(nhat) else f.zero
            for j in range(1, min(k, len(dhat) - 1) + 1):
                acc = acc - dhat[j] * series[k - j]
            series.append(acc * inv0)
        return {lead + k: c for k, c in enumerate(series) if c}

    def __repr__(self):
        def side(cs):
            return "[" + ", ".join(repr(c) for c in cs) + "]"
        if self.den == (self.field.one,):
            return "RF(%s)" % side(self.num)
        return "RF(%s / %s)" % (side(self.num), side(self.den))

    def to_json(self):
        enc = (rat_str if self.field is QQ
               else (lambda c: c.to_json()))
        return {"num": [enc(c) for c in self.num],
                "den": [enc(c) for c in self.den]}


def ratfunc_field(base: Field) -> Field:
    """Field descriptor for rational functions over ``base`` (so series
    code can run with a formal parameter in the coefficients)."""
    zero = RationalFunction([], None, base)
    one = RationalFunction([base.one], None, base)

    def coerce(x):
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction([base.coerce(x)], None, base)

    return Field("RF(%s)" % base.name, zero, one, coerce)

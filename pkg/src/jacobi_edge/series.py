"""Shifted-exponent series: finite sums of c * (1-x)^(q*lam2 + l).

The class keys terms by the pair (q, l) with q a non-negative integer
counting how many times the shift parameter lam2 enters the exponent and
l an integer offset.  Keys are *formal*: two keys are never merged even
if their exponents coincide numerically for the particular lam2 at hand.
All recursion steps are linear, so formal keys keep the generic-lam2
structure of the output intact; numeric evaluation sums whatever
coincides.

Coefficients live in an arbitrary exact field (plain rationals, or
rational functions when lam2 itself is kept symbolic).  Negative l is
legal transiently (the derivative lowers l before multiplication by
x(x-1) restores it); `check_exit_invariant` enforces l >= 0 for q >= 1
at the public boundaries.
"""

from __future__ import annotations

import mpmath

from gmpy2 import mpq

from .scalars import Field, QQ, rat_str


class LambdaSeries:
    """Finite sum over classes (q, l) of coeff * (1-x)^(q*lam2 + l)."""

    __slots__ = ("lambda2", "terms", "field")

    def __init__(self, lambda2, terms: dict | None = None, field: Field = QQ):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "lambda2",
                           lambda2 if field is not QQ else mpq(lambda2))
        clean = {}
        if terms:
            for (q, l), c in terms.items():
                if c:
                    clean[(int(q), int(l))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LambdaSeries is immutable")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def constant(c, lambda2, field: Field = QQ) -> "LambdaSeries":
        c = field.coerce(c)
        return LambdaSeries(lambda2, {(0, 0): c} if c else {}, field)

    # -- linear structure -----------------------------------------------
    def _like(self, terms) -> "LambdaSeries":
        return LambdaSeries(self.lambda2, terms, self.field)

    def __add__(self, other: "LambdaSeries") -> "LambdaSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc:
                out[k] = acc
            elif k in out:
                del out[k]
        return self._like(out)

    def __sub__(self, other: "LambdaSeries") -> "LambdaSeries":
        return self + other.scale(-self.field.one)

    def scale(self, k) -> "LambdaSeries":
        if not k:
            return self._like({})
        return self._like({key: c * k for key, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, LambdaSeries)
                and self.terms == other.terms
                and self.lambda2 == other.lambda2)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- exponent operations ---------------------------------------------
    def exponent(self, q: int, l: int):
        """q*lam2 + l as a field element."""
        return q * self.lambda2 + l

    def deriv(self) -> "LambdaSeries":
        """d/dx: c*(1-x)^e  ->  -c*e*(1-x)^(e-1), i.e. key (q, l-1)."""
        out = {}
        for (q, l), c in self.terms.items():
            e = self.exponent(q, l)
            nc = -(c * e)
            if nc:
                k = (q, l - 1)
                acc = out.get(k)
                acc = nc if acc is None else acc + nc
                if acc:
                    out[k] = acc
                elif k in out:
                    del out[k]
        return self._like(out)

    def times_one_minus_x(self) -> "LambdaSeries":
        return self._like({(q, l + 1): c for (q, l), c in self.terms.items()})

    def times_x(self) -> "LambdaSeries":
        """x = 1 - (1-x): key (q,l) minus key (q,l+1)."""
        return self + self.times_one_minus_x().scale(-self.field.one)

    def times_x_xm1(self) -> "LambdaSeries":
        """Multiply by x(x-1) = -x(1-x)."""
        return self.times_x().times_one_minus_x().scale(-self.field.one)

    # -- invariants -----------------------------------------------------
    def check_exit_invariant(self):
        bad = [k for k in self.terms if k[0] >= 1 and k[1] < 0]
        if bad:
            raise ValueError("negative offset survived a sweep for keys %s "
                             "(parameters outside the admissible range?)" % bad)
        return self

    def max_coeff_digits(self) -> int:
        d = 1
        for c in self.terms.values():
            if isinstance(c, mpq):
                d = max(d, c.numerator.bit_length(), c.denominator.bit_length())
        return int(d * 0.302) + 1

    # -- evaluation -----------------------------------------------------
    def eval_mpf(self, x, dps: int | None = None):
        """Numeric value at x in [0, 1] (requires numeric lam2).

        Relative accuracy is tied to the largest term: the working
        precision is raised with the coefficient size so the result is
        good to ~1e-12 relative to the dominant term.
        """
        if self.field is not QQ:
            raise TypeError("numeric evaluation needs a numeric shift parameter")
        if dps is None:
            dps = max(30, self.max_coeff_digits() + 15)
        with mpmath.workdps(dps):
            xm = mpmath.mpf(x) if not isinstance(x, mpq) else _mpf_of(x)
            if xm < 0 or xm > 1:
                raise ValueError("evaluation point outside [0, 1]")
            u = 1 - xm
            total = mpmath.mpf(0)
            for (q, l), c in self.terms.items():
                e = self.exponent(q, l)
                if u == 0:
                    if e == 0:
                        term = _mpf_of(c)
                    elif e > 0:
                        continue
                    else:
                        raise ValueError("divergent term at x = 1")
                else:
                    term = _mpf_of(c) * mpmath.power(u, _mpf_of(e))
                total += term
            return +total

    # -- serialization ----------------------------------------------------
    def to_json(self):
        enc = rat_str if self.field is QQ else (lambda c: c.to_json())
        lam = (rat_str(self.lambda2) if self.field is QQ
               else self.lambda2.to_json())
        return {"lambda2": lam,
                "terms": [{"q": q, "l": l, "coeff": enc(c)}
                          for (q, l), c in sorted(self.terms.items())]}

    @staticmethod
    def from_json(d) -> "LambdaSeries":
        from .scalars import rat
        terms = {(t["q"], t["l"]): rat(t["coeff"]) for t in d["terms"]}
        return LambdaSeries(rat(d["lambda2"]), terms)

    def __repr__(self):
        items = ", ".join("(%d,%d): %s" % (q, l, c)
                          for (q, l), c in sorted(self.terms.items()))
        return "LambdaSeries(lam2=%s, {%s})" % (self.lambda2, items)


def _mpf_of(c):
    if isinstance(c, mpq):
        return mpmath.mpf(int(c.numerator)) / mpmath.mpf(int(c.denominator))
    return mpmath.mpf(c)

"""Scalar fields used by the solvers.

Three arithmetic policies are supported:

* ``exact``    -- :class:`fractions.Fraction`, no rounding at all
* ``float``    -- IEEE binary64 (plain Python floats)
* ``extended`` -- mpmath floats at a configurable number of decimal digits

All solver code is written against the small interface below, so the same
elimination and Horner loops run unchanged in each field.
"""
import math
from fractions import Fraction

import mpmath


def parse_rational(value):
    """Turn an int, float or ``"p/q"`` string into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    if isinstance(value, (int, float)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class Field:
    def __init__(self, kind="float", dps=50):
        if kind not in ("exact", "float", "extended"):
            raise ValueError(f"unknown scalar field {kind!r}")
        self.kind = kind
        self.dps = int(dps)
        if kind == "extended":
            self.mp = mpmath.MPContext()
            self.mp.dps = self.dps
            self.eps = float(mpmath.mpf(10) ** (-self.dps))
        elif kind == "float":
            self.mp = None
            self.eps = 2.0 ** -52
        else:
            self.mp = None
            self.eps = 0.0

    def __repr__(self):
        if self.kind == "extended":
            return f"Field('extended', dps={self.dps})"
        return f"Field({self.kind!r})"

    def __eq__(self, other):
        return (isinstance(other, Field) and self.kind == other.kind
                and (self.kind != "extended" or self.dps == other.dps))

    def __hash__(self):
        return hash((self.kind, self.dps if self.kind == "extended" else 0))

    @property
    def exact(self):
        return self.kind == "exact"

    def __call__(self, value):
        """Convert ``value`` (int, Fraction, float, str, mpf) into the field."""
        if self.kind == "exact":
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError("non-finite value in exact field")
            return parse_rational(value)
        if self.kind == "float":
            if isinstance(value, str):
                return float(Fraction(value))
            return float(value)
        if isinstance(value, Fraction):
            return self.mp.mpf(value.numerator) / value.denominator
        if isinstance(value, str):
            q = Fraction(value)
            return self.mp.mpf(q.numerator) / q.denominator
        return self.mp.mpf(value)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def pi(self):
        if self.kind == "extended":
            return +self.mp.pi
        if self.kind == "float":
            return math.pi
        raise ValueError("pi is not representable in the exact field")

    def exp(self, x):
        if self.kind == "extended":
            return self.mp.exp(x)
        if self.kind == "float":
            return math.exp(x)
        raise ValueError("exp is not available in the exact field")

    def sqrt(self, x):
        if self.kind == "extended":
            return self.mp.sqrt(x)
        if self.kind == "float":
            return math.sqrt(x)
        raise ValueError("sqrt is not available in the exact field")

    def power(self, x, p):
        """Real power x**p for x > 0 (p may be non-integer)."""
        if self.kind == "extended":
            return self.mp.power(x, p)
        if self.kind == "float":
            return float(x) ** float(p)
        raise ValueError("real powers are not available in the exact field")

    def beta(self, a, b):
        if self.kind == "extended":
            return self.mp.beta(a, b)
        if self.kind == "float":
            return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
        raise ValueError("beta is not available in the exact field")

    def is_negligible(self, value, scale, n=1):
        """True if ``value`` is zero up to rounding relative to ``scale``."""
        if self.kind == "exact":
            return value == 0
        return abs(value) <= 1000.0 * (n + 1) * self.eps * abs(scale)


def to_float(value):
    return float(value)


FLOAT = Field("float")
EXACT = Field("exact")

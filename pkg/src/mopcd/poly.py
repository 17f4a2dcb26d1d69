"""Dense univariate polynomials over an arbitrary scalar field."""
from dataclasses import dataclass

import numpy as np


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True, eq=False)
class Poly:
    """Polynomial ``sum(c[i] * x**i)`` with coefficients in ascending degree.

    Trailing zeros are only stripped when they compare equal to zero, so a
    floating-point polynomial keeps its nominal degree.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, degree, one=1):
        return cls((0,) * degree + (one,))

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        n = max(len(self), len(other))
        return Poly(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero() or other.is_zero():
                return Poly.zero()
            out = [0] * (len(self) + len(other) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(tuple(out))
        return Poly(tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def mulx(self):
        """Return ``x * p(x)``."""
        if self.is_zero():
            return self
        return Poly((0 * self.coeffs[0],) + self.coeffs)

    def quotient_at(self, z):
        """Coefficients of ``(p(x) - p(z)) / (x - z)`` and the value ``p(z)``.

        Synthetic division; the quotient is returned as a plain list in
        ascending degree (its coefficients depend on ``z``).
        """
        n = self.degree
        if n < 0:
            return [], 0
        b = [0] * n
        acc = self.coeffs[n]
        for i in range(n - 1, -1, -1):
            b[i] = acc
            acc = acc * z + self.coeffs[i]
        return b, acc

    def map(self, convert):
        return Poly(tuple(convert(c) for c in self.coeffs))

    def to_array(self, length=None):
        """Float coefficient array, zero padded to ``length`` if given."""
        n = len(self.coeffs) if length is None else length
        out = np.zeros(n)
        for i, c in enumerate(self.coeffs[:n]):
            out[i] = float(c)
        return out

    def max_abs_coeff(self):
        return max((abs(c) for c in self.coeffs), default=0)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def max_coeff_diff(p, q):
    """Max-norm of the coefficient vector of ``p - q``."""
    n = max(len(p), len(q))
    return max((abs(p[i] - q[i]) for i in range(n)), default=0)

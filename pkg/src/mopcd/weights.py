"""Weight systems: declared measures, their moments, pointwise values and integrals.

Weights are indexed from 1 to m throughout the public API, matching the usual
notation w_1, ..., w_m.
"""
import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
from scipy import integrate as _sp_integrate

from .errors import NotAnAtom, OrderOverflow, QuadratureFailure
from .fields import Field, parse_rational
from .poly import Poly

DEFAULT_MAX_ORDER = 400
# half-width of the truncated Gaussian domain, in units of the scale
GAUSS_RADIUS = 16


def _double_factorial(n):
    out = 1
    for t in range(n, 1, -2):
        out *= t
    return out


@dataclass(frozen=True)
class GaussianDrift:
    """w(x) = exp(-x**2 / (2 scale**2) + a x) on the real line."""

    a: Fraction
    scale: Fraction = Fraction(1)
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "scale", parse_rational(self.scale))
        if self.scale <= 0:
            raise ValueError("GaussianDrift scale must be positive")

    kind = "gaussian_drift"
    discrete = False

    @property
    def center(self):
        return self.a * self.scale ** 2

    def domain(self):
        c, s = float(self.center), float(self.scale)
        return c - GAUSS_RADIUS * s, c + GAUSS_RADIUS * s

    def reduced_moment(self, j):
        """E[(center + scale Z)**j] for standard normal Z, as an exact Fraction."""
        c, s = self.center, self.scale
        total = Fraction(0)
        for i in range(0, j + 1, 2):
            total += comb(j, i) * _double_factorial(i - 1) * s ** i * c ** (j - i)
        return total

    def mass_factor(self, field):
        """sqrt(2 pi) * scale * exp(a**2 scale**2 / 2), the total mass."""
        s = field(self.scale)
        return field.sqrt(2 * field.pi()) * s * field.exp(field(self.a) ** 2 * s * s / 2)

    def moment(self, field, j):
        return self.mass_factor(field) * field(self.reduced_moment(j))

    def value(self, field, x):
        s = field(self.scale)
        return field.exp(-x * x / (2 * s * s) + field(self.a) * x)

    def to_json(self):
        return {"kind": self.kind, "a": _num_json(self.a), "scale": _num_json(self.scale)}


@dataclass(frozen=True)
class JacobiInterval:
    """w(x) = (b - x)**alpha * (x - a)**beta on [a, b], zero elsewhere."""

    a: Fraction
    b: Fraction
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        for name in ("a", "b", "alpha", "beta"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if not self.a < self.b:
            raise ValueError("JacobiInterval needs a < b")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("Jacobi exponents must exceed -1")

    kind = "jacobi"
    discrete = False

    @property
    def center(self):
        return (self.a + self.b) / 2

    def domain(self):
        return float(self.a), float(self.b)

    def moment(self, field, j):
        a, b = field(self.a), field(self.b)
        al, be = field(self.alpha), field(self.beta)
        length = b - a
        total = field(0)
        for i in range(j + 1):
            total += comb(j, i) * a ** (j - i) * length ** i * field.beta(be + i + 1, al + 1)
        return field.power(length, al + be + 1) * total

    def value(self, field, x):
        if x <= self.a or x >= self.b:
            return field(0)
        return (field.power(field(self.b) - x, field(self.alpha))
                * field.power(x - field(self.a), field(self.beta)))

    def to_json(self):
        return {"kind": self.kind, "a": _num_json(self.a), "b": _num_json(self.b),
                "alpha": _num_json(self.alpha), "beta": _num_json(self.beta)}


@dataclass(frozen=True)
class DiscreteAtoms:
    """Finite positive combination of point masses."""

    atoms: tuple
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        atoms = tuple((parse_rational(x), parse_rational(w)) for x, w in self.atoms)
        if not atoms:
            raise ValueError("DiscreteAtoms needs at least one atom")
        locs = [x for x, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be pairwise distinct")
        if any(w <= 0 for _, w in atoms):
            raise ValueError("atom masses must be positive")
        object.__setattr__(self, "atoms", atoms)

    kind = "atoms"
    discrete = True

    @property
    def center(self):
        total = sum(w for _, w in self.atoms)
        return sum(x * w for x, w in self.atoms) / total

    def domain(self):
        locs = [float(x) for x, _ in self.atoms]
        return min(locs), max(locs)

    def locations(self):
        return [x for x, _ in self.atoms]

    def moment(self, field, j):
        return field(sum(w * x ** j for x, w in self.atoms))

    def mass_at(self, x):
        for loc, w in self.atoms:
            if loc == x:
                return w
        return None

    def value(self, field, x):
        w = self.mass_at(x)
        if w is None:
            raise NotAnAtom(f"{x} is not an atom location", point=x)
        return field(w)

    def to_json(self):
        return {"kind": self.kind, "atoms": [[_num_json(x), _num_json(w)] for x, w in self.atoms]}


MeasureSpec = (GaussianDrift, JacobiInterval, DiscreteAtoms)


def _num_json(q):
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


class WeightSystem:
    """m measures plus the scalar field all computations run in.

    ``scalar_mode`` is ``"exact"`` (rational arithmetic, only for systems made
    of DiscreteAtoms) or ``"float"``; in float mode ``precision`` picks
    binary64 or mpmath ``extended`` precision with ``dps`` decimal digits.

    Instances are immutable apart from an internal moment cache whose entries
    are deterministic, so sharing between threads is safe.
    """

    def __init__(self, measures, scalar_mode="float", precision="binary64", dps=50):
        measures = tuple(measures)
        if not measures:
            raise ValueError("a weight system needs at least one measure")
        for mu in measures:
            if not isinstance(mu, MeasureSpec):
                raise TypeError(f"unsupported measure {mu!r}")
        kinds = {mu.discrete for mu in measures}
        if len(kinds) > 1:
            raise ValueError("cannot mix discrete and continuous measures")
        if scalar_mode == "exact":
            if not all(isinstance(mu, DiscreteAtoms) for mu in measures):
                raise ValueError("exact mode requires DiscreteAtoms measures only")
            field = Field("exact")
        elif scalar_mode == "float":
            if precision == "binary64":
                field = Field("float")
            elif precision == "extended":
                if dps < 30:
                    raise ValueError("extended precision needs at least 30 digits")
                field = Field("extended", dps)
            else:
                raise ValueError(f"unknown precision {precision!r}")
        else:
            raise ValueError(f"unknown scalar mode {scalar_mode!r}")
        self.measures = measures
        self.scalar_mode = scalar_mode
        self.precision = precision if scalar_mode == "float" else "exact"
        self.field = field
        self._moments = {}

    @property
    def m(self):
        return len(self.measures)

    @property
    def discrete(self):
        return self.measures[0].discrete

    def __repr__(self):
        return f"WeightSystem({list(self.measures)!r}, field={self.field!r})"

    def measure(self, k):
        if not 1 <= k <= self.m:
            raise IndexError(f"weight index {k} outside 1..{self.m}")
        return self.measures[k - 1]

    def with_field(self, scalar_mode="float", precision="binary64", dps=50):
        return WeightSystem(self.measures, scalar_mode, precision, dps)

    def atom_union(self):
        """Sorted union of atom locations (discrete systems only)."""
        locs = set()
        for mu in self.measures:
            locs.update(mu.locations())
        return sorted(locs)

    def domain(self):
        lo = min(mu.domain()[0] for mu in self.measures)
        hi = max(mu.domain()[1] for mu in self.measures)
        return lo, hi

    def centers(self):
        return [float(mu.center) for mu in self.measures]

    def sample_interval(self):
        """Interval covering the essential support, used for check grids."""
        if self.discrete:
            return self.domain()
        lo, hi = [], []
        for mu in self.measures:
            if isinstance(mu, GaussianDrift):
                c, s = float(mu.center), float(mu.scale)
                lo.append(c - 4 * s)
                hi.append(c + 4 * s)
            else:
                a, b = mu.domain()
                lo.append(a)
                hi.append(b)
        return min(lo), max(hi)

    def to_json(self):
        doc = {"scalar_mode": self.scalar_mode,
               "measures": [mu.to_json() for mu in self.measures]}
        if self.scalar_mode == "float" and self.precision == "extended":
            doc["precision"] = "extended"
            doc["dps"] = self.field.dps
        return doc


def measure_from_json(doc):
    kind = doc.get("kind")
    if kind == "gaussian_drift":
        return GaussianDrift(doc["a"], doc.get("scale", 1))
    if kind == "jacobi":
        return JacobiInterval(doc["a"], doc["b"], doc.get("alpha", 0), doc.get("beta", 0))
    if kind == "atoms":
        return DiscreteAtoms(tuple(tuple(pair) for pair in doc["atoms"]))
    raise ValueError(f"unknown measure kind {kind!r}")


def weight_system_from_json(doc):
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    measures = [measure_from_json(d) for d in doc["measures"]]
    return WeightSystem(measures, doc.get("scalar_mode", "float"),
                        doc.get("precision", "binary64"), doc.get("dps", 50))


def load_weight_system(path):
    with open(path, encoding="utf-8") as fh:
        return weight_system_from_json(json.load(fh))


def moment(ws, k, j):
    """The j-th moment of weight k in the system's field."""
    mu = ws.measure(k)
    if j < 0:
        raise ValueError("moment order must be non-negative")
    if j > mu.max_order:
        raise OrderOverflow(f"moment order {j} exceeds declared maximum {mu.max_order}",
                            weight=k, order=j)
    key = (k, j)
    val = ws._moments.get(key)
    if val is None:
        val = mu.moment(ws.field, j)
        ws._moments[key] = val
    return val


def weight_value(ws, k, x):
    """w_k(x); for atoms, the mass at x (NotAnAtom elsewhere)."""
    return ws.measure(k).value(ws.field, ws.field(x) if not ws.discrete else _as_rational(x))


def weight_value_or_zero(ws, k, x):
    """Like weight_value but returns zero off the atom set of a discrete measure."""
    mu = ws.measure(k)
    if mu.discrete:
        w = mu.mass_at(_as_rational(x))
        return ws.field(0 if w is None else w)
    return mu.value(ws.field, ws.field(x))


def _as_rational(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def integrate(ws, k, f, full_output=False):
    """Integral of f against weight k.

    Polynomials are integrated exactly through the moments (in the system's
    field). Any other callable goes to adaptive quadrature in binary64 and the
    result is a float; ``full_output`` also returns the error estimate.
    """
    if isinstance(f, Poly):
        total = ws.field(0)
        for i, c in enumerate(f.coeffs):
            if c != 0:
                total = total + c * moment(ws, k, i)
        return (total, 0.0) if full_output else total
    mu = ws.measure(k)
    if mu.discrete:
        total = sum(float(f(float(x))) * float(w) for x, w in mu.atoms)
        return (total, 0.0) if full_output else total
    val, err = _quad_against(mu, f)
    return (val, err) if full_output else val


def _quad(func, lo, hi, points=None, weight=None, wvar=None, epsrel=1e-13, epsabs=0.0):
    with warnings.catch_warnings():
        warnings.simplefilter("error", _sp_integrate.IntegrationWarning)
        try:
            if weight is not None:
                val, err = _sp_integrate.quad(func, lo, hi, weight=weight, wvar=wvar,
                                              epsabs=epsabs, epsrel=epsrel, limit=400)
            else:
                val, err = _sp_integrate.quad(func, lo, hi, points=points, epsabs=epsabs,
                                              epsrel=epsrel, limit=400)
        except _sp_integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"adaptive quadrature did not converge: {exc}",
                                    interval=(lo, hi)) from None
    return val, err


def _gauss_breakpoints(center, scale, lo, hi):
    pts = [center + t * scale for t in (-8, -4, -2, 0, 2, 4, 8)]
    return [p for p in pts if lo < p < hi]


def _quad_against(mu, f):
    if isinstance(mu, GaussianDrift):
        c, s, a = float(mu.center), float(mu.scale), float(mu.a)
        lo, hi = mu.domain()
        shift = a * a * s * s / 2

        def integrand(x):
            # exp(-x^2/2s^2 + a x) = exp(shift) * exp(-(x-c)^2 / 2s^2)
            return f(x) * math.exp(-((x - c) / s) ** 2 / 2)

        val, err = _quad(integrand, lo, hi, points=_gauss_breakpoints(c, s, lo, hi))
        return val * math.exp(shift), err * math.exp(shift)
    lo, hi = mu.domain()
    return _quad(f, lo, hi, weight="alg", wvar=(float(mu.beta), float(mu.alpha)))


def moment_by_quadrature(ws, k, j):
    """Moment of order j computed by adaptive quadrature (independent route)."""
    return integrate(ws, k, lambda x: x ** j)


def line_integral(ws, f, points=None):
    """Integral over the real line of a callable that already carries weights.

    For discrete systems this is the sum of f over the union of atoms.
    """
    if ws.discrete:
        return sum(float(f(float(x))) for x in ws.atom_union())
    lo, hi = ws.domain()
    bps = set()
    for mu in ws.measures:
        if isinstance(mu, GaussianDrift):
            bps.update(_gauss_breakpoints(float(mu.center), float(mu.scale), lo, hi))
        else:
            a, b = mu.domain()
            bps.update(p for p in (a, b) if lo < p < hi)
    if points:
        bps.update(p for p in points if lo < p < hi)
    val, _ = _quad(f, lo, hi, points=sorted(bps) or None, epsrel=1e-12)
    return val


def gauss_legendre_grid(ws, nodes_per_panel=24, panels=None):
    """Composite Gauss-Legendre nodes and weights covering the continuous support."""
    lo, hi = ws.domain()
    if panels is None:
        panels = max(16, int(math.ceil((hi - lo) / 0.5)))
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws_ = (half[:, None] * w[None, :]).ravel()
    return xs, ws_

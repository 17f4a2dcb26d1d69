"""Residual reports and the sample points used by identity checks."""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

ABS_FLOOR = 1e-13


@dataclass
class Report:
    identity: str
    indices: dict
    residual_abs: float
    residual_rel: float
    tol: float
    passed: bool
    point: object = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {"identity": self.identity, "indices": _plain(self.indices),
               "residual_abs": float(self.residual_abs),
               "residual_rel": float(self.residual_rel), "tol": float(self.tol),
               "pass": bool(self.passed)}
        if self.extra:
            out["extra"] = _plain(self.extra)
        return out

    def rh_json(self):
        """Layout used by the Riemann-Hilbert checks."""
        out = {"check": self.identity, "residual": float(self.residual_rel),
               "tol": float(self.tol), "pass": bool(self.passed)}
        if self.point is not None:
            z = complex(self.point)
            key = "x" if z.imag == 0 and self.extra.get("real_axis") else "z"
            out[key] = z.real if key == "x" else [z.real, z.imag]
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def compare(identity, lhs, rhs, tol, indices=None, exact=False, **extra):
    """Compare two equal-length sequences of values.

    The relative residual is max|lhs - rhs| over the larger side's sup norm.
    In exact arithmetic the check passes only on exact equality.
    """
    lhs = list(lhs)
    rhs = list(rhs)
    if len(lhs) != len(rhs):
        raise ValueError("sides have different lengths")
    diffs = [abs(a - b) for a, b in zip(lhs, rhs)]
    res_abs = max(diffs, default=0)
    scale = max(max((abs(v) for v in lhs), default=0), max((abs(v) for v in rhs), default=0))
    res_rel = res_abs / scale if scale != 0 else res_abs
    if exact:
        passed = res_abs == 0
        tol = 0.0
    else:
        passed = float(res_rel) <= tol or float(scale) < ABS_FLOOR
    return Report(identity, dict(indices or {}), float(res_abs), float(res_rel), tol, passed,
                  extra=extra)


def chebyshev_points(lo, hi, count=32):
    k = np.arange(count)
    t = np.cos((2 * k + 1) * np.pi / (2 * count))
    return list(0.5 * (lo + hi) + 0.5 * (hi - lo) * t[::-1])


def sample_grid(ws, count=32):
    """Points for pointwise identities: atoms for discrete systems, Chebyshev otherwise."""
    if ws.discrete:
        return list(ws.atom_union())
    lo, hi = ws.sample_interval()
    return chebyshev_points(lo, hi, count)


def sample_pairs(ws, count=64, seed=0):
    """Seeded (x, y) pairs with x != y.

    For discrete systems y runs over atoms and x over rationals with small
    denominators (so exact arithmetic stays exact).
    """
    rng = np.random.default_rng(seed)
    lo, hi = ws.sample_interval()
    pairs = []
    if ws.discrete:
        atoms = ws.atom_union()
        while len(pairs) < count:
            y = atoms[int(rng.integers(len(atoms)))]
            num = int(rng.integers(int(lo * 7) - 7, int(hi * 7) + 8))
            x = Fraction(num, 7)
            if x != y:
                pairs.append((x, y))
        return pairs
    while len(pairs) < count:
        x, y = rng.uniform(lo, hi, size=2)
        if abs(x - y) > 1e-3:
            pairs.append((float(x), float(y)))
    return pairs

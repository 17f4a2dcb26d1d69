"""Riemann-Hilbert matrices Y (type II) and X (type I) and their checks.

Everything here is evaluated in complex binary64; polynomial coefficients from
an extended-precision solver are rounded once on the way in.

Cauchy transforms of p(x) w_k(x) are computed by one of two routes:

* ``closed`` -- Gaussian weights only: split p(x)/(x-z) into the polynomial
  (p(x) - p(z))/(x - z), integrated through moments, plus p(z) times the
  Stieltjes transform of the weight, which is a scaled Faddeeva function.
* ``quad``   -- adaptive quadrature of the real and imaginary parts.

Boundary values on the real line come from the Plemelj decomposition
(principal value plus or minus pi i times the density), or for Gaussian
weights from the closed form evaluated on the axis.
"""
import cmath
import math

import numpy as np
from scipy.special import wofz

from .checks import Report, compare
from .errors import (DegenerateIndex, DiagonalPoint, OnAxisWithoutMode,
                     UnsupportedMeasure)
from .kernel import kernel_cd, weight_values_array
from .mop import MOPSolver, MultiIndex
from .weights import GaussianDrift, JacobiInterval, _quad, gauss_legendre_grid

TWO_PI_I = 2j * math.pi
CLOSED_FORM_RADIUS = 4.0
GL_MIN_IMAG = 0.25
TOL_OFF_AXIS = 1e-8
TOL_BOUNDARY = 1e-6


def _fpoly(p):
    return [float(c) for c in p.coeffs]


def _horner(coeffs, z):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _float_moments(ws, k, count):
    from .weights import moment
    return [float(moment(ws, k, i)) for i in range(count)]


def _weight(mu, x):
    if isinstance(mu, GaussianDrift):
        s, a = float(mu.scale), float(mu.a)
        return math.exp(-x * x / (2 * s * s) + a * x)
    if isinstance(mu, JacobiInterval):
        lo, hi = float(mu.a), float(mu.b)
        if x <= lo or x >= hi:
            return 0.0
        return (hi - x) ** float(mu.alpha) * (x - lo) ** float(mu.beta)
    raise UnsupportedMeasure("pointwise density needs a continuous measure")


def _gauss_stieltjes_weight(mu, z, boundary=0):
    """int w(x) / (x - z) dx for a Gaussian weight.

    ``boundary`` = +1/-1 evaluates the limit from the upper/lower half plane
    at real z.
    """
    c, s, a = float(mu.center), float(mu.scale), float(mu.a)
    shift = math.exp(a * a * s * s / 2)
    zeta = (z - c) / (s * math.sqrt(2))
    if boundary:
        val = 1j * math.pi * wofz(complex(zeta.real, 0.0))
        return shift * (val if boundary > 0 else val.conjugate())
    if zeta.imag > 0:
        return shift * 1j * math.pi * wofz(zeta)
    return shift * (1j * math.pi * wofz(zeta.conjugate())).conjugate()


def _closed_stieltjes(ws, k, coeffs, z, boundary=0):
    mu = ws.measure(k)
    n = len(coeffs) - 1
    if n < 0:
        return 0j
    # synthetic division: p(x) = (x - z) q(x) + p(z)
    q = [0j] * n
    acc = complex(coeffs[n])
    for i in range(n - 1, -1, -1):
        q[i] = acc
        acc = acc * z + coeffs[i]
    pz = acc
    mom = _float_moments(ws, k, max(n, 1))
    poly_part = sum(qi * mom[i] for i, qi in enumerate(q))
    return poly_part + pz * _gauss_stieltjes_weight(mu, z, boundary)


def _quad_stieltjes(ws, k, coeffs, z):
    mu = ws.measure(k)
    lo, hi = mu.domain()

    def f(x, part):
        v = _horner(coeffs, x) / (x - z)
        return v.real if part == 0 else v.imag

    if isinstance(mu, GaussianDrift):
        c, s = float(mu.center), float(mu.scale)
        pts = sorted({p for p in (c - 4 * s, c, c + 4 * s, z.real) if lo < p < hi})

        def g(x, part):
            return f(x, part) * _weight(mu, x)

        if abs(z.imag) >= GL_MIN_IMAG:
            # panels are 0.5 wide, so the pole sits at least one half-width
            # off every panel and 32-point Gauss-Legendre converges to rounding;
            # unlike adaptive quad there are no stopping heuristics to trip over
            xs, wq = gauss_legendre_grid(ws, nodes_per_panel=32)
            vals = np.polyval(np.asarray(coeffs[::-1], dtype=complex), xs) / (xs - z)
            vals *= np.exp(-xs * xs / (2 * s * s) + float(mu.a) * xs)
            return complex(np.dot(wq, vals))
        # absolute tolerance from the L1 norm of the integrand, so a real or
        # imaginary part that cancels to ~0 does not demand relative accuracy
        xs, wq = gauss_legendre_grid(ws, nodes_per_panel=32)
        l1 = float(np.dot(wq, np.abs(np.polyval(np.asarray(coeffs[::-1], dtype=complex), xs)
                                     / (xs - z)) * np.exp(-xs * xs / (2 * s * s) + float(mu.a) * xs)))
        tol_abs = 1e-12 * l1
        re, _ = _quad(lambda x: g(x, 0), lo, hi, points=pts, epsrel=1e-12, epsabs=tol_abs)
        im, _ = _quad(lambda x: g(x, 1), lo, hi, points=pts, epsrel=1e-12, epsabs=tol_abs)
        return complex(re, im)
    ts = np.linspace(lo, hi, 4001)[1:-1]
    l1 = float(np.sum(np.abs(np.polyval(np.asarray(coeffs[::-1], dtype=complex), ts) / (ts - z))
                      * weight_values_array(ws, k, ts)) * (ts[1] - ts[0]))
    tol_abs = 1e-12 * l1
    xr = z.real
    if not lo < xr < hi:
        wvar = (float(mu.beta), float(mu.alpha))
        re, _ = _quad(lambda x: f(x, 0), lo, hi, weight="alg", wvar=wvar, epsrel=1e-12,
                      epsabs=tol_abs)
        im, _ = _quad(lambda x: f(x, 1), lo, hi, weight="alg", wvar=wvar, epsrel=1e-12,
                      epsabs=tol_abs)
        return complex(re, im)
    # split at Re z so the near-pole sits at an endpoint of both pieces; each
    # piece keeps one algebraic endpoint factor for weight="alg"
    out = 0j
    for part in (0, 1):
        left, _ = _quad(lambda x: f(x, part) * _jacobi_right(mu, x), lo, xr, weight="alg",
                        wvar=(float(mu.beta), 0.0), epsrel=1e-12, epsabs=tol_abs)
        right, _ = _quad(lambda x: f(x, part) * _jacobi_left(mu, x), xr, hi, weight="alg",
                         wvar=(0.0, float(mu.alpha)), epsrel=1e-12, epsabs=tol_abs)
        out += (left + right) * (1j if part else 1)
    return out


def stieltjes(ws, k, p, z, method="auto"):
    """int p(x) w_k(x) / (x - z) dx for z off the real axis."""
    z = complex(z)
    mu = ws.measure(k)
    coeffs = _fpoly(p)
    if mu.discrete:
        return sum(float(w) * _horner(coeffs, float(x)) / (float(x) - z) for x, w in mu.atoms)
    if z.imag == 0:
        raise OnAxisWithoutMode("real z needs a boundary side; use stieltjes_boundary", z=z)
    if method == "auto":
        if isinstance(mu, GaussianDrift):
            zeta = abs(z - float(mu.center)) / (float(mu.scale) * math.sqrt(2))
            method = "closed" if zeta <= CLOSED_FORM_RADIUS else "quad"
        else:
            method = "quad"
    if method == "closed":
        if not isinstance(mu, GaussianDrift):
            raise UnsupportedMeasure("closed-form transform only for Gaussian weights")
        return _closed_stieltjes(ws, k, coeffs, z)
    return _quad_stieltjes(ws, k, coeffs, z)


def atoms_stieltjes_exact(ws, k, p, z_re, z_im):
    """Exact (re, im) of sum_atoms m p(x)/(x - z) for rational z = z_re + i z_im."""
    from fractions import Fraction
    mu = ws.measure(k)
    if not mu.discrete:
        raise UnsupportedMeasure("exact finite sums need a discrete measure")
    a, b = Fraction(z_re), Fraction(z_im)
    re = im = Fraction(0)
    for x, w in mu.atoms:
        px = Fraction(p(Fraction(x)))
        d = (x - a) ** 2 + b * b
        re += w * px * (x - a) / d
        im += w * px * b / d
    return re, im


def principal_value(ws, k, p, x):
    """PV int p(t) w_k(t) / (t - x) dt by symmetric singularity subtraction."""
    mu = ws.measure(k)
    if mu.discrete:
        raise UnsupportedMeasure("principal values need a continuous measure")
    coeffs = _fpoly(p)
    lo, hi = mu.domain()
    x = float(x)
    if not lo < x < hi:
        raise ValueError("principal value point must be inside the support")

    def g(t):
        return _horner(coeffs, t).real * _weight(mu, t)

    d = min(x - lo, hi - x, 1.0) * 0.5
    gx = g(x)

    def inner(t):
        if t == x:
            return 0.0
        return (g(t) - gx) / (t - x)

    # absolute tolerance from int |g(t)| / max(|t - x|, d): pieces that nearly
    # cancel must not be asked for relative accuracy
    ts = np.linspace(lo, hi, 4001)[1:-1]
    gs = np.abs(np.polyval(np.real(np.asarray(coeffs[::-1], dtype=complex)), ts)
                * weight_values_array(ws, k, ts))
    tol_abs = 1e-12 * float(np.sum(gs / np.maximum(np.abs(ts - x), d)) * (ts[1] - ts[0]))

    # on a symmetric panel PV int dt/(t-x) vanishes, so only the difference remains
    centre, _ = _quad(inner, x - d, x + d, points=[x], epsrel=1e-12, epsabs=tol_abs)
    if isinstance(mu, GaussianDrift):
        c, s = float(mu.center), float(mu.scale)
        bps = [c - 4 * s, c, c + 4 * s]
        left_pts = [b for b in bps if lo < b < x - d]
        right_pts = [b for b in bps if x + d < b < hi]
        left, _ = _quad(lambda t: g(t) / (t - x), lo, x - d, points=left_pts or None,
                        epsrel=1e-12, epsabs=tol_abs)
        right, _ = _quad(lambda t: g(t) / (t - x), x + d, hi, points=right_pts or None,
                         epsrel=1e-12, epsabs=tol_abs)
    else:
        def poly_only(t):
            return _horner(coeffs, t).real / (t - x)

        # the algebraic endpoint factor is handled by weight="alg"
        left, _ = _quad(lambda t: poly_only(t) * _jacobi_right(mu, t), lo, x - d,
                        weight="alg", wvar=(float(mu.beta), 0.0), epsrel=1e-12,
                        epsabs=tol_abs)
        right, _ = _quad(lambda t: poly_only(t) * _jacobi_left(mu, t), x + d, hi,
                         weight="alg", wvar=(0.0, float(mu.alpha)), epsrel=1e-12,
                         epsabs=tol_abs)
    return centre + left + right


def _jacobi_right(mu, t):
    return (float(mu.b) - t) ** float(mu.alpha)


def _jacobi_left(mu, t):
    return (t - float(mu.a)) ** float(mu.beta)


def stieltjes_boundary(ws, k, p, x, side, method="plemelj"):
    """Boundary value of int p w_k/(t - z) dt as z -> x from above (+1) or below (-1)."""
    mu = ws.measure(k)
    if mu.discrete:
        raise UnsupportedMeasure("boundary values need a continuous measure")
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    x = float(x)
    if method == "analytic":
        if not isinstance(mu, GaussianDrift):
            raise UnsupportedMeasure("analytic boundary values only for Gaussian weights")
        return _closed_stieltjes(ws, k, _fpoly(p), complex(x, 0.0), boundary=side)
    density = _horner(_fpoly(p), x).real * _weight(mu, x)
    return principal_value(ws, k, p, x) + side * 1j * math.pi * density


def cauchy_transform(ws, n, j, z, solver=None, method="auto"):
    """R_{n,j}(z) = (1/2 pi i) int P_n(x) w_j(x) / (x - z) dx."""
    solver = solver if solver is not None else MOPSolver(ws)
    return stieltjes(ws, j, solver.P(MultiIndex(n)), z, method) / TWO_PI_I


class _Transform:
    """Chooses off-axis or boundary evaluation for a fixed point."""

    def __init__(self, ws, z, side=0, method="auto"):
        self.ws = ws
        self.z = complex(z)
        self.side = side
        self.method = method
        if self.z.imag == 0 and not side and not ws.discrete:
            raise OnAxisWithoutMode("real point needs side=+1 or -1", z=z)

    def __call__(self, k, p):
        if self.side:
            meth = self.method if self.method in ("plemelj", "analytic") else "plemelj"
            return stieltjes_boundary(self.ws, k, p, self.z.real, self.side, meth)
        return stieltjes(self.ws, k, p, self.z, self.method)

    def vanishing(self, k, p, order):
        """Transform of p w_k when p w_k kills x^0 .. x^(order-1).

        Far from the support the plain transform is a difference of O(1/z)
        terms that cancel to O(z^-order-1); expanding 1/(x - z) to that order
        gives the same value as z^-order * transform of x^order p w_k.
        """
        lo, hi = self.ws.domain()
        far = 2.0 * max(1.0, abs(lo), abs(hi))
        if self.side or order <= 0 or abs(self.z) <= far:
            return self(k, p)
        for _ in range(order):
            p = p.mulx()
        return self(k, p) / self.z ** order


def _full(n):
    for k, nk in enumerate(n, start=1):
        if nk < 1:
            raise DegenerateIndex(f"component {k} of {tuple(n)} is zero", index=tuple(n), weight=k)


def assemble_Y(ws, n, z, solver=None, side=0, method="auto"):
    """(m+1) x (m+1) complex matrix Y(z); ``side`` selects a boundary value on the axis."""
    n = MultiIndex(n)
    _full(n)
    solver = solver if solver is not None else MOPSolver(ws)
    T = _Transform(ws, z, side, method)
    m = ws.m
    z = T.z
    Y = np.zeros((m + 1, m + 1), dtype=complex)
    rows = [(n, 1.0 + 0j)]
    for j in range(1, m + 1):
        down = n.step(j, -1)
        rows.append((down, -TWO_PI_I / float(solver.h(down, j))))
    for r, (idx, const) in enumerate(rows):
        p = solver.P(idx)
        Y[r, 0] = const * _horner(_fpoly(p), z)
        for l in range(1, m + 1):
            Y[r, l] = const * T.vanishing(l, p, idx[l - 1]) / TWO_PI_I
    return Y


def assemble_X(ws, n, z, solver=None, side=0, method="auto"):
    """(m+1) x (m+1) complex matrix X(z) built from type I data at n and n + e_j."""
    n = MultiIndex(n)
    solver = solver if solver is not None else MOPSolver(ws)
    T = _Transform(ws, z, side, method)
    m = ws.m
    z = T.z
    X = np.zeros((m + 1, m + 1), dtype=complex)

    def q_integral(t1):
        # int Q(x) dx / (z - x) = - sum_k int A_k w_k / (x - z)
        order = t1.index.total - 1
        return -sum(T.vanishing(k, a, order)
                    for k, a in enumerate(t1.a_polys, start=1) if not a.is_zero())

    t0 = solver.type1(n)
    X[0, 0] = q_integral(t0)
    for l in range(1, m + 1):
        X[0, l] = TWO_PI_I * _horner(_fpoly(t0.a_polys[l - 1]), z)
    for j in range(1, m + 1):
        kj = float(solver.h(n, j))
        tj = solver.type1(n.step(j))
        X[j, 0] = kj * q_integral(tj) / TWO_PI_I
        for l in range(1, m + 1):
            X[j, l] = kj * _horner(_fpoly(tj.a_polys[l - 1]), z)
    return X


def jump_S(ws, x):
    m = ws.m
    S = np.eye(m + 1, dtype=complex)
    for j in range(1, m + 1):
        S[0, j] = _weight(ws.measure(j), float(x))
    return S


def jump_U(ws, x):
    m = ws.m
    U = np.eye(m + 1, dtype=complex)
    for j in range(1, m + 1):
        U[j, 0] = -_weight(ws.measure(j), float(x))
    return U


def _report(check, residual, tol, point, real_axis=False, **extra):
    res = float(residual)
    return Report(check, extra.pop("indices", {}), res, res, tol, res <= tol, point=point,
                  extra=dict(extra, real_axis=real_axis))


def verify_duality(ws, n, z, solver=None, tol=TOL_OFF_AXIS):
    """X^t(z) Y(z) = I at an off-axis point.

    ``residual_abs`` is max |X^t Y - I|; the pass decision uses that value
    divided by max(1, max(|X|^t |Y|)), the size of the products being summed,
    which keeps points far from the support (large entries) comparable.
    """
    solver = solver if solver is not None else MOPSolver(ws)
    Y = assemble_Y(ws, n, z, solver)
    X = assemble_X(ws, n, z, solver)
    res = float(np.max(np.abs(X.T @ Y - np.eye(ws.m + 1))))
    scale = max(1.0, float(np.max(np.abs(X).T @ np.abs(Y))))
    r = Report("duality", {"n": list(MultiIndex(n))}, res, res / scale, tol, res / scale <= tol,
               point=complex(z), extra={"real_axis": False, "product_scale": scale})
    if ws.discrete:
        r.extra["experimental"] = True
    return r


def _rel_max(a, b):
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def verify_jump(ws, n, x, solver=None, tol=TOL_BOUNDARY):
    """Jump conditions Y+ = Y- S and X+ = X- U plus the Plemelj average check.

    For Gaussian weights Y+ and X+ come from the closed form on the axis and
    Y-, X- from the principal-value route, so the two sides are independent.
    The residual is the max-norm difference scaled by max(1, max entry).
    """
    if ws.discrete:
        raise UnsupportedMeasure("jump conditions need weight functions, not atoms")
    solver = solver if solver is not None else MOPSolver(ws)
    gaussian = all(isinstance(mu, GaussianDrift) for mu in ws.measures)
    plus_method = "analytic" if gaussian else "plemelj"
    Yp = assemble_Y(ws, n, x, solver, side=1, method=plus_method)
    Ym = assemble_Y(ws, n, x, solver, side=-1, method="plemelj")
    Xp = assemble_X(ws, n, x, solver, side=1, method=plus_method)
    Xm = assemble_X(ws, n, x, solver, side=-1, method="plemelj")
    S, U = jump_S(ws, x), jump_U(ws, x)
    idx = {"n": list(MultiIndex(n))}
    reports = [_report("jump-Y", _rel_max(Yp, Ym @ S), tol, complex(x), True, indices=idx),
               _report("jump-X", _rel_max(Xp, Xm @ U), tol, complex(x), True, indices=idx)]
    if gaussian:
        Ym_a = assemble_Y(ws, n, x, solver, side=-1, method="analytic")
        Yp_pv = assemble_Y(ws, n, x, solver, side=1, method="plemelj")
        reports.append(_report("plemelj-average", _rel_max((Yp + Ym_a) / 2, (Yp_pv + Ym) / 2),
                               tol, complex(x), True, indices=idx))
    return reports


def asymptotic_error(ws, n, z, solver=None, which="Y"):
    """max |M(z) D(z) - I| with D the inverse of the prescribed growth."""
    n = MultiIndex(n)
    solver = solver if solver is not None else MOPSolver(ws)
    z = complex(z)
    N = n.total
    if which == "Y":
        M = assemble_Y(ws, n, z, solver)
        D = np.diag([z ** (-N)] + [z ** nk for nk in n])
    else:
        M = assemble_X(ws, n, z, solver)
        D = np.diag([z ** N] + [z ** (-nk) for nk in n])
    return float(np.max(np.abs(M @ D - np.eye(ws.m + 1))))


def verify_asymptotics(ws, n, radii=(1e3, 1e4), angle=math.pi / 3, solver=None, min_ratio=8.0):
    """Normalization error must shrink by ``min_ratio`` when |z| grows tenfold."""
    solver = solver if solver is not None else MOPSolver(ws)
    out = []
    for which in ("Y", "X"):
        errs = [asymptotic_error(ws, n, r * cmath.exp(1j * angle), solver, which) for r in radii]
        ratio = errs[0] / errs[1] if errs[1] > 0 else float("inf")
        rep = Report(f"asymptotics-{which}", {"n": list(MultiIndex(n))}, errs[1], 1 / ratio,
                     1 / min_ratio, ratio >= min_ratio, extra={"errors": errs, "ratio": ratio})
        out.append(rep)
    return out


def rh_bilinear(ws, n, x, y, solver=None, inverse="duality", method="analytic"):
    """(1/2 pi i) [0, w_1(y), ..., w_m(y)] Y^{-1}(y) Y(x) e_1.

    With ``inverse="duality"`` Y^{-1}(y) is taken as X^t(y); ``"numeric"``
    inverts the boundary value Y+(y) instead.
    """
    n = MultiIndex(n)
    _full(n)
    if ws.discrete:
        raise UnsupportedMeasure("the boundary form needs weight functions")
    solver = solver if solver is not None else MOPSolver(ws)
    m = ws.m
    Yx = assemble_Y(ws, n, x, solver, side=1, method=method)
    if inverse == "duality":
        Yinv = assemble_X(ws, n, y, solver, side=1, method=method).T
    elif inverse == "numeric":
        Yinv = np.linalg.inv(assemble_Y(ws, n, y, solver, side=1, method=method))
    else:
        raise ValueError(f"unknown inverse mode {inverse!r}")
    row = np.zeros(m + 1, dtype=complex)
    for j in range(1, m + 1):
        row[j] = _weight(ws.measure(j), float(y))
    return complex(row @ Yinv @ Yx[:, 0] / TWO_PI_I)


def kernel_rh(ws, n, x, y, solver=None, inverse="duality", method="auto"):
    """K_n(x, y) from the Riemann-Hilbert matrices; real part returned."""
    x, y = float(x), float(y)
    if abs(x - y) < 1e-7 * (1 + abs(x) + abs(y)):
        raise DiagonalPoint("points too close for the divided formula", x=x, y=y)
    if method == "auto":
        gaussian = all(isinstance(mu, GaussianDrift) for mu in ws.measures)
        method = "analytic" if gaussian else "plemelj"
    val = rh_bilinear(ws, n, x, y, solver, inverse, method) / (x - y)
    return val.real


def verify_kernel_rh(ctx, pairs, tol=1e-6):
    """kernel_rh against kernel_cd at the given pairs (block path of ``ctx``)."""
    n = ctx.index
    lhs = [kernel_rh(ctx.ws, n, x, y, ctx.solver) for x, y in pairs]
    rhs = [float(kernel_cd(ctx, x, y)) for x, y in pairs]
    return compare("rh-kernel", lhs, rhs, tol, {"n": list(n)})


def xty_entry(ws, n, x, y, j, solver=None):
    """[X^t(y) Y(x)]_{j+1,1} from the assembled matrices and from polynomials."""
    n = MultiIndex(n)
    solver = solver if solver is not None else MOPSolver(ws)
    Yx = assemble_Y(ws, n, x, solver, side=1, method="analytic")
    Xy = assemble_X(ws, n, y, solver, side=1, method="analytic")
    matrix_val = (Xy.T @ Yx)[j, 0]
    x, y = float(x), float(y)
    formula = _horner(_fpoly(solver.P(n)), x) * _horner(_fpoly(solver.type1(n).a_polys[j - 1]), y)
    for k in range(1, ws.m + 1):
        down = n.step(k, -1)
        ratio = float(solver.h(n, k)) / float(solver.h(down, k))
        formula -= (ratio * _horner(_fpoly(solver.P(down)), x)
                    * _horner(_fpoly(solver.type1(n.step(k)).a_polys[j - 1]), y))
    return complex(matrix_val), TWO_PI_I * formula


def schwarz_residual(ws, n, z, solver=None):
    """Relative residual of Y(conj z) = D conj(Y(z)) D, D = diag(1, -1, ..., -1).

    The sign matrix comes from the purely imaginary factors 1/(2 pi i) in the
    Cauchy columns and in the constants c_j.
    """
    Y1 = assemble_Y(ws, n, z, solver)
    Y2 = assemble_Y(ws, n, complex(z).conjugate(), solver)
    D = np.diag([1.0] + [-1.0] * ws.m)
    return _rel_max(Y2, D @ Y1.conj() @ D)


def matrix_json(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M)]

"""Christoffel-Darboux kernel K_n(x, y) = sum_{j<n} P_j(x) Q_j(y) along a path.

Three evaluation routes are provided and cross-checked:

* :func:`kernel_direct` -- the n-term sum itself
* :func:`kernel_cd`     -- the closed form with 1 + m terms built from P_n,
  Q_n and the neighbours n - e_k, n + e_k
* :func:`kernel_svi`    -- the 1 + n*m term form using recurrence coefficients
"""
import itertools

import numpy as np

from . import _accel
from .checks import Report, compare, sample_grid, sample_pairs
from .errors import DegenerateIndex, DiagonalPoint
from .mop import MOPSolver, MultiIndex, Path, canonical_path, extend_path
from .weights import GaussianDrift, JacobiInterval

DIAGONAL_RTOL = 1e-7


class KernelContext:
    """P_j, Q_j, h-values and recurrence coefficients along one (extended) path.

    Everything is computed lazily and memoized through a :class:`MOPSolver`;
    a context belongs to a single worker (see MOPSolver).
    """

    def __init__(self, ws, path, solver=None):
        if not isinstance(path, Path):
            path = Path(path)
        if path.end.m != ws.m:
            raise ValueError("path dimension does not match the weight system")
        self.ws = ws
        self.path = path
        self.extended = extend_path(path)
        self.solver = solver if solver is not None else MOPSolver(ws)
        self._c = {}

    @classmethod
    def at(cls, ws, n, order="block", solver=None):
        return cls(ws, canonical_path(MultiIndex(n), order), solver)

    @property
    def field(self):
        return self.ws.field

    @property
    def n(self):
        """Number of kernel terms |n|."""
        return self.path.length

    @property
    def index(self):
        return self.path.end

    @property
    def m(self):
        return self.ws.m

    def P(self, j):
        """P_j = P_{n_j}, j = 0..n+m."""
        return self.solver.P(self.extended[j])

    def Q(self, j):
        """Q_j = Q_{n_{j+1}}, j = 0..n+m-1."""
        return self.solver.type1(self.extended[j + 1])

    def h(self, idx, k):
        return self.solver.h(idx, k)

    def c(self, j, k):
        """Recurrence coefficient c_{j,k} = int x P_k(x) Q_j(x) dx."""
        key = (j, k)
        val = self._c.get(key)
        if val is None:
            if j == k + 1 and j + 1 >= len(self.extended):
                # Q_{n+m} lies past the extended path; monicity fixes c_{k+1,k}
                return self.field(1)
            val = self.Q(j).integrate_poly(self.P(k).mulx())
            self._c[key] = val
        return val

    def require_full_index(self):
        for k, nk in enumerate(self.index, start=1):
            if nk < 1:
                raise DegenerateIndex(
                    f"component {k} of {tuple(self.index)} is zero; n - e_{k} does not exist",
                    index=tuple(self.index), weight=k)

    def _point(self, x):
        return self.field(x)


def _check_off_diagonal(ctx, x, y):
    F = ctx.field
    if F.exact:
        if x == y:
            raise DiagonalPoint("x == y", x=x, y=y)
        return
    if abs(x - y) < DIAGONAL_RTOL * (1 + abs(x) + abs(y)):
        raise DiagonalPoint("points too close for the divided formula", x=x, y=y)


def kernel_direct(ctx, x, y):
    """sum_{j<n} P_j(x) Q_j(y); K_0 = 0."""
    F = ctx.field
    xf = F(x)
    total = F(0)
    for j in range(ctx.n):
        total = total + ctx.P(j)(xf) * ctx.Q(j)(y)
    return total


def cd_numerator(ctx, x, y):
    """P_n(x) Q_n(y) - sum_k (h^(k)_n / h^(k)_{n-e_k}) P_{n-e_k}(x) Q_{n+e_k}(y)."""
    ctx.require_full_index()
    s = ctx.solver
    n = ctx.index
    xf = ctx.field(x)
    total = s.P(n)(xf) * s.type1(n)(y)
    for k in range(1, ctx.m + 1):
        down = n.step(k, -1)
        ratio = s.h(n, k) / s.h(down, k)
        total = total - ratio * s.P(down)(xf) * s.type1(n.step(k))(y)
    return total


def kernel_cd(ctx, x, y, near_diagonal="raise"):
    """Closed form with 1 + m terms divided by (x - y).

    Points closer than 1e-7 (1 + |x| + |y|) raise DiagonalPoint, or fall back
    to the direct sum when ``near_diagonal="direct"``.
    """
    ctx.require_full_index()
    F = ctx.field
    xf, yf = F(x), F(y)
    try:
        _check_off_diagonal(ctx, xf, yf)
    except DiagonalPoint:
        if near_diagonal == "direct":
            return kernel_direct(ctx, x, y)
        raise
    return cd_numerator(ctx, x, y) / (xf - yf)


def recurrence_numerator(ctx, x, y):
    n = ctx.n
    m = ctx.m
    xf = ctx.field(x)
    total = ctx.P(n)(xf) * ctx.Q(n - 1)(y)
    pvals = [ctx.P(j)(xf) for j in range(n)]
    for k in range(n, n + m):
        inner = ctx.field(0)
        for j in range(n):
            c = ctx.c(j, k)
            if c != 0:
                inner = inner + c * pvals[j]
        total = total - inner * ctx.Q(k)(y)
    return total


def kernel_svi(ctx, x, y):
    """Form with the recurrence coefficients c_{j,k}, k = n..n+m-1, j < n."""
    if ctx.n < 1:
        raise DegenerateIndex("the recurrence form needs a non-empty path")
    F = ctx.field
    xf, yf = F(x), F(y)
    _check_off_diagonal(ctx, xf, yf)
    return recurrence_numerator(ctx, x, y) / (xf - yf)


def kernel_diagonal(ctx, x):
    """K_n(x, x) as the direct sum (finite everywhere)."""
    return kernel_direct(ctx, x, x)


def recurrence_term_count(ctx):
    return 1 + ctx.n * ctx.m


def cd_term_count(ctx):
    return 1 + ctx.m


# --- vectorized float evaluation (grids, densities, Monte Carlo) -------------

def weight_values_array(ws, k, xs):
    mu = ws.measure(k)
    xs = np.asarray(xs, float)
    if isinstance(mu, GaussianDrift):
        s, a = float(mu.scale), float(mu.a)
        return np.exp(-xs * xs / (2 * s * s) + a * xs)
    if isinstance(mu, JacobiInterval):
        lo, hi = float(mu.a), float(mu.b)
        inside = (xs > lo) & (xs < hi)
        out = np.zeros_like(xs)
        xi = xs[inside]
        out[inside] = (hi - xi) ** float(mu.alpha) * (xi - lo) ** float(mu.beta)
        return out
    out = np.zeros_like(xs)
    for loc, w in mu.atoms:
        out[xs == float(loc)] = float(w)
    return out


def _coeff_table(polys):
    width = max((len(p) for p in polys), default=1) or 1
    return np.array([p.to_array(width) for p in polys]).reshape(len(polys), width)


def p_values(ctx, xs):
    """Array (n, len(xs)) of P_j(x) in binary64."""
    xs = np.asarray(xs, float)
    if ctx.n == 0:
        return np.zeros((0, xs.size))
    return _accel.horner_stack(_coeff_table([ctx.P(j) for j in range(ctx.n)]), xs)


def q_values(ctx, ys):
    """Array (n, len(ys)) of Q_j(y) in binary64."""
    ys = np.asarray(ys, float)
    out = np.zeros((ctx.n, ys.size))
    for k in range(1, ctx.m + 1):
        polys = [ctx.Q(j).a_polys[k - 1] for j in range(ctx.n)]
        if all(p.is_zero() for p in polys):
            continue
        out += _accel.horner_stack(_coeff_table(polys), ys) * weight_values_array(ctx.ws, k, ys)
    return out


def kernel_grid(ctx, xs, ys):
    """Matrix K_n(xs[i], ys[j]) evaluated in binary64."""
    return _accel.kernel_matrix(p_values(ctx, xs), q_values(ctx, ys))


def diagonal_values(ctx, xs):
    """K_n(x, x) on an array of points, binary64."""
    return np.sum(p_values(ctx, xs) * q_values(ctx, xs), axis=0)


# --- identity checks -----------------------------------------------------------

def verify_three_way(ctx, pairs=None, tol=1e-8, seed=0):
    """kernel_direct, kernel_cd and kernel_svi on the same pairs (two reports)."""
    if pairs is None:
        pairs = sample_pairs(ctx.ws, 64, seed)
    exact = ctx.field.exact
    direct = [kernel_direct(ctx, x, y) for x, y in pairs]
    cd = [kernel_cd(ctx, x, y) for x, y in pairs]
    svi = [kernel_svi(ctx, x, y) for x, y in pairs]
    idx = {"n": list(ctx.index)}
    return [compare("direct=closed-form", direct, cd, tol, idx, exact),
            compare("direct=recurrence-form", direct, svi, tol, idx, exact),
            compare("closed-form=recurrence-form", cd, svi, tol, idx, exact)]


def distinct_paths(n, limit=None):
    """All lattice paths from 0 to n in lexicographic order of increments."""
    n = MultiIndex(n)
    seq = []
    for k, nk in enumerate(n, start=1):
        seq.extend([k] * nk)
    out = []
    for perm in sorted(set(itertools.permutations(seq))):
        cur = MultiIndex.zeros(n.m)
        steps = [cur]
        for k in perm:
            cur = cur.step(k)
            steps.append(cur)
        out.append(Path(steps))
        if limit is not None and len(out) >= limit:
            break
    return out


def verify_path_independence(ws, n, paths=None, points=None, tol=1e-10, solver=None):
    """kernel_direct evaluated independently along each path must coincide."""
    n = MultiIndex(n)
    if paths is None:
        paths = distinct_paths(n)
    paths = [p if isinstance(p, Path) else Path(p) for p in paths]
    for p in paths:
        if p.end != n:
            raise ValueError(f"path ends at {tuple(p.end)}, expected {tuple(n)}")
    if points is None:
        points = sample_pairs(ws, 16, seed=1)
    solver = solver if solver is not None else MOPSolver(ws)
    ref_ctx = KernelContext(ws, paths[0], solver)
    ref = [kernel_direct(ref_ctx, x, y) for x, y in points]
    worst = None
    for p in paths[1:]:
        ctx = KernelContext(ws, p, solver)
        vals = [kernel_direct(ctx, x, y) for x, y in points]
        r = compare("path-independence", ref, vals, tol, {"n": list(n)}, ws.field.exact)
        if worst is None or r.residual_rel > worst.residual_rel or not r.passed:
            worst = r
    if worst is None:
        worst = Report("path-independence", {"n": list(n)}, 0.0, 0.0, tol, True,
                       extra={"vacuous": True})
    worst.extra["paths"] = len(paths)
    return worst


def verify_relabel(ws, k, i, j, points=None, tol=1e-10, solver=None):
    """P_k Q_{k+e_i} + P_{k+e_i} Q_{k+e_i+e_j} is symmetric in i and j."""
    if i == j:
        raise ValueError("the relabeling identity needs i != j")
    k = MultiIndex(k)
    solver = solver if solver is not None else MOPSolver(ws)
    if points is None:
        points = sample_pairs(ws, 16, seed=2)
    F = ws.field
    ki, kj = k.step(i), k.step(j)
    kij = ki.step(j)

    def side(a, b):
        return [solver.P(k)(F(x)) * solver.type1(a)(y) + solver.P(a)(F(x)) * solver.type1(b)(y)
                for x, y in points]

    return compare("relabel", side(ki, kij), side(kj, kij), tol,
                   {"k": list(k), "i": i, "j": j}, F.exact)


def verify_antisymmetric_numerator(ctx, points=None, tol=1e-8):
    """The numerator of the closed form vanishes at x = y."""
    if points is None:
        points = sample_grid(ctx.ws, 16)
    vals = [cd_numerator(ctx, x, x) for x in points]
    scale = [ctx.solver.P(ctx.index)(ctx.field(x)) * ctx.solver.type1(ctx.index)(x) for x in points]
    r = compare("numerator-diagonal", vals, [0] * len(vals), tol, {"n": list(ctx.index)},
                ctx.field.exact)
    # measure against the size of the leading term rather than against zero
    ref = max(abs(v) for v in scale) or 1
    r.residual_rel = float(r.residual_abs / ref)
    r.passed = r.residual_abs == 0 if ctx.field.exact else r.residual_rel <= tol
    return r

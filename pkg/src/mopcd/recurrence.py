"""Recurrence coefficients c_{j,k} and the identities built on them.

All checks return :class:`~mopcd.checks.Report` objects; nothing here raises
on a failed identity.
"""
from .checks import Report, compare, sample_grid
from .errors import DegenerateIndex, NotInV
from .mop import MOPSolver, MultiIndex
from .poly import Poly, max_coeff_diff
from .weights import integrate


def recurrence_coeff(ctx, j, k):
    """c_{j,k} = int x P_k(x) Q_j(x) dx along the extended path of ``ctx``."""
    return ctx.c(j, k)


def recurrence_table(ctx, kmax=None):
    """Dict {(j, k): c_{j,k}} for 0 <= j <= k+1, k <= kmax (default n+m-2)."""
    if kmax is None:
        kmax = ctx.n + ctx.m - 2
    return {(j, k): ctx.c(j, k) for k in range(kmax + 1) for j in range(k + 2)}


def _poly_report(identity, lhs, rhs, tol, indices, F):
    diff = max_coeff_diff(lhs, rhs)
    scale = max(lhs.max_abs_coeff(), rhs.max_abs_coeff())
    rel = diff / scale if scale != 0 else diff
    passed = diff == 0 if F.exact else float(rel) <= tol
    return Report(identity, indices, float(diff), float(rel), 0.0 if F.exact else tol, passed)


def verify_xP_expansion(ctx, k, tol=1e-9):
    """x P_k = sum_{j <= k+1} c_{j,k} P_j, compared coefficientwise."""
    if k > ctx.n + ctx.m - 2:
        raise ValueError(f"k = {k} exceeds n + m - 2 = {ctx.n + ctx.m - 2}")
    lhs = ctx.P(k).mulx()
    rhs = Poly.zero()
    for j in range(k + 2):
        rhs = rhs + ctx.P(j) * ctx.c(j, k)
    return _poly_report("xP-expansion", lhs, rhs, tol, {"k": k, "n": list(ctx.index)}, ctx.field)


def verify_yQ_expansion(ctx, j, points=None, tol=1e-9):
    """y Q_j(y) = sum_{k < n+m} c_{j,k} Q_k(y) on the sample grid."""
    if not 0 <= j <= ctx.n - 1:
        raise ValueError(f"j = {j} outside 0..n-1")
    F = ctx.field
    if points is None:
        points = sample_grid(ctx.ws)
    kmax = ctx.n + ctx.m - 1
    coeffs = [ctx.c(j, k) for k in range(kmax + 1)]
    lhs = [F(y) * ctx.Q(j)(y) for y in points]
    rhs = []
    for y in points:
        acc = F(0)
        for k, c in enumerate(coeffs):
            if c != 0:
                acc = acc + c * ctx.Q(k)(y)
        rhs.append(acc)
    return compare("yQ-expansion", lhs, rhs, tol, {"j": j, "n": list(ctx.index)}, F.exact)


def verify_sparsity(ctx, tol=1e-9):
    """c_{j,k} = 0 for j >= k + 2 (checked for j = k+2, k+3)."""
    F = ctx.field
    kmax = ctx.n + ctx.m - 1
    vals, refs = [], []
    for k in range(kmax + 1):
        for j in (k + 2, k + 3):
            if j <= kmax:
                vals.append(ctx.c(j, k))
                refs.append(ctx.c(k + 1, k))
    r = compare("c-sparsity", vals, [0] * len(vals), tol, {"n": list(ctx.index)}, F.exact)
    ref = max((abs(v) for v in refs), default=1) or 1
    r.residual_rel = float(r.residual_abs / ref)
    r.passed = r.residual_abs == 0 if F.exact else r.residual_rel <= tol
    return r


def verify_monic_coefficient(ctx, tol=1e-10):
    """c_{k+1,k} = 1 for every k."""
    F = ctx.field
    kmax = ctx.n + ctx.m - 2
    vals = [ctx.c(k + 1, k) for k in range(kmax + 1)]
    return compare("c-monic", vals, [F(1)] * len(vals), tol, {"n": list(ctx.index)}, F.exact)


def recurrence_band_report(ctx, tol=1e-9):
    """Reports (does not guarantee) c_{j,k} = 0 for k >= j + m + 1.

    The band structure is expected for round-robin paths; other paths are
    measured and reported as-is.
    """
    F = ctx.field
    kmax = ctx.n + ctx.m - 1
    vals, scale = [], []
    for j in range(ctx.n):
        for k in range(j + ctx.m + 1, kmax + 1):
            vals.append(ctx.c(j, k))
        scale.append(ctx.c(j + 1, j) if j + 1 <= kmax else F(1))
    r = compare("recurrence-band", vals, [0] * len(vals), tol, {"n": list(ctx.index)}, F.exact)
    ref = max((abs(v) for v in scale), default=1) or 1
    r.residual_rel = float(r.residual_abs / ref)
    r.passed = r.residual_abs == 0 if F.exact else r.residual_rel <= tol
    r.extra["increments"] = ctx.path.increments()
    return r


def verify_biorthogonality(ctx, tol=1e-10):
    """int P_k Q_j = delta_{jk} for 0 <= j, k <= n-1."""
    F = ctx.field
    vals, refs = [], []
    for j in range(ctx.n):
        for k in range(ctx.n):
            vals.append(ctx.Q(j).integrate_poly(ctx.P(k)))
            refs.append(F(1) if j == k else F(0))
    r = compare("biorthogonality", vals, refs, tol, {"n": list(ctx.index)}, F.exact)
    r.residual_rel = r.residual_abs
    r.passed = r.residual_abs == 0 if F.exact else r.residual_abs <= tol
    return r


def verify_leading_coefficient(solver, n, tol=1e-10):
    """lead(A^(j)_{n+e_j}) * h^(j)_n = 1 for every j."""
    n = MultiIndex(n)
    F = solver.field
    vals = []
    for j in range(1, n.m + 1):
        a = solver.type1(n.step(j)).a_polys[j - 1]
        vals.append(a.leading * solver.h(n, j))
    return compare("leading-coefficient", vals, [F(1)] * len(vals), tol, {"n": list(n)}, F.exact)


def verify_type1_degrees(solver, n):
    """deg A^(k)_n = n_k - 1 whenever n_k >= 1."""
    n = MultiIndex(n)
    t = solver.type1(n)
    bad = [k for k, (a, nk) in enumerate(zip(t.a_polys, n), start=1)
           if (nk >= 1 and a.degree != nk - 1) or (nk == 0 and not a.is_zero())]
    return Report("type1-degree", {"n": list(n)}, float(len(bad)), float(len(bad)), 0.0,
                  not bad, extra={"bad_weights": bad})


def contiguity_P(solver, n, j, k, tol=1e-9):
    """Both forms of P_n in terms of P_{n+e_j} - P_{n+e_k}; returns a list of reports."""
    if j == k:
        raise ValueError("contiguity needs j != k")
    n = MultiIndex(n)
    F = solver.field
    nj, nk = n.step(j), n.step(k)
    diff = solver.P(nj) - solver.P(nk)
    first = diff * (solver.h(n, k) / solver.h(nj, k))
    second = diff * (-solver.h(n, j) / solver.h(nk, j))
    idx = {"n": list(n), "j": j, "k": k}
    reports = [_poly_report("contiguity-P", solver.P(n), first, tol, idx, F),
               _poly_report("contiguity-P-swapped", solver.P(n), second, tol, idx, F)]
    ratio_a = solver.h(n, k) / solver.h(nj, k)
    ratio_b = -solver.h(n, j) / solver.h(nk, j)
    reports.append(compare("contiguity-P-ratio", [ratio_a], [ratio_b], tol, idx, F.exact))
    return reports


def contiguity_Q(solver, n, j, k, points=None, tol=1e-9):
    """Both forms of Q_n in terms of Q_{n-e_j} - Q_{n-e_k}, pointwise."""
    if j == k:
        raise ValueError("contiguity needs j != k")
    n = MultiIndex(n)
    if n[j - 1] < 1 or n[k - 1] < 1:
        raise DegenerateIndex("contiguity for Q needs n_j >= 1 and n_k >= 1", index=tuple(n))
    F = solver.field
    if points is None:
        points = sample_grid(solver.ws)
    mj, mk = n.step(j, -1), n.step(k, -1)
    mjk = mj.step(k, -1)
    r1 = solver.h(mjk, k) / solver.h(mk, k)
    r2 = -solver.h(mjk, j) / solver.h(mj, j)
    qn, qj, qk = solver.type1(n), solver.type1(mj), solver.type1(mk)
    lhs = [qn(y) for y in points]
    diffs = [qj(y) - qk(y) for y in points]
    idx = {"n": list(n), "j": j, "k": k}
    return [compare("contiguity-Q", lhs, [r1 * d for d in diffs], tol, idx, F.exact),
            compare("contiguity-Q-swapped", lhs, [r2 * d for d in diffs], tol, idx, F.exact)]


def _require_full(n):
    for k, nk in enumerate(n, start=1):
        if nk < 1:
            raise DegenerateIndex(f"component {k} of {tuple(n)} is zero", index=tuple(n), weight=k)


def membership_residual(solver, n, p):
    """Largest |int p x^i w_j| over i <= n_j - 2, relative to the moment scale."""
    n = MultiIndex(n)
    F = solver.field
    worst = F(0)
    for j in range(1, n.m + 1):
        for i in range(n[j - 1] - 1):
            v = abs(integrate(solver.ws, j, p * Poly.monomial(i, F(1))))
            if v > worst:
                worst = v
    return worst


def decompose_in_V(solver, n, p, tol=1e-9):
    """Coefficients b with sum_j b_j P_{n-e_j} = p for p in the space V.

    V holds the polynomials of degree <= |n|-1 orthogonal to x^i w_j for
    i <= n_j - 2. Raises NotInV if p is outside (to tolerance).
    """
    n = MultiIndex(n)
    _require_full(n)
    F = solver.field
    if p.degree > n.total - 1:
        raise NotInV(f"degree {p.degree} exceeds |n| - 1 = {n.total - 1}", index=tuple(n))
    scale = p.max_abs_coeff() or 1
    mem = membership_residual(solver, n, p)
    b = []
    for j in range(1, n.m + 1):
        down = n.step(j, -1)
        b.append(integrate(solver.ws, j, p * Poly.monomial(n[j - 1] - 1, F(1)))
                 / solver.h(down, j))
    rebuilt = Poly.zero()
    for j, bj in enumerate(b, start=1):
        rebuilt = rebuilt + solver.P(n.step(j, -1)) * bj
    diff = max_coeff_diff(rebuilt, p)
    if F.exact:
        inside = mem == 0 and diff == 0
    else:
        inside = float(diff / scale) <= tol
    if not inside:
        raise NotInV(f"polynomial is not in V at {tuple(n)}", index=tuple(n),
                     membership=float(mem), reconstruction=float(diff))
    return b


def pi_k(ctx, k):
    """pi_k(x) = sum_{j<n} c_{j,k} P_j(x) for k = n..n+m-1."""
    out = Poly.zero()
    for j in range(ctx.n):
        out = out + ctx.P(j) * ctx.c(j, k)
    return out


def verify_pi_representation(ctx, k, tol=1e-9):
    """pi_k = x P_k - sum_{j=n}^{k+1} c_{j,k} P_j."""
    rhs = ctx.P(k).mulx()
    for j in range(ctx.n, k + 2):
        rhs = rhs - ctx.P(j) * ctx.c(j, k)
    return _poly_report("pi-representation", pi_k(ctx, k), rhs, tol,
                        {"k": k, "n": list(ctx.index)}, ctx.field)


def verify_linear_independence(solver, n):
    """The m x m matrix int P_{n-e_i} x^{n_j - 1} w_j is diagonal with nonzero entries."""
    n = MultiIndex(n)
    _require_full(n)
    F = solver.field
    off, diag = F(0), []
    for i in range(1, n.m + 1):
        p = solver.P(n.step(i, -1))
        for j in range(1, n.m + 1):
            v = integrate(solver.ws, j, p * Poly.monomial(n[j - 1] - 1, F(1)))
            if i == j:
                diag.append(abs(v))
            elif abs(v) > off:
                off = abs(v)
    smallest = min(diag)
    rel = off / smallest if smallest != 0 else float("inf")
    passed = smallest != 0 and (off == 0 if F.exact else float(rel) <= 1e-9)
    return Report("basis-independence", {"n": list(n)}, float(off), float(rel), 1e-9, passed)


def phi_values(ctx, y):
    """phi_j(y) from decomposing sum_k sum_j c_{j,k} P_j(x) Q_k(y) in V."""
    F = ctx.field
    total = Poly.zero()
    for k in range(ctx.n, ctx.n + ctx.m):
        total = total + pi_k(ctx, k) * ctx.Q(k)(y)
    return decompose_in_V(ctx.solver, ctx.index, total)


def verify_phi_ladder(ctx, j, points=None, tol=1e-8):
    """Reports for the telescoping identities attached to weight j.

    * ``phi-ladder``:  h_{n-e_j} phi_j(y) = sum_{i<=j} h_{n+s_{i-1}} Q_{n+s_i}(y)
    * ``ladder-sum``: h_n Q_{n+e_j}(y)   = the same sum
    * ``ladder-step``: every single telescoping step k = 0..j-2
    """
    n = ctx.index
    _require_full(n)
    m = ctx.m
    if not 1 <= j <= m:
        raise ValueError(f"j = {j} outside 1..{m}")
    s = ctx.solver
    F = ctx.field
    if points is None:
        points = sample_grid(ctx.ws)
    sums = [MultiIndex.partial_sum(m, i) for i in range(m + 1)]

    def ladder(y):
        acc = F(0)
        for i in range(1, j + 1):
            acc = acc + s.h(n + sums[i - 1], j) * s.type1(n + sums[i])(y)
        return acc

    rhs = [ladder(y) for y in points]
    lhs = [s.h(n, j) * s.type1(n.step(j))(y) for y in points]
    idx = {"n": list(n), "j": j}
    reports = [compare("ladder-sum", lhs, rhs, tol, idx, F.exact)]
    down = n.step(j, -1)
    phis = [s.h(down, j) * phi_values(ctx, y)[j - 1] for y in points]
    reports.append(compare("phi-ladder", phis, rhs, tol, idx, F.exact))
    for k in range(j - 1):
        a, b = n + sums[k], n + sums[k + 1]
        left = [s.h(a, j) * s.type1(a.step(j))(y) for y in points]
        right = [s.h(a, j) * s.type1(b)(y) + s.h(b, j) * s.type1(b.step(j))(y) for y in points]
        reports.append(compare("ladder-step", left, right, tol, dict(idx, step=k), F.exact))
    return reports


def verify_tail_correction(ctx, pairs, tol=1e-8):
    """sum_{k>=n} sum_{j<n} c_{j,k} P_j(x) Q_k(y) equals the 1+m term correction."""
    n = ctx.index
    _require_full(n)
    s = ctx.solver
    F = ctx.field
    lhs, rhs = [], []
    pis = [pi_k(ctx, k) for k in range(ctx.n, ctx.n + ctx.m)]
    for x, y in pairs:
        xf = F(x)
        lhs.append(sum((p(xf) * ctx.Q(ctx.n + i)(y) for i, p in enumerate(pis)), F(0)))
        acc = F(0)
        for k in range(1, ctx.m + 1):
            d = n.step(k, -1)
            acc = acc + s.h(n, k) / s.h(d, k) * s.P(d)(xf) * s.type1(n.step(k))(y)
        rhs.append(acc)
    return compare("tail-correction", lhs, rhs, tol, {"n": list(n)}, F.exact)

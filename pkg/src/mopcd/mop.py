"""Multiple orthogonal polynomials of type I and type II.

Both families come out of the same mixed moment matrix

    M[(j, k), i] = moment(w_j, k + i),   k < n_j,  i < |n|

Type II solves ``M p = -moments of x**|n|``; type I solves the transposed
system with right-hand side e_{|n|}.
"""
import json
import warnings
from dataclasses import dataclass, field as _field
from fractions import Fraction

from . import linalg
from .errors import (DegenerateIndex, IllConditionedWarning, MOPError, NonPerfectIndex,
                     NotAnAtom, ZeroNormalization)
from .poly import Poly
from .weights import integrate, moment, weight_value_or_zero

COND_WARN = 1e12


class MultiIndex(tuple):
    """Vector of non-negative integers (n_1, ..., n_m)."""

    def __new__(cls, components):
        comps = tuple(int(c) for c in components)
        if any(c < 0 for c in comps):
            raise ValueError(f"negative component in multi-index {comps}")
        if not comps:
            raise ValueError("empty multi-index")
        return super().__new__(cls, comps)

    @classmethod
    def zeros(cls, m):
        return cls((0,) * m)

    @classmethod
    def unit(cls, m, k):
        return cls.zeros(m).step(k)

    @classmethod
    def partial_sum(cls, m, j):
        """s_j = e_1 + ... + e_j."""
        return cls((1,) * j + (0,) * (m - j))

    @classmethod
    def parse(cls, text):
        return cls(int(t) for t in str(text).replace(" ", "").split(",") if t != "")

    @property
    def m(self):
        return len(self)

    @property
    def total(self):
        return sum(self)

    def step(self, k, by=1):
        """n + by * e_k (k is 1-based)."""
        if not 1 <= k <= len(self):
            raise IndexError(f"component {k} outside 1..{len(self)}")
        comps = list(self)
        comps[k - 1] += by
        if comps[k - 1] < 0:
            raise ValueError(f"{tuple(self)} - e_{k} has a negative component")
        return MultiIndex(comps)

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return MultiIndex(a - b for a, b in zip(self, other, strict=True))

    def __ge__(self, other):
        return all(a >= b for a, b in zip(self, other, strict=True))

    def key(self):
        return ",".join(str(c) for c in self)

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


class Path(tuple):
    """Chain 0 = n_0, n_1, ..., n_N of multi-indices, one unit step at a time."""

    def __new__(cls, steps):
        steps = tuple(MultiIndex(s) for s in steps)
        if not steps:
            raise ValueError("empty path")
        m = steps[0].m
        if steps[0] != MultiIndex.zeros(m):
            raise ValueError("a path starts at the zero multi-index")
        for j, (a, b) in enumerate(zip(steps, steps[1:])):
            diff = b - a if b >= a else None
            if diff is None or diff.total != 1:
                raise ValueError(f"step {j} -> {j + 1} is not a unit increment: {a} -> {b}")
        return super().__new__(cls, steps)

    @property
    def end(self):
        return self[-1]

    @property
    def length(self):
        """Number of steps n (so the path holds n + 1 indices)."""
        return len(self) - 1

    def increments(self):
        """1-based component incremented at each step."""
        out = []
        for a, b in zip(self, self[1:]):
            out.append(next(i + 1 for i, (x, y) in enumerate(zip(a, b)) if y != x))
        return out


def canonical_path(n, order="block"):
    """Path from zero to ``n``; ``block`` fills component 1 first, ``roundrobin`` cycles."""
    n = MultiIndex(n)
    cur = [0] * n.m
    steps = [MultiIndex(cur)]
    if order == "block":
        for k, nk in enumerate(n):
            for _ in range(nk):
                cur[k] += 1
                steps.append(MultiIndex(cur))
    elif order in ("roundrobin", "round-robin"):
        while sum(cur) < n.total:
            for k in range(n.m):
                if cur[k] < n[k]:
                    cur[k] += 1
                    steps.append(MultiIndex(cur))
    else:
        raise ValueError(f"unknown path order {order!r}")
    return Path(steps)


def path_from_increments(m, increments):
    cur = MultiIndex.zeros(m)
    steps = [cur]
    for k in increments:
        cur = cur.step(k)
        steps.append(cur)
    return Path(steps)


def extend_path(p):
    """Append n + s_1, ..., n + s_m (steps e_1, ..., e_m) to the path."""
    steps = list(p)
    cur = p.end
    for k in range(1, cur.m + 1):
        cur = cur.step(k)
        steps.append(cur)
    return Path(steps)


@dataclass(frozen=True, eq=False)
class TypeISolution:
    """Type I data A^(1..m) for one multi-index; ``Q(x)`` evaluates sum A_k w_k."""

    ws: object
    index: MultiIndex
    a_polys: tuple
    cond: float = _field(default=1.0)

    def __call__(self, x):
        return evaluate_q(self.ws, self.a_polys, x)

    def moment(self, j):
        """Integral of x**j Q(x) computed from the moments."""
        total = self.ws.field(0)
        for k, a in enumerate(self.a_polys, start=1):
            if not a.is_zero():
                total = total + integrate(self.ws, k, a * Poly.monomial(j, 1))
        return total

    def integrate_poly(self, p):
        """Integral of p(x) Q(x)."""
        total = self.ws.field(0)
        for k, a in enumerate(self.a_polys, start=1):
            if not a.is_zero():
                total = total + integrate(self.ws, k, a * p)
        return total


def evaluate_q(ws, a_polys, x):
    """sum_k A_k(x) w_k(x); discrete systems accept only atom locations."""
    if ws.discrete:
        xq = Fraction(x)
        if xq not in set(ws.atom_union()):
            raise NotAnAtom(f"{x} is not an atom of the weight system", point=x)
        x = ws.field(xq)
    else:
        x = ws.field(x)
    total = ws.field(0)
    for k, a in enumerate(a_polys, start=1):
        if not a.is_zero():
            total = total + a(x) * weight_value_or_zero(ws, k, x)
    return total


def _moment_matrix(ws, n):
    """Rows (j, k) for k < n_j, columns i < |n|."""
    N = n.total
    rows = []
    for j in range(1, ws.m + 1):
        for k in range(n[j - 1]):
            rows.append([moment(ws, j, k + i) for i in range(N)])
    return rows


def _check_index(ws, n):
    n = MultiIndex(n)
    if n.m != ws.m:
        raise ValueError(f"multi-index {tuple(n)} has {n.m} components, system has {ws.m} weights")
    return n


def _cond(ws, matrix):
    if ws.field.exact:
        return 1.0
    c = linalg.condition_estimate(matrix)
    if ws.field.kind == "float" and c > COND_WARN:
        warnings.warn(f"moment system condition estimate {c:.3g} exceeds {COND_WARN:g}",
                      IllConditionedWarning, stacklevel=3)
    return c


def type2(ws, n):
    """Monic type II polynomial P_n of degree |n|."""
    return _type2_with_cond(ws, n)[0]


def _type2_with_cond(ws, n):
    n = _check_index(ws, n)
    F = ws.field
    N = n.total
    if N == 0:
        return Poly((F(1),)), 1.0
    mat = _moment_matrix(ws, n)
    rhs = []
    for j in range(1, ws.m + 1):
        for k in range(n[j - 1]):
            rhs.append(-moment(ws, j, k + N))
    try:
        coeffs = linalg.solve(F, mat, rhs)
    except NonPerfectIndex as exc:
        raise NonPerfectIndex(f"type II system singular at {tuple(n)}", index=tuple(n),
                              **exc.details) from None
    cond = _cond(ws, mat)
    return Poly(tuple(coeffs) + (F(1),)), cond


def type1(ws, n):
    """Type I polynomials A^(k)_n with int x^j Q = 0 (j < |n|-1) and 1 (j = |n|-1)."""
    n = _check_index(ws, n)
    F = ws.field
    N = n.total
    if N < 1:
        raise ValueError("type I polynomials need |n| >= 1")
    rows = _moment_matrix(ws, n)
    # transpose: unknowns are the A coefficients, equations are powers x^l
    mat = [[rows[r][l] for r in range(N)] for l in range(N)]
    rhs = [F(0)] * (N - 1) + [F(1)]
    try:
        sol = linalg.solve(F, mat, rhs)
    except NonPerfectIndex as exc:
        raise NonPerfectIndex(f"type I system singular at {tuple(n)}", index=tuple(n),
                              **exc.details) from None
    cond = _cond(ws, mat)
    polys = []
    pos = 0
    for nk in n:
        polys.append(Poly(tuple(sol[pos:pos + nk])))
        pos += nk
    out = TypeISolution(ws, n, tuple(polys), cond)
    # a near-singular float solve can return a Q whose top moment is not 1
    norm = out.moment(N - 1)
    if abs(norm - 1) > (0 if F.exact else 1e-3):
        raise ZeroNormalization(f"type I normalization cannot be met at {tuple(n)}",
                                index=tuple(n), top_moment=norm)
    return out


def h_value(ws, p, n, k):
    """int P_n x^{n_k} w_k dx with a rounding-aware zero check."""
    F = ws.field
    nk = n[k - 1]
    val = F(0)
    scale = 0
    for i, c in enumerate(p.coeffs):
        if c != 0:
            term = c * moment(ws, k, i + nk)
            val = val + term
            scale = scale + abs(term)
    if F.is_negligible(val, scale, n.total):
        raise ZeroNormalization(f"h^({k}) vanishes at {tuple(n)}: the system is not perfect there",
                                index=tuple(n), weight=k)
    return val


def h_coeff(ws, n, k):
    """h^(k)_n = int P_n(x) x^{n_k} w_k(x) dx (nonzero, else ZeroNormalization)."""
    n = _check_index(ws, n)
    return h_value(ws, type2(ws, n), n, k)


class MOPSolver:
    """Memoizing front end for P, type I data and h-coefficients of one system.

    The caches are plain dicts filled on demand. Keep one solver per worker;
    concurrent inserts are not guarded.
    """

    def __init__(self, ws):
        self.ws = ws
        self._P = {}
        self._A = {}
        self._h = {}
        self.condition = {}

    @property
    def field(self):
        return self.ws.field

    def P(self, n):
        n = _check_index(self.ws, n)
        p = self._P.get(n)
        if p is None:
            p, cond = _type2_with_cond(self.ws, n)
            self._P[n] = p
            self.condition[("II", n)] = cond
        return p

    def type1(self, n):
        n = _check_index(self.ws, n)
        t = self._A.get(n)
        if t is None:
            t = type1(self.ws, n)
            self._A[n] = t
            self.condition[("I", n)] = t.cond
        return t

    def Q(self, n):
        return self.type1(n)

    def h(self, n, k):
        n = _check_index(self.ws, n)
        key = (n, k)
        val = self._h.get(key)
        if val is None:
            val = h_value(self.ws, self.P(n), n, k)
            self._h[key] = val
        return val

    def minus(self, n, k):
        """n - e_k, raising DegenerateIndex when n_k = 0."""
        n = MultiIndex(n)
        if n[k - 1] < 1:
            raise DegenerateIndex(f"{tuple(n)} - e_{k} is not a multi-index", index=tuple(n),
                                  weight=k)
        return n.step(k, -1)


# --- JSON export -----------------------------------------------------------

def scalar_json(value):
    """Rationals as "p/q" strings, everything else as a round-trip float."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return float(value) + 0.0  # folds -0.0 into 0.0


def poly_json(p):
    return [scalar_json(c) for c in p.coeffs]


def export_solution(solver, n, include_type1=True):
    """Dict with P_n, A^(k)_n and the h-table at n and its neighbours."""
    n = MultiIndex(n)
    ws = solver.ws
    out = {"index": list(n), "P": poly_json(solver.P(n))}
    if include_type1:
        t = solver.type1(n)
        out["A"] = [poly_json(a) for a in t.a_polys]
    table = {}
    nbrs = [n] + [n.step(k) for k in range(1, ws.m + 1)]
    nbrs += [n.step(k, -1) for k in range(1, ws.m + 1) if n[k - 1] >= 1]
    errors = {}
    for idx in nbrs:
        for k in range(1, ws.m + 1):
            key = f"{idx.key()}:{k}"
            try:
                table[key] = scalar_json(solver.h(idx, k))
            except MOPError as exc:
                if idx == n:
                    raise
                # a neighbour past the perfect range is reported, not fatal
                table[key] = None
                errors[key] = exc.code
    out["h"] = dict(sorted(table.items()))
    if errors:
        out["h_errors"] = dict(sorted(errors.items()))
    return out


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)

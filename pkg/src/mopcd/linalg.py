"""Full-pivoting Gaussian elimination over any scalar field."""
import numpy as np

from .errors import NonPerfectIndex


def solve(field, matrix, rhs):
    """Solve ``matrix @ x = rhs`` with complete pivoting.

    ``matrix`` is a list of rows of field scalars. Raises NonPerfectIndex when
    a pivot vanishes (exactly in the exact field, to rounding otherwise).
    """
    n = len(matrix)
    if n == 0:
        return []
    a = [list(row) for row in matrix]
    b = list(rhs)
    cols = list(range(n))
    scale = max(abs(v) for row in a for v in row)
    if scale == 0:
        raise NonPerfectIndex("moment matrix is identically zero", size=n)
    for p in range(n):
        best, bi, bj = -1, p, p
        for i in range(p, n):
            row = a[i]
            for j in range(p, n):
                v = abs(row[j])
                if v > best:
                    best, bi, bj = v, i, j
        if field.exact:
            singular = best == 0
        else:
            singular = best <= n * field.eps * scale
        if singular:
            raise NonPerfectIndex("moment system is singular", size=n, rank=p)
        if bi != p:
            a[p], a[bi] = a[bi], a[p]
            b[p], b[bi] = b[bi], b[p]
        if bj != p:
            for row in a:
                row[p], row[bj] = row[bj], row[p]
            cols[p], cols[bj] = cols[bj], cols[p]
        piv = a[p][p]
        prow = a[p]
        for i in range(p + 1, n):
            f = a[i][p]
            if f == 0:
                continue
            f = f / piv
            row = a[i]
            for j in range(p, n):
                row[j] = row[j] - f * prow[j]
            b[i] = b[i] - f * b[p]
    y = [None] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc = acc - a[i][j] * y[j]
        y[i] = acc / a[i][i]
    x = [None] * n
    for p, c in enumerate(cols):
        x[c] = y[p]
    return x


def condition_estimate(matrix):
    """2-norm condition number of the matrix, computed in binary64."""
    if not matrix:
        return 1.0
    m = np.array([[float(v) for v in row] for row in matrix])
    with np.errstate(all="ignore"):
        try:
            return float(np.linalg.cond(m))
        except np.linalg.LinAlgError:
            return float("inf")

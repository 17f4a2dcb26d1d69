"""Hot numeric loops: numba-compiled when available, pure numpy otherwise.

Set ``MOPCD_DISABLE_NUMBA=1`` to force the numpy path (useful for checking
that both paths agree, see ``benchmarks/bench_accel.py``).
"""
import os

import numpy as np

_DISABLED = os.environ.get("MOPCD_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by MOPCD_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


def _horner_stack_numpy(coeffs, x):
    # coeffs: (npoly, ncoef) ascending; returns (npoly, nx)
    out = np.zeros((coeffs.shape[0], x.shape[0]))
    for i in range(coeffs.shape[1] - 1, -1, -1):
        out *= x[None, :]
        out += coeffs[:, i:i + 1]
    return out


def _bin_counts_numpy(values, lo, hi, nbins):
    counts, _ = np.histogram(values, bins=nbins, range=(lo, hi))
    return counts.astype(np.int64)


def _kernel_matrix_numpy(pvals, qvals):
    return pvals.T @ qvals


if HAVE_NUMBA:
    @njit(cache=True)
    def _horner_stack_numba(coeffs, x):
        npoly, ncoef = coeffs.shape
        nx = x.shape[0]
        out = np.empty((npoly, nx))
        for p in range(npoly):
            for j in range(nx):
                acc = 0.0
                xj = x[j]
                for i in range(ncoef - 1, -1, -1):
                    acc = acc * xj + coeffs[p, i]
                out[p, j] = acc
        return out

    @njit(cache=True)
    def _bin_counts_numba(values, lo, hi, nbins):
        counts = np.zeros(nbins, dtype=np.int64)
        width = (hi - lo) / nbins
        for v in values.ravel():
            if v < lo or v > hi:
                continue
            b = int((v - lo) / width)
            if b == nbins:
                b -= 1
            counts[b] += 1
        return counts

    horner_stack = _horner_stack_numba
    bin_counts = _bin_counts_numba
else:
    horner_stack = _horner_stack_numpy
    bin_counts = _bin_counts_numpy

# a compiled triple loop lost to BLAS matmul by ~7x (benchmarks/bench_accel.py),
# so both paths use numpy here
kernel_matrix = _kernel_matrix_numpy


def horner_stack_reference(coeffs, x):
    return _horner_stack_numpy(np.asarray(coeffs, float), np.asarray(x, float))


def bin_counts_reference(values, lo, hi, nbins):
    return _bin_counts_numpy(np.asarray(values, float), lo, hi, nbins)


def kernel_matrix_reference(pvals, qvals):
    return _kernel_matrix_numpy(pvals, qvals)

"""Gaussian unitary ensemble with an external source.

The model is M = H + A with H drawn from exp(-Tr H^2 / 2) and A a fixed
diagonal matrix carrying the eigenvalues alpha_k with multiplicities n_k.
Its eigenvalues form a determinantal process whose kernel is the mixed
kernel of the multiple Hermite system w_k(x) = exp(-x^2/2 + alpha_k x) at
the multi-index (n_1, ..., n_m).

Random streams: a master ``numpy.random.SeedSequence(seed)`` is spawned
into one child per block of ``CHUNK`` matrices, so the sampled spectra
depend only on (seed, samples) and not on how blocks are scheduled.
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _accel
from .checks import compare
from .errors import InsufficientSamples
from .kernel import KernelContext, diagonal_values, kernel_grid
from .mop import MultiIndex
from .weights import GaussianDrift, WeightSystem, gauss_legendre_grid

CHUNK = 4096
MIN_EXPECTED = 50


class SourceModel:
    """alphas (distinct reals) with multiplicities (positive integers)."""

    def __init__(self, alphas, multiplicities):
        alphas = tuple(float(a) for a in alphas)
        mult = tuple(int(k) for k in multiplicities)
        if not alphas or len(alphas) != len(mult):
            raise ValueError("need one multiplicity per source eigenvalue")
        if len(set(alphas)) != len(alphas):
            raise ValueError(f"source eigenvalues must be distinct, got {alphas}")
        if min(mult) < 1:
            raise ValueError(f"multiplicities must be >= 1, got {mult}")
        self.alphas = alphas
        self.multiplicities = mult

    @property
    def size(self):
        return sum(self.multiplicities)

    @property
    def m(self):
        return len(self.alphas)

    @property
    def index(self):
        return MultiIndex(self.multiplicities)

    def source_diagonal(self):
        return np.repeat(np.array(self.alphas), self.multiplicities)

    def to_json(self):
        return {"alphas": list(self.alphas), "multiplicities": list(self.multiplicities)}

    def __repr__(self):
        return f"SourceModel(alphas={self.alphas}, multiplicities={self.multiplicities})"


@dataclass
class SpectrumSample:
    eigenvalues: np.ndarray
    seed: int


def source_weight_system(model, precision="binary64", dps=50):
    """Gaussian weights exp(-(x^2/2 - alpha_k x)), one per source eigenvalue."""
    return WeightSystem([GaussianDrift(a) for a in model.alphas], precision=precision, dps=dps)


def correlation_kernel(model, order="block", precision="binary64", dps=50):
    return KernelContext.at(source_weight_system(model, precision, dps), model.index, order)


def k_point_correlation(ctx, points):
    """R_k(points) = det[K_n(x_i, x_j)]."""
    pts = np.atleast_1d(np.asarray(points, float))
    if pts.size < 1:
        raise ValueError("need at least one point")
    return float(np.linalg.det(kernel_grid(ctx, pts, pts)))


def _gue_block(rng, count, size):
    g = rng.standard_normal((count, size, size)) + 1j * rng.standard_normal((count, size, size))
    # (G + G^*)/2: diagonal N(0, 1), off-diagonal real and imaginary parts N(0, 1/2)
    return 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))


def sample_spectra(model, samples, seed=0):
    """Sorted eigenvalues of ``samples`` independent draws, shape (samples, n)."""
    samples = int(samples)
    if samples < 1:
        raise InsufficientSamples("at least one sample is required", samples=samples)
    size = model.size
    diag = model.source_diagonal()
    blocks = -(-samples // CHUNK)
    children = np.random.SeedSequence(seed).spawn(blocks)
    out = np.empty((samples, size))
    for b, child in enumerate(children):
        start = b * CHUNK
        count = min(CHUNK, samples - start)
        h = _gue_block(np.random.default_rng(child), count, size)
        h[:, np.arange(size), np.arange(size)] += diag
        out[start:start + count] = np.linalg.eigvalsh(h)
    return out


def sample_spectrum(model, seed):
    return SpectrumSample(sample_spectra(model, 1, seed)[0], seed)


@dataclass
class DensityReport:
    edges: np.ndarray
    counts: np.ndarray
    expected: np.ndarray
    samples: int
    size: int
    max_rel_dev: float
    chi2: float
    dof: int
    p_value: float
    tol: float
    p_min: float

    @property
    def widths(self):
        return np.diff(self.edges)

    @property
    def empirical(self):
        return self.counts / (self.samples * self.widths)

    @property
    def predicted(self):
        return self.expected / (self.samples * self.widths)

    @property
    def passed(self):
        return self.max_rel_dev <= self.tol and self.p_value >= self.p_min

    def to_csv(self):
        lines = ["bin_lo,bin_hi,empirical,predicted"]
        for lo, hi, e, p in zip(self.edges[:-1], self.edges[1:], self.empirical, self.predicted):
            lines.append(f"{float(lo)!r},{float(hi)!r},{float(e)!r},{float(p)!r}")
        return "\n".join(lines) + "\n"

    def summary_json(self):
        return {"samples": self.samples, "chi2": float(self.chi2),
                "max_rel_dev": float(self.max_rel_dev), "pass": bool(self.passed)}


def bin_integrals(ctx, edges, nodes=16):
    """int_bin K_n(x, x) dx for consecutive bins, Gauss-Legendre per bin."""
    edges = np.asarray(edges, float)
    t, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = mid[:, None] + half[:, None] * t[None, :]
    vals = diagonal_values(ctx, xs.ravel()).reshape(xs.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def density_compare(model, samples, bins=40, lo=-4.5, hi=4.5, seed=0, tol=0.03, p_min=0.01,
                    ctx=None):
    """Histogram of sampled eigenvalues against the one-point function K_n(x, x).

    Bins with expected count below MIN_EXPECTED are left out of both the
    relative deviation and the chi-square statistic.
    """
    samples = int(samples)
    if samples < 1:
        raise InsufficientSamples("at least one sample is required", samples=samples)
    ctx = ctx if ctx is not None else correlation_kernel(model)
    edges = np.linspace(lo, hi, int(bins) + 1)
    spectra = sample_spectra(model, samples, seed)
    counts = _accel.bin_counts(spectra.ravel(), float(lo), float(hi), int(bins))
    expected = samples * bin_integrals(ctx, edges)
    used = expected >= MIN_EXPECTED
    if not used.any():
        raise InsufficientSamples("no bin reaches the minimum expected count",
                                  samples=samples, min_expected=MIN_EXPECTED)
    rel = np.abs(counts[used] - expected[used]) / expected[used]
    chi2 = float(np.sum((counts[used] - expected[used]) ** 2 / expected[used]))
    dof = int(used.sum())
    p_value = float(stats.chi2.sf(chi2, dof))
    return DensityReport(edges, np.asarray(counts), expected, samples, model.size,
                         float(rel.max()), chi2, dof, p_value, tol, p_min)


# --- determinantal consistency ------------------------------------------------------

def trace_check(ctx, tol=1e-8):
    """int K_n(x, x) dx = n."""
    xs, w = gauss_legendre_grid(ctx.ws)
    total = float(np.dot(w, diagonal_values(ctx, xs)))
    return compare("trace", [total], [float(ctx.n)], tol, {"n": list(ctx.index)})


def reproducing_check(ctx, pairs, tol=1e-6):
    """int K(x, t) K(t, y) dt = K(x, y) at the given pairs."""
    ts, w = gauss_legendre_grid(ctx.ws)
    xs = np.array([float(p[0]) for p in pairs])
    ys = np.array([float(p[1]) for p in pairs])
    left = kernel_grid(ctx, xs, ts)
    right = kernel_grid(ctx, ts, ys)
    lhs = [float(np.dot(left[i] * w, right[:, i])) for i in range(len(pairs))]
    rhs = [float(v) for v in np.diag(kernel_grid(ctx, xs, ys))]
    return compare("reproducing", lhs, rhs, tol, {"n": list(ctx.index)})


def pair_integral(ctx):
    """int int R_2(x, y) dx dy on a tensor Gauss-Legendre grid."""
    ts, w = gauss_legendre_grid(ctx.ws)
    d = diagonal_values(ctx, ts)
    k = kernel_grid(ctx, ts, ts)
    return float(np.dot(w, d) ** 2 - w @ (k * k.T) @ w)


def pair_check(ctx, tol=1e-4):
    n = ctx.n
    return compare("pair-integral", [pair_integral(ctx)], [float(n * (n - 1))], tol,
                   {"n": list(ctx.index)})

"""Monte Carlo matrix model and statistical comparison harness.

The ensemble is realized for arbitrary admissible parameters by an
upper-bidiagonal matrix built from independent beta-distributed squared
cosines; its squared singular values have exactly the target joint
density.  The sampler draws the beta variates from pairs of gamma
variates (exact in distribution), computes singular values of the
bidiagonal matrix directly with a backward-stable dense SVD (never the
squared Gram matrix), and is reproducible: samples are generated in
fixed-size chunks, each from its own counter-based substream keyed by
(seed, chunk index), so the output is bit-identical no matter how many
worker threads run the chunks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, VerificationError
from .solvers import JacobiParams, adaptive_cdf_grid

CHUNK = 8192

# 1% asymptotic one-sample Kolmogorov-Smirnov critical constant
KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class CSModelParams:
    """Bidiagonal cosine-sine model parameters."""

    a: float
    b: float
    beta: float
    n: int

    @staticmethod
    def from_jacobi(params: JacobiParams) -> "CSModelParams":
        a = 2 * (params.lambda1 + 1) / params.beta - 1
        b = 2 * (params.lambda2 + 1) / params.beta - 1
        return CSModelParams(float(a), float(b), float(params.beta), params.n)

    def theta_shapes(self):
        """Beta-law shape pairs for the squared cosines of the primary
        angles, j = 1..n."""
        j = np.arange(1, self.n + 1, dtype=float)
        return self.beta * (self.a + j) / 2, self.beta * (self.b + j) / 2

    def phi_shapes(self):
        j = np.arange(1, self.n, dtype=float)
        return self.beta * j / 2, self.beta * (self.a + self.b + 1 + j) / 2

    def validate(self):
        for arr in (*self.theta_shapes(), *self.phi_shapes()):
            if np.any(arr <= 0):
                raise ParameterError("non-positive beta-law shape; parameters "
                                     "outside the admissible range")
        return self


def _beta_from_gammas(rng: np.random.Generator, a, b, size):
    g1 = rng.standard_gamma(a, size=size)
    g2 = rng.standard_gamma(b, size=size)
    return g1 / (g1 + g2)


def _bidiagonal_batch(cos2_theta: np.ndarray, cos2_phi: np.ndarray) -> np.ndarray:
    """Stack of upper-bidiagonal matrices from squared cosines.

    Column j = 1..n carries cos(theta_j); all sines and cosines are
    non-negative (angles in the first quadrant)."""
    batch, n = cos2_theta.shape
    c = np.sqrt(cos2_theta)
    s = np.sqrt(1.0 - cos2_theta)
    cp = np.sqrt(cos2_phi)
    sp = np.sqrt(1.0 - cos2_phi)
    m = np.zeros((batch, n, n))
    # diagonal: c_n, c_{n-1} s'_{n-1}, ..., c_1 s'_1
    m[:, 0, 0] = c[:, n - 1]
    for i in range(1, n):
        m[:, i, i] = c[:, n - 1 - i] * sp[:, n - 1 - i]
    # superdiagonal: -s_n c'_{n-1}, ..., -s_2 c'_1
    for i in range(n - 1):
        m[:, i, i + 1] = -s[:, n - 1 - i] * cp[:, n - 2 - i]
    return m


def _sample_chunk(model: CSModelParams, size: int, seed, chunk_index: int,
                  degenerate: bool = False) -> np.ndarray:
    """Squared singular values for one chunk, shape (size, n)."""
    n = model.n
    if degenerate:
        cos2_t = np.ones((size, n))
        cos2_p = np.zeros((size, max(n - 1, 0)))
    else:
        bitgen = np.random.Philox(key=None, seed=np.random.SeedSequence(
            entropy=seed, spawn_key=(chunk_index,)))
        rng = np.random.Generator(bitgen)
        ta, tb = model.theta_shapes()
        pa, pb = model.phi_shapes()
        cos2_t = _beta_from_gammas(rng, ta, tb, (size, n))
        cos2_p = (_beta_from_gammas(rng, pa, pb, (size, n - 1))
                  if n > 1 else np.zeros((size, 0)))
    mats = _bidiagonal_batch(cos2_t, cos2_p)
    sv = np.linalg.svd(mats, compute_uv=False)
    return np.square(sv)


def sample_cs_spectrum(params: JacobiParams, n_samples: int, seed: int = 0,
                       threads: int | None = None,
                       degenerate: bool = False) -> np.ndarray:
    """Squared singular values of the bidiagonal model, shape
    (n_samples, n), sorted descending along the last axis."""
    model = CSModelParams.from_jacobi(params).validate()
    if threads is None:
        threads = int(os.environ.get("JACOBI_EDGE_THREADS", "1"))
    chunks = [(i, min(CHUNK, n_samples - i * CHUNK))
              for i in range((n_samples + CHUNK - 1) // CHUNK)]

    def work(item):
        idx, size = item
        return _sample_chunk(model, size, seed, idx, degenerate)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return np.concatenate(parts, axis=0) if parts else np.empty((0, model.n))


def sample_lambda_max(params: JacobiParams, n_samples: int, seed: int = 0,
                      threads: int | None = None) -> np.ndarray:
    return sample_cs_spectrum(params, n_samples, seed, threads)[:, 0]


# ---------------------------------------------------------------------------
# empirical distribution and Kolmogorov-Smirnov gate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalCDF:
    """Sorted sample of values in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        if v.size == 0:
            raise ParameterError("empty sample")
        if v[0] < 0 or v[-1] > 1:
            raise ParameterError("sample values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def count(self) -> int:
        return int(self.values.size)

    def at(self, grid) -> np.ndarray:
        """Fraction of samples <= each grid point."""
        grid = np.asarray(grid, dtype=float)
        return np.searchsorted(self.values, grid, side="right") / self.count


def empirical_gap(samples, grid) -> np.ndarray:
    return EmpiricalCDF(np.asarray(samples)).at(grid)


def ks_distance(ecdf: EmpiricalCDF, analytic) -> tuple[float, float, bool]:
    """Sup-norm distance between the empirical CDF and an analytic CDF
    callable (vectorized over numpy arrays), with the 1% asymptotic gate.

    Returns (statistic, threshold, passed)."""
    n = ecdf.count
    f = np.asarray(analytic(ecdf.values), dtype=float)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    d = float(np.max(np.maximum(np.abs(hi - f), np.abs(f - lo))))
    thr = KS_CRITICAL_1PCT / np.sqrt(n)
    return d, float(thr), bool(d <= thr)


def analytic_cdf_interpolator(form, rise_tol: float = 2.5e-4):
    """Piecewise-linear interpolant of a structured gap form, refined so
    the interpolation error is below ``rise_tol`` (monotone form)."""
    xs, ys = adaptive_cdf_grid(form, rise_tol=rise_tol)
    xs = np.asarray(xs)
    ys = np.clip(np.asarray(ys), 0.0, 1.0)

    def cdf(v):
        return np.interp(np.asarray(v, dtype=float), xs, ys)

    cdf.grid = (xs, ys)
    return cdf


def inverse_cdf_samples(form, n_samples: int, seed: int = 0) -> np.ndarray:
    """Synthetic draws exactly from a structured gap form by inverting a
    refined monotone grid (used to calibrate the KS gate)."""
    xs, ys = adaptive_cdf_grid(form, rise_tol=2.5e-4)
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    ys, idx = np.unique(ys, return_index=True)
    xs = xs[idx]
    rng = np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(seed)))
    u = rng.random(n_samples)
    return np.interp(u, ys, xs)


def mc_gap_check(params: JacobiParams, form, n_samples: int = 10 ** 5,
                 seed: int = 0, threads: int | None = None) -> dict:
    """Draw samples of the largest eigenvalue and run the 1% KS gate
    against the analytic curve."""
    lam_max = sample_lambda_max(params, n_samples, seed, threads)
    cdf = analytic_cdf_interpolator(form)
    d, thr, ok = ks_distance(EmpiricalCDF(lam_max), cdf)
    return {"test": "mc_ks_lambda_max", "statistic": d, "threshold": thr,
            "samples": n_samples, "pass": ok}


def require(report: dict):
    if not report["pass"]:
        raise VerificationError("%s failed: statistic %.4g > threshold %.4g"
                                % (report["test"], report["statistic"],
                                   report["threshold"]))
    return report

"""Fractional Gaussian noise on space-time lattices.

Each Dirichlet sine mode of the stochastic heat equation is driven by an
independent fractional Brownian motion with a common Hurst index H, and
the integrator consumes its increments over a uniform time grid.  This
module owns the second-order structure of those increments (the
fractional Gaussian autocovariance), an exact-in-law sampler based on
circulant embedding with a dense Cholesky fallback, and the block-sum
coarsening that couples a fine reference path to every coarser view of
the same realisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import beta as _beta

__all__ = [
    "HurstModel",
    "NoiseLattice",
    "NoiseSamplingError",
    "fgn_autocovariance",
    "exact_covariance_matrix",
    "sample_fgn_path",
    "sample_noise_lattice",
    "coarsen",
]

# Relative dip below zero tolerated in the embedding eigenvalues before
# sampling falls back to a dense factorisation, and the relative diagonal
# jitter allowed there.  Beyond both, sampling refuses rather than bends.
_EMBED_EIG_TOL = 1e-8
_CHOL_JITTER = 1e-10


class NoiseSamplingError(RuntimeError):
    """No exact sampling route exists for the requested lattice."""


@dataclass(frozen=True)
class HurstModel:
    """Hurst index with the constants the rest of the code hangs off it.

    The index must lie in (0, 1).  ``regime`` separates negatively
    correlated increments (H < 1/2) from Brownian independence (H = 1/2)
    and long-range dependence (H > 1/2).  ``c_h`` is the normalisation of
    the moving-average kernel of the corresponding fractional Brownian
    motion; it carries the sign of 2H - 1 and is unused at H = 1/2, where
    the kernel degenerates to an indicator.
    """

    hurst: float

    def __post_init__(self):
        h = self.hurst
        if not (isinstance(h, (int, float)) and 0.0 < float(h) < 1.0):
            raise ValueError(f"Hurst index must lie in (0, 1), got {h!r}")
        object.__setattr__(self, "hurst", float(h))

    @property
    def regime(self) -> str:
        if self.hurst < 0.5:
            return "rough"
        if self.hurst == 0.5:
            return "brownian"
        return "smooth"

    @property
    def c_h(self) -> float:
        h = self.hurst
        if h > 0.5:
            return math.sqrt(h * (2.0 * h - 1.0) / _beta(2.0 - 2.0 * h, h - 0.5))
        if h < 0.5:
            return -math.sqrt(h * (1.0 - 2.0 * h) / (2.0 * _beta(1.0 - 2.0 * h, h + 0.5)))
        return 1.0


def _as_hurst(hurst) -> HurstModel:
    return hurst if isinstance(hurst, HurstModel) else HurstModel(float(hurst))


def fgn_autocovariance(lag, hurst, dt: float = 1.0):
    """Autocovariance of fractional Gaussian increments at integer lags.

    cov of the increments over steps i and j of width ``dt`` at
    ``lag = |i - j|``:  0.5 ((l+1)^{2H} - 2 l^{2H} + |l-1|^{2H}) dt^{2H}.
    Scalar lags return a float, array lags an array.
    """
    h = _as_hurst(hurst).hurst
    lags = np.abs(np.asarray(lag, dtype=float))
    two_h = 2.0 * h
    g = 0.5 * ((lags + 1.0) ** two_h - 2.0 * lags**two_h + np.abs(lags - 1.0) ** two_h)
    g = g * dt**two_h
    if np.ndim(lag) == 0:
        return float(g)
    return g


def exact_covariance_matrix(n_steps: int, hurst, dt: float = 1.0) -> np.ndarray:
    """Dense Toeplitz covariance of ``n_steps`` consecutive increments."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    return toeplitz(fgn_autocovariance(np.arange(n_steps), hurst, dt))


# ---------------------------------------------------------------------------
# circulant embedding
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _embedding_eigenvalues(n_steps: int, hurst: float):
    """Eigenvalues of the circulant embedding of the unit-dt covariance.

    The minimal embedding of fractional Gaussian noise is nonnegative
    definite in exact arithmetic for every H in (0, 1); this guard only
    absorbs floating-point dips.  Returns None when the dip exceeds the
    tolerance, routing sampling through the Cholesky fallback.
    """
    g = fgn_autocovariance(np.arange(n_steps + 1), hurst, 1.0)
    row = np.concatenate([g, g[-2:0:-1]])  # wrap lags n-1 .. 1, length 2n
    eigs = np.fft.fft(row).real
    if eigs.min() < -_EMBED_EIG_TOL * eigs.max():
        return None
    eigs = np.clip(eigs, 0.0, None)
    eigs.flags.writeable = False
    return eigs


@lru_cache(maxsize=8)
def _fallback_cholesky(n_steps: int, hurst: float) -> np.ndarray:
    c = exact_covariance_matrix(n_steps, hurst, 1.0)
    try:
        chol = np.linalg.cholesky(c)
    except np.linalg.LinAlgError:
        jitter = _CHOL_JITTER * c[0, 0]
        try:
            chol = np.linalg.cholesky(c + jitter * np.eye(n_steps))
        except np.linalg.LinAlgError as exc:
            raise NoiseSamplingError(
                f"increment covariance not positive definite for n_steps={n_steps}, "
                f"H={hurst}, even with relative jitter {_CHOL_JITTER}"
            ) from exc
    chol.flags.writeable = False
    return chol


def _frequency_sample(eigs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One Hermitian frequency-domain draw for the circulant square root."""
    m = eigs.shape[0]
    half = m // 2
    z = np.zeros(m, dtype=complex)
    z[0] = math.sqrt(eigs[0] / m) * rng.standard_normal()
    z[half] = math.sqrt(eigs[half] / m) * rng.standard_normal()
    if half > 1:
        scale = np.sqrt(eigs[1:half] / (2.0 * m))
        u = rng.standard_normal(half - 1)
        v = rng.standard_normal(half - 1)
        z[1:half] = scale * (u + 1j * v)
        z[m - 1 : half : -1] = np.conj(z[1:half])
    return z


def sample_fgn_path(n_steps: int, hurst, dt: float, rng: np.random.Generator) -> np.ndarray:
    """Draw one fractional Gaussian increment path, exact in law.

    Uses circulant embedding whenever its eigenvalues are nonnegative
    (they are, up to roundoff) and a dense Cholesky factorisation of the
    exact covariance otherwise.  A given generator state maps to exactly
    one path: the draw consumes a fixed number of variates.
    """
    hm = _as_hurst(hurst)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    eigs = _embedding_eigenvalues(n_steps, hm.hurst)
    if eigs is None:
        x = _fallback_cholesky(n_steps, hm.hurst) @ rng.standard_normal(n_steps)
    else:
        x = np.fft.fft(_frequency_sample(eigs, rng))[:n_steps].real
    # unit-dt noise rescaled by self-similarity
    return dt**hm.hurst * x


def _mode_generator(seed: int, row: int) -> np.random.Generator:
    # one counter-based stream per (seed, row); rows never share variates
    key = np.array([seed, row], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def coarsen(increments: np.ndarray, factor: int) -> np.ndarray:
    """Block-sum increments along the last axis.

    Summing ``factor`` consecutive fine increments is exactly the coarse
    increment of the same motion, so a sampled array viewed through
    ``coarsen`` is the same realisation on the coarse grid.
    """
    factor = int(factor)
    if factor < 1:
        raise ValueError("factor must be >= 1")
    arr = np.asarray(increments)
    n = arr.shape[-1]
    if n % factor:
        raise ValueError(f"cannot coarsen {n} steps by factor {factor}")
    if factor == 1:
        return arr.copy()
    shape = arr.shape[:-1] + (n // factor, factor)
    return arr.reshape(shape).sum(axis=-1)


@dataclass(frozen=True)
class NoiseLattice:
    """Increments of independent per-mode fractional Brownian motions.

    ``increments`` has shape (n_modes, n_steps); row k holds the
    increments of the motion driving sine mode k+1 over steps of width
    ``dt_fine``.  Row k is a pure function of (seed, k, H, dt_fine,
    n_steps): lattices sharing a seed agree row-for-row no matter how
    many modes they hold.
    """

    dt_fine: float
    increments: np.ndarray
    seed: int
    hurst: HurstModel

    @property
    def n_modes(self) -> int:
        return self.increments.shape[0]

    @property
    def n_steps(self) -> int:
        return self.increments.shape[1]

    def coarsened(self, factor: int) -> "NoiseLattice":
        return NoiseLattice(
            dt_fine=self.dt_fine * factor,
            increments=coarsen(self.increments, factor),
            seed=self.seed,
            hurst=self.hurst,
        )

    def to_csv(self, path) -> None:
        """Dump the lattice as ``mode,step,value`` rows (modes 1-based)."""
        with open(path, "w", newline="\n") as fh:
            fh.write("mode,step,value\n")
            for k in range(self.n_modes):
                row = self.increments[k]
                for n in range(self.n_steps):
                    fh.write(f"{k + 1},{n},{float(row[n])!r}\n")


def sample_noise_lattice(n_modes: int, n_steps: int, hurst, dt_fine: float, seed: int) -> NoiseLattice:
    """Sample a full mode-by-step increment lattice.

    Every row comes from its own counter-based stream keyed by
    (seed, row), so parallel consumers can regenerate any row in
    isolation and the lattice is reproducible bit-for-bit.
    """
    hm = _as_hurst(hurst)
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    rows = np.empty((n_modes, n_steps), dtype=float)
    for k in range(n_modes):
        rows[k] = sample_fgn_path(n_steps, hm, dt_fine, _mode_generator(seed, k))
    rows.flags.writeable = False
    return NoiseLattice(dt_fine=float(dt_fine), increments=rows, seed=seed, hurst=hm)

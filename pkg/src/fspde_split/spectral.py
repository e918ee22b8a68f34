"""Dirichlet sine coordinates for the heat semigroup on (0, 1).

The operator is A = -eps d^2/dxi^2 with Dirichlet boundary conditions,
diagonal in the orthonormal basis e_k(xi) = sqrt(2) sin(k pi xi) with
eigenvalues eps * (k pi)^2.  Fields live either as the first N basis
coefficients or as samples on the interior grid xi_m = m / (N + 1);
the two views are exchanged by a type-I discrete sine transform
normalised so that the round trip is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dst

__all__ = [
    "SpectralField",
    "PhysicalField",
    "interior_grid",
    "laplacian_eigenvalues",
    "dst_forward",
    "dst_inverse",
    "semigroup_factors",
    "semigroup_apply",
    "smoothing_factors",
    "smoothed_increment_apply",
    "l2_norm",
    "sobolev_norm",
]

# below this value of eps * lambda_k * dt the smoothing factor switches to
# its series to dodge the 1 - e^{-z} cancellation
_SERIES_SWITCH = 1e-8


def _own(arr) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    if out.ndim != 1:
        raise ValueError("fields are 1-D")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpectralField:
    """First n_modes sine coefficients of a field, with its diffusion eps."""

    coeffs: np.ndarray
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _own(self.coeffs))
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")

    @property
    def n_modes(self) -> int:
        return self.coeffs.shape[0]


@dataclass(frozen=True)
class PhysicalField:
    """Samples on the interior grid m / (N + 1), m = 1 .. N."""

    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _own(self.samples))

    @property
    def n_points(self) -> int:
        return self.samples.shape[0]


def interior_grid(n_points: int) -> np.ndarray:
    return np.arange(1, n_points + 1, dtype=float) / (n_points + 1)


def laplacian_eigenvalues(n_modes: int) -> np.ndarray:
    """Dirichlet eigenvalues (k pi)^2, k = 1 .. n_modes, without eps."""
    k = np.arange(1, n_modes + 1, dtype=float)
    return (k * math.pi) ** 2


def dst_forward(phys: PhysicalField, eps: float) -> SpectralField:
    """Samples -> sine coefficients.

    coeffs[k-1] = (1 / (N+1)) sum_m samples[m-1] sqrt(2) sin(k pi m / (N+1)),
    the discrete analogue of projecting on the orthonormal basis.
    """
    n = phys.n_points
    coeffs = dst(phys.samples, type=1) / (math.sqrt(2.0) * (n + 1))
    return SpectralField(coeffs, eps)


def dst_inverse(field: SpectralField) -> PhysicalField:
    """Sine coefficients -> samples on the interior grid (exact inverse)."""
    samples = dst(field.coeffs, type=1) / math.sqrt(2.0)
    return PhysicalField(samples)


def semigroup_factors(n_modes: int, eps: float, dt: float) -> np.ndarray:
    """Diagonal of e^{-dt A}: exp(-eps lambda_k dt)."""
    return np.exp(-eps * laplacian_eigenvalues(n_modes) * dt)


def semigroup_apply(field: SpectralField, dt: float) -> SpectralField:
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    return SpectralField(field.coeffs * semigroup_factors(field.n_modes, field.eps, dt), field.eps)


def smoothing_factors(n_modes: int, eps: float, dt: float) -> np.ndarray:
    """Diagonal of A^{-1}(I - e^{-dt A}): (1 - exp(-eps lambda_k dt)) / (eps lambda_k).

    Equals int_0^dt e^{-eps lambda_k s} ds, hence always <= dt.  The
    stiff modes are unproblematic; the cancellation for
    eps lambda_k dt -> 0 is handled by a two-term series.
    """
    lam = eps * laplacian_eigenvalues(n_modes)
    z = lam * dt
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = -np.expm1(-z) / lam
    return np.where(z < _SERIES_SWITCH, dt * (1.0 - 0.5 * z), exact)


def smoothed_increment_apply(field: SpectralField, dt: float) -> SpectralField:
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    return SpectralField(field.coeffs * smoothing_factors(field.n_modes, field.eps, dt), field.eps)


def l2_norm(field: SpectralField) -> float:
    """L^2(0,1) norm of the field (the basis is orthonormal)."""
    return float(np.linalg.norm(field.coeffs))


def sobolev_norm(field: SpectralField, alpha: float) -> float:
    """Norm of (-d^2/dxi^2)^{alpha/2} applied to the field, eps excluded."""
    return float(np.linalg.norm(field.coeffs * laplacian_eigenvalues(field.n_modes) ** (alpha / 2.0)))

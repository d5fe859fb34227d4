"""Periodic grid, wavenumber lattice, and the dealiasing contract.

Every other module builds on the conventions fixed here: the box is
[0, L)^2 sampled at n_side points per dimension (a power of two), the
wavenumbers are (2*pi/L) times the signed integer lattice with Nyquist
index n_side/2, and quadratic products are protected by the 2/3 rule
(modes with max(|k1|, |k2|) above two thirds of the Nyquist wavenumber
are zeroed).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import ConfigurationError

# pocketfft splits work along transform lines, so the worker count does not
# change summation order or results.
_FFT_WORKERS = int(os.environ.get("SQGLAB_FFT_WORKERS", "0")) or min(4, os.cpu_count() or 1)


def fft2(a: np.ndarray) -> np.ndarray:
    return scipy.fft.fft2(a, workers=_FFT_WORKERS)


def ifft2(a: np.ndarray) -> np.ndarray:
    return scipy.fft.ifft2(a, workers=_FFT_WORKERS)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Square periodic grid on [0, L)^2.

    Parameters
    ----------
    n_side : int
        Samples per dimension; must be a power of two, at least 8.
    box_length : float
        Physical side length L (dimensionless).
    """

    n_side: int
    box_length: float = 2.0 * np.pi
    spacing: float = field(init=False)

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.n_side) or self.n_side < 8:
            raise ConfigurationError(
                f"n_side must be a power of two >= 8, got {self.n_side}"
            )
        if not self.box_length > 0:
            raise ConfigurationError(f"box_length must be positive, got {self.box_length}")
        object.__setattr__(self, "spacing", self.box_length / self.n_side)

    # -- coordinates -------------------------------------------------------

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (x1, x2) of sample coordinates in [0, L)."""
        x = np.arange(self.n_side) * self.spacing
        return np.meshgrid(x, x, indexing="ij")

    def coords_centered(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid of signed displacement coordinates wrapped to [-L/2, L/2)."""
        x = np.arange(self.n_side) * self.spacing
        x = (x + self.box_length / 2.0) % self.box_length - self.box_length / 2.0
        return np.meshgrid(x, x, indexing="ij")

    # -- wavenumbers -------------------------------------------------------

    @property
    def k_fundamental(self) -> float:
        """Smallest positive wavenumber 2*pi/L."""
        return 2.0 * np.pi / self.box_length

    @property
    def k_nyquist(self) -> float:
        return self.k_fundamental * (self.n_side // 2)

    def mode_indices(self) -> np.ndarray:
        """Signed integer frequencies per axis, fft layout (Nyquist at -n/2)."""
        return np.fft.fftfreq(self.n_side, d=1.0 / self.n_side).astype(np.int64)

    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (k1, k2) of physical wavenumbers in fft layout."""
        k = self.mode_indices() * self.k_fundamental
        return np.meshgrid(k, k, indexing="ij")

    def k_magnitude(self) -> np.ndarray:
        k1, k2 = self.wavenumbers()
        return np.sqrt(k1 * k1 + k2 * k2)

    # -- dealiasing --------------------------------------------------------

    @property
    def dealias_index_cutoff(self) -> int:
        """Largest retained integer mode index under the 2/3 rule."""
        return int(np.floor((2.0 / 3.0) * (self.n_side // 2)))

    @property
    def dealias_k_cutoff(self) -> float:
        return self.dealias_index_cutoff * self.k_fundamental

    def dealias_mask(self) -> np.ndarray:
        m = np.abs(self.mode_indices())
        keep = m <= self.dealias_index_cutoff
        return np.logical_and.outer(keep, keep)

    def __str__(self) -> str:  # pragma: no cover
        return f"Grid2D(n={self.n_side}, L={self.box_length:.6g})"

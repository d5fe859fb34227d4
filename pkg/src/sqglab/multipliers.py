"""Fourier-multiplier operators.

Presets: ``frac_laplacian(s)`` with symbol |k|^s and zero mode 0,
``bessel(s)`` with symbol (1+|k|^2)^(s/2), ``grad_perp`` with vector symbol
i(-k2, k1), and the constitutive map ``biot_savart_velocity`` realizing
u = grad_perp (-Laplace)^(-1+beta/2) theta, i.e. the vector symbol
i(-k2, k1)|k|^(beta-2) with the k = 0 mode gauged to zero (velocity is
computed from the mean-free part of the scalar).  Odd (derivative-like)
symbols are zeroed on the unpaired Nyquist lines so real fields stay real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError
from .fields import SpectralField, dealias


@dataclass(frozen=True)
class MultiplierSpec:
    """A diagonal Fourier operator: symbol(k1, k2) plus explicit zero-mode value."""

    name: str
    symbol: Callable[[np.ndarray, np.ndarray], np.ndarray]
    zero_mode: complex | None = 0.0


def frac_laplacian(s: float) -> MultiplierSpec:
    def sym(k1, k2):
        ksq = k1 * k1 + k2 * k2
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(ksq > 0, ksq ** (s / 2.0), 0.0)
        return out

    return MultiplierSpec(f"frac_laplacian:{s:g}", sym, zero_mode=0.0)


def bessel(s: float) -> MultiplierSpec:
    def sym(k1, k2):
        return (1.0 + k1 * k1 + k2 * k2) ** (s / 2.0)

    return MultiplierSpec(f"bessel:{s:g}", sym, zero_mode=1.0)


def grad_perp() -> MultiplierSpec:
    def sym(k1, k2):
        return np.stack([-1j * k2, 1j * k1])

    return MultiplierSpec("grad_perp", sym, zero_mode=0.0)


def _nyquist_line_mask(grid) -> np.ndarray:
    """True away from the unpaired Nyquist index -n/2 on either axis."""
    m = grid.mode_indices()
    good = m != -(grid.n_side // 2)
    return np.logical_and.outer(good, good)


def apply_multiplier(f: SpectralField, m: MultiplierSpec) -> SpectralField:
    """Multiply the coefficients of ``f`` by the symbol; set k=0 per policy."""
    grid = f.grid
    k1, k2 = grid.wavenumbers()
    sym = np.asarray(m.symbol(k1, k2), dtype=np.complex128)
    vector_out = sym.ndim == 3

    nonzero = ~((k1 == 0.0) & (k2 == 0.0))
    check = sym[:, nonzero] if vector_out else sym[nonzero]
    if not np.all(np.isfinite(check)):
        raise ConfigurationError(f"symbol {m.name!r} not finite at a nonzero wavenumber")
    if m.zero_mode is None:
        at_zero = sym[..., 0, 0]
        if not np.all(np.isfinite(np.atleast_1d(at_zero))):
            raise ConfigurationError(
                f"symbol {m.name!r} is singular at k=0 and no zero_mode policy was given"
            )
    else:
        sym[..., 0, 0] = m.zero_mode

    c = f.coefficients
    if vector_out:
        if f.components != 1:
            raise ConfigurationError("vector-valued symbols act on scalar fields")
        out = sym * c[None, :, :]
        out *= _nyquist_line_mask(grid)[None, :, :]
    else:
        out = (sym[None, :, :] * c) if f.components == 2 else sym * c
    return SpectralField.from_coefficients(grid, out)


def biot_savart_velocity(theta: SpectralField, beta: float) -> SpectralField:
    """Velocity from the constitutive law, as a divergence-free vector field."""
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if theta.components != 1:
        raise ConfigurationError("constitutive law takes a scalar field")

    def sym(k1, k2):
        ksq = k1 * k1 + k2 * k2
        with np.errstate(divide="ignore", invalid="ignore"):
            radial = np.where(ksq > 0, ksq ** ((beta - 2.0) / 2.0), 0.0)
        return np.stack([-1j * k2 * radial, 1j * k1 * radial])

    return apply_multiplier(theta, MultiplierSpec(f"biot_savart:{beta:g}", sym, zero_mode=0.0))


# -- derivative helpers -------------------------------------------------------


def gradient(f: SpectralField) -> SpectralField:
    """Spectral gradient of a scalar field, shape (2, n, n)."""
    def sym(k1, k2):
        return np.stack([1j * k1, 1j * k2])

    return apply_multiplier(f, MultiplierSpec("grad", sym, zero_mode=0.0))


def derivative(f: SpectralField, alpha: tuple[int, int]) -> SpectralField:
    """Mixed partial derivative D^alpha of a scalar field."""
    a1, a2 = alpha

    def sym(k1, k2):
        return (1j * k1) ** a1 * (1j * k2) ** a2

    out = apply_multiplier(f, MultiplierSpec(f"D^{alpha}", sym, zero_mode=1.0 if a1 == a2 == 0 else 0.0))
    if (a1 + a2) % 2 == 1:
        c = out.coefficients * _nyquist_line_mask(f.grid)
        out = SpectralField.from_coefficients(f.grid, c)
    return out


def divergence(u: SpectralField) -> SpectralField:
    """Spectral divergence of a vector field."""
    if u.components != 2:
        raise ConfigurationError("divergence takes a vector field")
    k1, k2 = u.grid.wavenumbers()
    c = u.coefficients
    out = 1j * k1 * c[0] + 1j * k2 * c[1]
    return SpectralField.from_coefficients(u.grid, out * _nyquist_line_mask(u.grid))


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product formed in physical space after dealiasing both factors."""
    fd, gd = dealias(f), dealias(g)
    return dealias(SpectralField.from_values(f.grid, fd.values * gd.values))


def kato_ponce_commutator(f: SpectralField, g: SpectralField, s: float) -> SpectralField:
    """Commutator J^s(fg) - f J^s(g) with dealiased products."""
    if s <= 0:
        raise DomainError(f"commutator order s must be positive, got {s}")
    if f.components != 1 or g.components != 1:
        raise ConfigurationError("commutator takes scalar fields")
    js = bessel(s)
    lhs = apply_multiplier(dealiased_product(f, g), js)
    rhs = dealiased_product(f, apply_multiplier(g, js))
    return lhs - rhs


# -- preset registry ("name:param" strings in config files) -------------------


def parse_multiplier(spec: str) -> MultiplierSpec:
    name, _, arg = spec.partition(":")
    if name == "frac_laplacian":
        return frac_laplacian(float(arg))
    if name == "bessel":
        return bessel(float(arg))
    if name == "grad_perp":
        return grad_perp()
    if name == "biot_savart":
        beta = float(arg)
        if not 0.0 < beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {beta}")

        def sym(k1, k2, beta=beta):
            ksq = k1 * k1 + k2 * k2
            with np.errstate(divide="ignore", invalid="ignore"):
                radial = np.where(ksq > 0, ksq ** ((beta - 2.0) / 2.0), 0.0)
            return np.stack([-1j * k2 * radial, 1j * k1 * radial])

        return MultiplierSpec(f"biot_savart:{beta:g}", sym, zero_mode=0.0)
    raise ConfigurationError(f"unknown multiplier preset {spec!r}")

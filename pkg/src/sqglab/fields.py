"""Real/spectral field container and the operations tied to it.

A ``SpectralField`` holds a real scalar (shape ``(n, n)``) or vector
(shape ``(2, n, n)``) sample array together with its Fourier coefficients
under the package normalization

    c_k = (L / n^2) * sum_x f(x) exp(-i k.x),

so that Parseval reads ``sum_k |c_k|^2 = spacing^2 * sum_x |f(x)|^2``.
Representations are computed lazily and cached; fields are immutable
(arrays are marked read-only) and every operation returns a new field.
"""

from __future__ import annotations

import io
import struct

import numpy as np

from .errors import ConfigurationError
from .grid import Grid2D, fft2, ifft2

_MAGIC = b"SQGF"


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


class SpectralField:
    """Immutable field on a :class:`Grid2D` with cached dual representation."""

    __slots__ = ("grid", "_values", "_coeffs")

    def __init__(self, grid: Grid2D, values: np.ndarray | None = None,
                 coefficients: np.ndarray | None = None):
        if values is None and coefficients is None:
            raise ValueError("need values or coefficients")
        self.grid = grid
        n = grid.n_side
        for a, name in ((values, "values"), (coefficients, "coefficients")):
            if a is not None and a.shape not in ((n, n), (2, n, n)):
                raise ConfigurationError(f"{name} shape {a.shape} does not match grid n={n}")
        self._values = None if values is None else _freeze(np.asarray(values, dtype=np.float64))
        self._coeffs = None if coefficients is None else _freeze(np.asarray(coefficients, dtype=np.complex128))

    # -- constructors --------------------------------------------------

    @classmethod
    def from_values(cls, grid: Grid2D, values: np.ndarray) -> "SpectralField":
        return cls(grid, values=values)

    @classmethod
    def from_coefficients(cls, grid: Grid2D, coefficients: np.ndarray) -> "SpectralField":
        return cls(grid, coefficients=coefficients)

    @classmethod
    def zeros(cls, grid: Grid2D, components: int = 1) -> "SpectralField":
        shape = (grid.n_side, grid.n_side) if components == 1 else (2, grid.n_side, grid.n_side)
        return cls(grid, values=np.zeros(shape))

    # -- representations -------------------------------------------------

    @property
    def components(self) -> int:
        a = self._values if self._values is not None else self._coeffs
        return 1 if a.ndim == 2 else 2

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            n2 = self.grid.n_side**2
            vals = ifft2(self._coeffs) * (n2 / self.grid.box_length)
            self._values = _freeze(vals.real)
        return self._values

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            c = fft2(self._values) * (self.grid.box_length / self.grid.n_side**2)
            self._coeffs = _freeze(c)
        return self._coeffs

    # -- arithmetic (pointwise, grid-preserving) ---------------------------

    def _like(self, values=None, coefficients=None) -> "SpectralField":
        return SpectralField(self.grid, values=values, coefficients=coefficients)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return self._like(values=self.values + other.values)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return self._like(values=self.values - other.values)

    def __mul__(self, scalar: float) -> "SpectralField":
        return self._like(values=self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return self._like(values=-self.values)

    def component(self, i: int) -> "SpectralField":
        if self.components == 1:
            raise ValueError("scalar field has no components to select")
        return self._like(values=self.values[i])

    # -- diagnostics --------------------------------------------------------

    def linf(self) -> float:
        """Max pointwise magnitude (Euclidean over components for vectors)."""
        v = self.values
        if self.components == 2:
            return float(np.sqrt(v[0] ** 2 + v[1] ** 2).max())
        return float(np.abs(v).max())

    def l2(self) -> float:
        """Continuum L^2 norm over the box, h * sqrt(sum |f|^2)."""
        return float(np.sqrt(np.sum(self.values**2)) * self.grid.spacing)

    def mean(self) -> float:
        return float(np.mean(self.values))


# -- module operations -------------------------------------------------------


def transform(f: SpectralField, direction: str) -> SpectralField:
    """Populate and return the other representation of ``f``.

    ``direction='forward'`` returns a field built from the spectral
    coefficients of ``f``; ``'inverse'`` returns one built from its samples.
    Round trip reproduces samples to ~1e-15 relative.
    """
    if direction == "forward":
        return SpectralField.from_coefficients(f.grid, f.coefficients)
    if direction == "inverse":
        return SpectralField.from_values(f.grid, f.values)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def dealias(f: SpectralField) -> SpectralField:
    """Zero all modes with max(|k1|, |k2|) above the 2/3-Nyquist cutoff."""
    mask = f.grid.dealias_mask()
    c = f.coefficients * (mask if f.components == 1 else mask[None, :, :])
    return SpectralField.from_coefficients(f.grid, c)


def parseval_mismatch(f: SpectralField) -> float:
    """Relative gap between h^2*sum|values|^2 and sum|coefficients|^2."""
    phys = np.sum(f.values**2) * f.grid.spacing**2
    spec = np.sum(np.abs(f.coefficients) ** 2)
    return abs(phys - spec) / max(phys, 1e-300)


# -- serialization -----------------------------------------------------------
#
# Flat binary container: magic 'SQGF', then header of three little-endian
# 64-bit values (n_side: uint64, box_length: float64, components: uint64),
# then row-major float64 samples.


def save_field(f: SpectralField, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QdQ", f.grid.n_side, f.grid.box_length, f.components))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def load_field(path) -> SpectralField:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ConfigurationError(f"not a field container: bad magic {magic!r}")
        n, L, comps = struct.unpack("<QdQ", fh.read(24))
        count = comps * n * n
        payload = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
    shape = (n, n) if comps == 1 else (2, n, n)
    return SpectralField.from_values(Grid2D(int(n), float(L)), payload.reshape(shape).astype(np.float64))


def field_to_csv(f: SpectralField, path) -> None:
    """Write samples as CSV for inspection (one block per component)."""
    with open(path, "w") as fh:
        v = f.values if f.components == 2 else f.values[None, :, :]
        for c in range(v.shape[0]):
            fh.write(f"# component {c}, n_side={f.grid.n_side}, L={f.grid.box_length!r}\n")
            buf = io.StringIO()
            np.savetxt(buf, v[c], delimiter=",")
            fh.write(buf.getvalue())

"""Periodic grids, Fourier transforms, multipliers, and dealiasing.

Everything downstream (propagators, time steppers, traveling-wave solvers)
is built on the three operations here: apply a Fourier multiplier, take a
spectral derivative, and dealias a product.  Grids are uniform and periodic,
with nodes x_j = -L/2 + j*dx so that x = 0 is the grid point N/2 and the
wavenumbers form the standard symmetric set {2*pi*k/L : k = -N/2 .. N/2-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridMismatchError, MultiplierDomainError

__all__ = [
    "Grid",
    "SpectralField",
    "Multiplier",
    "apply_multiplier",
    "dealias",
    "derivative",
    "identity_symbol",
    "gravity_wave_symbol",
    "whitham_symbol",
    "power_symbol",
]


def _as_tuple(value, dim, cast):
    if np.isscalar(value):
        return (cast(value),) * dim
    out = tuple(cast(v) for v in value)
    if len(out) != dim:
        raise ValueError(f"expected {dim} per-axis values, got {len(out)}")
    return out


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid in one or two dimensions.

    Parameters
    ----------
    length : float or sequence of float
        Domain extent per axis [m].
    nodes : int or sequence of int
        Node count per axis; must be even and at least 4 so the Nyquist
        mode is well-defined.
    dim : int
        1 or 2.  Scalars for ``length``/``nodes`` broadcast to all axes.
    """

    length: tuple[float, ...]
    nodes: tuple[int, ...]
    dim: int = 1

    def __init__(self, length, nodes, dim=1):
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "length", _as_tuple(length, dim, float))
        object.__setattr__(self, "nodes", _as_tuple(nodes, dim, int))
        for L in self.length:
            if not (L > 0.0 and math.isfinite(L)):
                raise ValueError(f"grid length must be positive, got {L}")
        for n in self.nodes:
            if n < 4 or n % 2 != 0:
                raise ValueError(f"node count must be even and >= 4, got {n}")

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.length, self.nodes))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.nodes

    def axis_coordinates(self, axis: int = 0) -> np.ndarray:
        """Node coordinates along one axis, centered: -L/2 + j*dx."""
        L, n = self.length[axis], self.nodes[axis]
        dx = L / n
        return -0.5 * L + dx * np.arange(n)

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_coordinates(a) for a in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def wavenumbers(self, axis: int = 0) -> np.ndarray:
        """Signed wavenumbers 2*pi*k/L along one axis, FFT ordering."""
        L, n = self.length[axis], self.nodes[axis]
        return 2.0 * np.pi * np.fft.fftfreq(n, d=L / n)

    def wavenumber_mesh(self) -> tuple[np.ndarray, ...]:
        """Per-axis wavenumber arrays broadcast to the grid shape."""
        ks = [self.wavenumbers(a) for a in range(self.dim)]
        return tuple(np.meshgrid(*ks, indexing="ij"))

    def wavenumber_magnitude(self) -> np.ndarray:
        mesh = self.wavenumber_mesh()
        return np.sqrt(sum(k * k for k in mesh))

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: keep integer modes |k| <= floor(N/3) per axis."""
        mask = np.ones(self.shape, dtype=bool)
        for a, n in enumerate(self.nodes):
            modes = np.fft.fftfreq(n, d=1.0 / n)  # integer mode numbers
            keep = np.abs(modes) <= n // 3
            shape = [1] * self.dim
            shape[a] = n
            mask &= keep.reshape(shape)
        return mask

    @property
    def cell_volume(self) -> float:
        out = 1.0
        for h in self.spacing:
            out *= h
        return out


class SpectralField:
    """Real field sampled on a periodic grid, with a Fourier-coefficient view.

    ``values`` is the physical-space array; ``hat`` returns the (cached)
    full complex DFT.  All arithmetic returns new fields; nothing mutates.
    """

    __slots__ = ("grid", "values", "_hat")

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(
                f"field shape {values.shape} does not match grid shape {grid.shape}"
            )
        self.grid = grid
        self.values = values
        self._hat = None

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable) -> "SpectralField":
        return cls(grid, np.asarray(fn(*grid.meshgrid()), dtype=float))

    @classmethod
    def from_hat(cls, grid: Grid, hat: np.ndarray) -> "SpectralField":
        return cls(grid, np.fft.ifftn(hat).real)

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape))

    @property
    def hat(self) -> np.ndarray:
        if self._hat is None:
            self._hat = np.fft.fftn(self.values)
        return self._hat

    def evaluate(self, points) -> np.ndarray:
        """Band-limited evaluation at arbitrary 1D coordinates.

        Uses the trigonometric interpolant of the samples; the real part is
        taken, which treats the Nyquist mode as a pure cosine.
        """
        if self.grid.dim != 1:
            raise NotImplementedError("off-grid evaluation only supported in 1D")
        points = np.atleast_1d(np.asarray(points, dtype=float))
        L = self.grid.length[0]
        n = self.grid.nodes[0]
        xi = self.grid.wavenumbers(0)
        out = np.empty(points.size)
        for start in range(0, points.size, 1024):  # cap the phase-matrix size
            block = points[start : start + 1024]
            phase = np.exp(1j * np.outer(block + 0.5 * L, xi))
            out[start : start + 1024] = (phase @ self.hat).real / n
        return out

    def same_grid(self, other: "SpectralField") -> bool:
        return self.grid == other.grid

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.values.copy())

    def __add__(self, other):
        if isinstance(other, SpectralField):
            if not self.same_grid(other):
                raise GridMismatchError("cannot add fields on different grids")
            return SpectralField(self.grid, self.values + other.values)
        return SpectralField(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SpectralField):
            if not self.same_grid(other):
                raise GridMismatchError("cannot subtract fields on different grids")
            return SpectralField(self.grid, self.values - other.values)
        return SpectralField(self.grid, self.values - other)

    def __mul__(self, other):
        if isinstance(other, SpectralField):
            if not self.same_grid(other):
                raise GridMismatchError("cannot multiply fields on different grids")
            return SpectralField(self.grid, self.values * other.values)
        return SpectralField(self.grid, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralField(self.grid, -self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class Multiplier:
    """Fourier multiplier with a real, even symbol of |xi|.

    ``symbol`` must accept an array of wavenumber magnitudes (all >= 0)
    and return finite values, with removable singularities such as
    tanh(H|xi|)/(H|xi|) at xi = 0 handled by explicit limits.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, xi_mag: np.ndarray) -> np.ndarray:
        return np.asarray(self.symbol(np.asarray(xi_mag, dtype=float)), dtype=float)


def identity_symbol() -> Multiplier:
    return Multiplier(lambda xi: np.ones_like(xi), "1")


def gravity_wave_symbol(H: float) -> Multiplier:
    """|xi| tanh(H |xi|): the flat-bottom surface-wave operator symbol."""
    return Multiplier(lambda xi: xi * np.tanh(H * xi), f"|xi| tanh({H} |xi|)")


def whitham_symbol(H: float) -> Multiplier:
    """sqrt(tanh(H|xi|)/(H|xi|)), with value 1 at xi = 0."""

    def sym(xi):
        mu = H * xi
        out = np.ones_like(mu)
        nz = mu != 0.0
        out[nz] = np.sqrt(np.tanh(mu[nz]) / mu[nz])
        return out

    return Multiplier(sym, f"sqrt(tanh({H} |xi|)/({H} |xi|))")


def power_symbol(exponent: float) -> Multiplier:
    def sym(xi):
        if exponent >= 0:
            return xi**exponent
        out = np.zeros_like(xi)
        nz = xi != 0.0
        out[nz] = xi[nz] ** exponent
        return out

    return Multiplier(sym, f"|xi|^{exponent}")


def apply_multiplier(f: SpectralField, m: Multiplier) -> SpectralField:
    """Return the field with coefficients m(|xi|) * fhat(xi).

    Raises
    ------
    MultiplierDomainError
        If the symbol is non-finite at some grid wavenumber; the message
        names the offending |xi|.
    """
    xi_mag = f.grid.wavenumber_magnitude()
    sym = m(xi_mag)
    bad = ~np.isfinite(sym)
    if np.any(bad):
        offending = float(xi_mag[bad].flat[0])
        raise MultiplierDomainError(
            f"symbol {m.label!r} is non-finite at |xi| = {offending!r}"
        )
    return SpectralField.from_hat(f.grid, sym * f.hat)


def dealias(f: SpectralField) -> SpectralField:
    """Zero all coefficients with integer mode |k| > floor(N/3) per axis."""
    return SpectralField.from_hat(f.grid, f.hat * f.grid.dealias_mask())


def derivative(f: SpectralField, axis: int = 0, order: int = 1) -> SpectralField:
    """Spectral derivative (i xi)^order along ``axis``.

    The Nyquist mode is zeroed for odd orders (real-output convention).
    Orders above 4 are outside the supported range.
    """
    if not 0 <= axis < f.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {f.grid.dim}")
    if not 1 <= order <= 4:
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    n = f.grid.nodes[axis]
    xi = f.grid.wavenumbers(axis)
    factor = (1j * xi) ** order
    if order % 2 == 1:
        factor[n // 2] = 0.0
    shape = [1] * f.grid.dim
    shape[axis] = n
    return SpectralField.from_hat(f.grid, factor.reshape(shape) * f.hat)

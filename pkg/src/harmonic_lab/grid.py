"""
Discretized function spaces on the torus and on R^d.

Torus grids live on [-pi, pi) with nodes t_j = -pi + 2*pi*j/N. Line grids live
on [-L, L)^d with nodes x_j = -L + j*h, h = 2L/N, and frequency nodes
xi_m = pi*m/L. Both spectra are stored in centred order, index m running over
[-N/2, N/2).

Measure conventions
-------------------
    * torus: normalized measure dt/2pi (discrete: mean over nodes)
    * line:  Lebesgue measure (discrete: h^d * sum over nodes)

The transform on L^p for 1 < p < 2 is defined by density in the continuum;
on a finite grid the DFT is already defined for every sample vector, so the
same routine serves every p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def _sign_parity(n: int) -> np.ndarray:
    """(-1)^m for m in [-N/2, N/2)."""
    m = np.arange(-n // 2, n // 2)
    return np.where(m % 2 == 0, 1.0, -1.0)


# ---------------------------------------------------------------------------
# Torus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusGrid:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or self.size < 4 or not _is_pow2(int(self.size)):
            raise ValueError(f"torus grid size must be a power of two >= 4, got {self.size!r}")

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.size

    @property
    def nodes(self) -> np.ndarray:
        return -np.pi + self.spacing * np.arange(self.size)

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(-self.size // 2, self.size // 2)


@dataclass(frozen=True, eq=False)
class TorusSignal:
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} samples, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, n: int) -> "TorusSignal":
        g = TorusGrid(n)
        return cls(g, np.asarray(func(g.nodes), dtype=complex))

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def __add__(self, other: "TorusSignal") -> "TorusSignal":
        _same_grid(self, other)
        return TorusSignal(self.grid, self.values + other.values)

    def __sub__(self, other: "TorusSignal") -> "TorusSignal":
        _same_grid(self, other)
        return TorusSignal(self.grid, self.values - other.values)

    def __mul__(self, c) -> "TorusSignal":
        if isinstance(c, TorusSignal):
            _same_grid(self, c)
            return TorusSignal(self.grid, self.values * c.values)
        return TorusSignal(self.grid, self.values * c)

    __rmul__ = __mul__

    def conj(self) -> "TorusSignal":
        return TorusSignal(self.grid, np.conj(self.values))

    def abs(self) -> "TorusSignal":
        return TorusSignal(self.grid, np.abs(self.values))

    def shift(self, k: int) -> "TorusSignal":
        """Translate by k grid steps: result(t) = f(t - k*h)."""
        return TorusSignal(self.grid, np.roll(self.values, k))


@dataclass(frozen=True, eq=False)
class SpectrumT:
    """Fourier coefficients c(n), n in [-N/2, N/2), stored in that order."""

    size: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coefficients)
        if c.shape != (self.size,):
            raise ValueError(f"expected {self.size} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(-self.size // 2, self.size // 2)

    def __getitem__(self, n: int) -> complex:
        if not -self.size // 2 <= n < self.size // 2:
            raise IndexError(f"frequency {n} outside [-{self.size // 2}, {self.size // 2})")
        return self.coefficients[n + self.size // 2]

    def with_multiplier(self, m: np.ndarray) -> "SpectrumT":
        return SpectrumT(self.size, self.coefficients * m)


def dft_analyze(f: TorusSignal) -> SpectrumT:
    """c(n) = (1/N) sum_j f(t_j) exp(-i n t_j) for n in [-N/2, N/2)."""
    n = f.grid.size
    c = np.fft.fftshift(np.fft.fft(f.values)) / n
    return SpectrumT(n, c * _sign_parity(n))


def dft_synthesize(c: SpectrumT) -> TorusSignal:
    """f(t_j) = sum_n c(n) exp(i n t_j)."""
    n = c.size
    v = np.fft.ifft(np.fft.ifftshift(c.coefficients * _sign_parity(n))) * n
    return TorusSignal(TorusGrid(n), v)


# ---------------------------------------------------------------------------
# Line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineGrid:
    size: int
    half_width: float
    dim: int = 1

    def __post_init__(self):
        if not _is_pow2(int(self.size)) or self.size < 4:
            raise ValueError(f"line grid size must be a power of two >= 4, got {self.size!r}")
        if not self.half_width > 0:
            raise ValueError("half-width L must be positive")
        if self.dim not in (1, 2):
            raise ValueError("only d = 1 or 2 is supported")

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / self.size

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.size)

    @property
    def freqs(self) -> np.ndarray:
        return np.pi / self.half_width * np.arange(-self.size // 2, self.size // 2)

    @property
    def dfreq(self) -> float:
        return np.pi / self.half_width

    @property
    def shape(self) -> tuple:
        return (self.size,) * self.dim

    @property
    def cell(self) -> float:
        return self.spacing ** self.dim

    def mesh(self) -> tuple:
        """Coordinate arrays, one per axis, broadcast to the grid shape."""
        x = self.nodes
        if self.dim == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    def freq_mesh(self) -> tuple:
        xi = self.freqs
        if self.dim == 1:
            return (xi,)
        return tuple(np.meshgrid(xi, xi, indexing="ij"))


@dataclass(frozen=True, eq=False)
class LineSignal:
    grid: LineGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != self.grid.shape:
            raise ValueError(f"expected shape {self.grid.shape}, got {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, grid: LineGrid) -> "LineSignal":
        return cls(grid, np.asarray(func(*grid.mesh()), dtype=complex))

    def __add__(self, other: "LineSignal") -> "LineSignal":
        _same_grid(self, other)
        return LineSignal(self.grid, self.values + other.values)

    def __sub__(self, other: "LineSignal") -> "LineSignal":
        _same_grid(self, other)
        return LineSignal(self.grid, self.values - other.values)

    def __mul__(self, c) -> "LineSignal":
        if isinstance(c, LineSignal):
            _same_grid(self, c)
            return LineSignal(self.grid, self.values * c.values)
        return LineSignal(self.grid, self.values * c)

    __rmul__ = __mul__

    def conj(self) -> "LineSignal":
        return LineSignal(self.grid, np.conj(self.values))

    def abs(self) -> "LineSignal":
        return LineSignal(self.grid, np.abs(self.values))

    def shift(self, k) -> "LineSignal":
        """Circular translation by k grid steps per axis."""
        k = (k,) * self.grid.dim if np.isscalar(k) else tuple(k)
        return LineSignal(self.grid, np.roll(self.values, k, axis=tuple(range(self.grid.dim))))


@dataclass(frozen=True, eq=False)
class SpectrumR:
    grid: LineGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != self.grid.shape:
            raise ValueError(f"expected shape {self.grid.shape}, got {v.shape}")
        object.__setattr__(self, "values", v)

    def with_multiplier(self, m: np.ndarray) -> "SpectrumR":
        return SpectrumR(self.grid, self.values * m)


def _parity_nd(grid: LineGrid) -> np.ndarray:
    s = _sign_parity(grid.size)
    if grid.dim == 1:
        return s
    return np.multiply.outer(s, s)


def dft_line(f: LineSignal) -> SpectrumR:
    """Riemann-sum transform  f^(xi_m) = h^d sum_j f(x_j) exp(-i xi_m . x_j)."""
    g = f.grid
    axes = tuple(range(g.dim))
    c = np.fft.fftshift(np.fft.fftn(f.values, axes=axes), axes=axes)
    return SpectrumR(g, c * _parity_nd(g) * g.cell)


def idft_line(c: SpectrumR) -> LineSignal:
    """Inverse with weight (1/2pi)^d (pi/L)^d = (2L)^-d."""
    g = c.grid
    axes = tuple(range(g.dim))
    v = np.fft.ifftn(np.fft.ifftshift(c.values * _parity_nd(g), axes=axes), axes=axes)
    v = v * g.size ** g.dim / (2 * g.half_width) ** g.dim
    return LineSignal(g, v)


def apply_multiplier(f: LineSignal, m: np.ndarray) -> LineSignal:
    return idft_line(dft_line(f).with_multiplier(m))


def apply_multiplier_torus(f: TorusSignal, m: np.ndarray) -> TorusSignal:
    return dft_synthesize(dft_analyze(f).with_multiplier(m))


# ---------------------------------------------------------------------------
# Norms, distribution function, layer cake
# ---------------------------------------------------------------------------

Signal = Union[TorusSignal, LineSignal]


def _weights(f: Signal) -> float:
    if isinstance(f, TorusSignal):
        return 1.0 / f.grid.size
    if isinstance(f, LineSignal):
        return f.grid.cell
    raise TypeError(f"expected TorusSignal or LineSignal, got {type(f).__name__}")


def lp_norm(f: Signal, p: float) -> float:
    if not (p >= 1):
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    a = np.abs(f.values).ravel()
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    w = _weights(f)
    if p == 1:
        return float(w * a.sum())
    top = a.max()
    if top == 0:
        return 0.0
    # scale first so powers neither overflow nor underflow
    a = a / top
    if p == 2:
        return float(top * np.sqrt(w * np.dot(a, a)))
    return float(top * (w * np.sum(a**p)) ** (1.0 / p))


def inner(f: Signal, g: Signal) -> complex:
    """<f, g> = integral of f * conj(g) under the domain's measure."""
    _same_grid(f, g)
    return complex(_weights(f) * np.vdot(g.values.ravel(), f.values.ravel()))


def distribution_function(f: Signal, lam: float) -> float:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return float(_weights(f) * np.count_nonzero(np.abs(f.values) > lam))


def default_lambda_grid(f: Signal, num: int = 4000, decades: float = 8.0) -> np.ndarray:
    """Log-spaced levels ending exactly at max|f|."""
    top = float(np.max(np.abs(f.values)))
    if top == 0:
        raise ValueError("signal is identically zero")
    return np.geomspace(top * 10.0 ** (-decades), top, num)


def layercake_lp(f: Signal, p: float, lambda_grid) -> float:
    """
    Integrate p*lam^(p-1) * mu{|f| > lam} over the supplied levels.

    Written in the variable u = lam^p so the weight becomes du; mu is sampled at
    the midpoint of each cell (the first cell runs from 0 to lambda_grid[0]).
    Exact whenever every jump of mu sits on a grid level.
    """
    lam = np.asarray(lambda_grid, dtype=float)
    if lam.size == 0:
        raise ValueError("empty lambda grid")
    if np.any(lam <= 0) or np.any(np.diff(lam) <= 0):
        raise ValueError("lambda grid must be positive and strictly increasing")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    edges = np.concatenate(([0.0], lam))
    u = edges ** p
    mids = ((u[:-1] + u[1:]) / 2) ** (1.0 / p)
    a = np.sort(np.abs(f.values).ravel())
    # mu(lam) = w * #{|f| > lam}
    counts = a.size - np.searchsorted(a, mids, side="right")
    return float(_weights(f) * np.sum(np.diff(u) * counts))


def _same_grid(f, g):
    if type(f) is not type(g) or f.grid != g.grid:
        raise ValueError("signals live on different grids")

"""
Uncertainty and interpolation inequalities: the Heisenberg product on the
line, the commutator estimate for position and momentum, the torus analogue,
the log-convexity of L^p norms, Young's convolution inequality and the
Marcinkiewicz constant.

Momentum moments use (1/2pi) integral |xi - b|^2 |f^(xi)|^2 d xi with the
grid transform; position moments use integral |x - a|^2 |f(x)|^2 dx.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .grid import (
    LineSignal,
    TorusSignal,
    dft_analyze,
    dft_line,
    lp_norm,
)
from .line import convolve_line, spectral_derivative
from .torus import convolve_torus


@dataclass(frozen=True)
class UncertaintyReport:
    alpha: complex
    beta: complex
    position_variance: float
    momentum_variance: float
    product: float
    lower_bound: float

    @property
    def ratio(self) -> float:
        return self.product / self.lower_bound

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("alpha", "beta"):
            d[k] = [d[k].real, d[k].imag]
        d["ratio"] = self.ratio
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _require_line_1d(f) -> None:
    if not isinstance(f, LineSignal) or f.grid.dim != 1:
        raise ValueError("expected a LineSignal with d = 1")


def _moment_tails(f: LineSignal, tail_tol: float):
    """Return (|f|^2, xi, |f^|^2) after checking both second-moment integrands at the grid edges."""
    g = f.grid
    dens = np.abs(f.values) ** 2
    mass = g.spacing * dens.sum()
    if mass == 0:
        raise ValueError("zero signal")
    x = g.nodes
    edge = (g.half_width**2) * max(dens[0], dens[-1]) / mass
    if edge > tail_tol:
        raise ValueError(
            f"position moment not resolved: |x|^2 |f|^2 / ||f||^2 = {edge:.3g} at |x| = L "
            f"(threshold {tail_tol:g}); widen the grid or the input has no finite moment"
        )
    spec = np.abs(dft_line(f).values) ** 2
    xi = g.freqs
    band = np.pi / g.spacing
    sedge = band**2 * max(spec[0], spec[-1]) / (2 * np.pi * mass)
    if sedge > tail_tol:
        raise ValueError(
            f"momentum moment not resolved: |xi|^2 |f^|^2 / (2pi ||f||^2) = {sedge:.3g} at |xi| = pi/h "
            f"(threshold {tail_tol:g}); refine the grid or the input has no finite moment"
        )
    return x, dens, xi, spec


def heisenberg_report(f: LineSignal, alpha: complex = 0, beta: complex = 0, tail_tol: float = 1e-10) -> UncertaintyReport:
    """Position and momentum variances about (alpha, beta) and the bound ||f||_2^4 / 4."""
    _require_line_1d(f)
    x, dens, xi, spec = _moment_tails(f, tail_tol)
    h, dxi = f.grid.spacing, f.grid.dfreq
    a, b = complex(alpha), complex(beta)
    pos = float(h * np.sum(np.abs(x - a) ** 2 * dens))
    mom = float(dxi * np.sum(np.abs(xi - b) ** 2 * spec) / (2 * np.pi))
    norm2 = float(h * dens.sum())
    return UncertaintyReport(a, b, pos, mom, pos * mom, norm2**2 / 4)


def optimal_shift(f: LineSignal, operator: str) -> complex:
    """<Tf, f> / ||f||^2 for T = x (position) or T = -i d/dx (momentum, via the spectrum)."""
    _require_line_1d(f)
    dens = np.abs(f.values) ** 2
    if not dens.any():
        raise ValueError("zero signal")
    if operator == "position":
        return complex(np.sum(f.grid.nodes * dens) / dens.sum())
    if operator == "momentum":
        spec = np.abs(dft_line(f).values) ** 2
        return complex(np.sum(f.grid.freqs * spec) / spec.sum())
    raise ValueError(f"operator must be 'position' or 'momentum', got {operator!r}")


def _l2(v: np.ndarray, h: float) -> float:
    return float(np.sqrt(h * np.sum(np.abs(v) ** 2)))


def _spread(tf: np.ndarray, f: np.ndarray, h: float) -> float:
    """min over a of ||Tf - a f||, attained at a = <Tf, f> / ||f||^2."""
    a = np.vdot(f, tf) / np.vdot(f, f)
    return _l2(tf - a * f, h)


def commutator_check(f: LineSignal, tail_tol: float = 1e-10) -> tuple[float, float]:
    """
    (|<[T, U] f, f>|, Delta_f(T*) Delta_f(U) + Delta_f(T) Delta_f(U*)) for
    T = x and U = -i d/dx (spectral). Both are self-adjoint, and [T, U] f = i f.
    """
    _require_line_1d(f)
    _moment_tails(f, tail_tol)
    g, h = f.grid, f.grid.spacing
    x = g.nodes
    u = lambda s: -1j * spectral_derivative(s).values  # noqa: E731
    tf = x * f.values
    uf = u(f)
    tuf = x * uf
    utf = u(LineSignal(g, tf))
    lhs = abs(h * np.vdot(f.values, tuf - utf))
    dt = _spread(tf, f.values, h)
    du = _spread(uf, f.values, h)
    return float(lhs), float(2 * dt * du)


def torus_uncertainty_residual(f: TorusSignal, m: int, alpha: complex = 0, beta: complex = 0) -> float:
    """
    RHS - LHS of

        (m^2 / 4) |mean(e^{imt} |f|^2)|^2
            <= mean(|e^{imt} - alpha|^2 |f|^2) * sum_n |n - beta|^2 |f^(n)|^2,

    with means over the normalized torus. Negative output means a violation.
    """
    n = f.grid.size
    if not float(m).is_integer() or abs(m) >= n // 2:
        raise ValueError(f"m must be an integer with |m| < N/2 = {n // 2}")
    t = f.t
    dens = np.abs(f.values) ** 2
    lhs = m * m / 4 * abs(np.mean(np.exp(1j * m * t) * dens)) ** 2
    pos = float(np.mean(np.abs(np.exp(1j * m * t) - alpha) ** 2 * dens))
    c = dft_analyze(f)
    mom = float(np.sum(np.abs(c.freqs - beta) ** 2 * np.abs(c.coefficients) ** 2))
    return float(pos * mom - lhs)


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------


def _interp_exponent(p0: float, p1: float, theta: float) -> float:
    inv = (1 - theta) / p0 + (theta / p1 if np.isfinite(p1) else 0.0)
    return 1 / inv


def lp_interpolation_residual(f, p0: float, p1: float, theta: float) -> float:
    """||f||_p0^(1-theta) ||f||_p1^theta - ||f||_p with 1/p = (1-theta)/p0 + theta/p1."""
    if not (1 <= p0 < p1):
        raise ValueError("need 1 <= p0 < p1 <= inf")
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    p = _interp_exponent(p0, p1, theta)
    return lp_norm(f, p0) ** (1 - theta) * lp_norm(f, p1) ** theta - lp_norm(f, p)


def young_residual(f, g, p: float, q: float, r: float, domain: str | None = None) -> float:
    """
    ||f||_p ||g||_q - ||f*g||_r with 1/p + 1/q = 1/r + 1.

    Torus convolution uses the normalized measure and is exact on the grid;
    line convolution is the zero-padded Riemann sum.
    """
    inv = lambda s: 0.0 if np.isinf(s) else 1.0 / s  # noqa: E731
    for s in (p, q, r):
        if not s >= 1:
            raise ValueError("exponents must lie in [1, inf]")
    if not math.isclose(inv(p) + inv(q), inv(r) + 1, abs_tol=1e-12):
        raise ValueError(f"exponents violate 1/p + 1/q = 1/r + 1: p={p}, q={q}, r={r}")
    if domain is None:
        domain = "torus" if isinstance(f, TorusSignal) else "line"
    if domain == "torus":
        conv = convolve_torus(f, g)
    elif domain == "line":
        conv = convolve_line(f, g)
    else:
        raise ValueError(f"domain must be 'torus' or 'line', got {domain!r}")
    return lp_norm(f, p) * lp_norm(g, q) - lp_norm(conv, r)


def marcinkiewicz_ceiling(p0: float, p1: float, p: float, a0: float, a1: float) -> float:
    """
    2 p^(1/p) (1/(p - p0) + 1/(p1 - p))^(1/p) A0^(1-theta) A1^theta,
    with 1/p = (1-theta)/p0 + theta/p1.

    p1 = inf is the limit: the second fraction vanishes and theta = 1 - p0/p,
    which is also the constant of the direct argument for that endpoint.
    """
    if not (1 <= p0 < p < p1):
        raise ValueError("need 1 <= p0 < p < p1 <= inf")
    if not (a0 > 0 and a1 > 0):
        raise ValueError("operator constants must be positive")
    if np.isinf(p1):
        theta = 1 - p0 / p
        s = 1 / (p - p0)
    else:
        theta = (1 / p0 - 1 / p) / (1 / p0 - 1 / p1)
        s = 1 / (p - p0) + 1 / (p1 - p)
    if not 0 < theta < 1:
        raise ValueError("theta must lie strictly inside (0, 1)")
    return float(2 * p ** (1 / p) * s ** (1 / p) * a0 ** (1 - theta) * a1**theta)

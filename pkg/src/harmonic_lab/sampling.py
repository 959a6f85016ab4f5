"""
Sampling and periodization: sinc reconstruction of band-limited signals,
the Paley-Wiener projection, growth of band-limited functions off the real
axis, periodization, Poisson summation, the theta functional equation and the
cosecant-squared series.

Here sinc(x) = sin(x)/x. A signal with spectrum in [-w, w]^d is sampled on
the lattice (pi/w) Z^d.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .catalog import closed_form_entry
from .grid import LineGrid, LineSignal, TorusGrid, TorusSignal, apply_multiplier


def sinc(x) -> np.ndarray:
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


# ---------------------------------------------------------------------------
# sampling and reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Samples f(pi n / w) for |n_j| <= n_max, stored as an array indexed by n + n_max."""

    omega: float
    n_max: int
    values: np.ndarray

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        v = np.array(self.values, dtype=complex, copy=True)
        if v.ndim not in (1, 2) or any(s != 2 * self.n_max + 1 for s in v.shape):
            raise ValueError(f"samples must have shape (2 n_max + 1,)^d, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def spacing(self) -> float:
        return np.pi / self.omega

    def __getitem__(self, n) -> complex:
        n = (n,) if np.isscalar(n) else tuple(n)
        if any(abs(k) > self.n_max for k in n):
            return 0j
        return complex(self.values[tuple(k + self.n_max for k in n)])

    def to_json(self) -> str:
        rows = []
        for idx in np.ndindex(self.values.shape):
            v = self.values[idx]
            rows.append([[int(i) - self.n_max for i in idx], float(v.real), float(v.imag)])
        return json.dumps({"omega": self.omega, "n_max": self.n_max, "samples": rows})

    @classmethod
    def from_json(cls, text: str) -> "SampleSet":
        doc = json.loads(text)
        n_max = int(doc["n_max"])
        rows = doc["samples"]
        d = len(rows[0][0]) if rows else 1
        v = np.zeros((2 * n_max + 1,) * d, dtype=complex)
        for n, re, im in rows:
            v[tuple(k + n_max for k in n)] = re + 1j * im
        return cls(float(doc["omega"]), n_max, v)


def sample(f, omega: float, n_max: int, dim: int = 1) -> SampleSet:
    """
    Evaluate f at the lattice points pi n / w, |n_j| <= n_max.

    ``f`` is a callable of d coordinate arrays, a catalog name, or a
    LineSignal whose grid contains every lattice point as a node.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    n = np.arange(-n_max, n_max + 1)
    pts = np.pi / omega * n
    if isinstance(f, LineSignal):
        g = f.grid
        pos = (pts + g.half_width) / g.spacing
        idx = np.rint(pos).astype(int)
        if np.any(np.abs(pos - idx) > 1e-9) or np.any(idx < 0) or np.any(idx >= g.size):
            raise ValueError("sample points must be grid nodes inside [-L, L); adjust omega, n_max or the grid")
        vals = f.values[np.ix_(*([idx] * g.dim))]
        return SampleSet(omega, n_max, vals)
    if isinstance(f, str):
        f = closed_form_entry(f, dim).spatial
    mesh = np.meshgrid(*([pts] * dim), indexing="ij") if dim == 2 else (pts,)
    return SampleSet(omega, n_max, np.asarray(f(*mesh), dtype=complex))


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """Truncated sinc series on the requested points, plus the omitted l^2 mass when known."""

    points: tuple
    values: np.ndarray
    omitted_l2: float | None = None

    @property
    def sup_bound(self) -> float | None:
        """sum_n sinc^2(w x - pi n) = 1, so the omitted l^2 mass bounds the sup error."""
        return self.omitted_l2


def sinc_reconstruct(s: SampleSet, x, f: Callable | None = None, tail_window: int | None = None) -> Reconstruction:
    """
    f(x) ~ sum_{|n_j| <= n_max} f(pi n / w) prod_j sinc(w x_j - pi n_j).

    ``x`` is a 1-d array of points (d = 1) or a LineGrid. When the exact
    function ``f`` is supplied, the l^2 mass of the samples omitted in the
    window n_max < max|n_j| <= tail_window (default 64 n_max + 64) is
    recorded; it bounds both the L^2 error (times (pi/w)^(d/2)) and the sup
    error.
    """
    if isinstance(x, LineGrid):
        if x.dim != s.dim:
            raise ValueError("grid and sample dimensions differ")
        axes = [x.nodes] * s.dim
    else:
        if s.dim != 1:
            raise ValueError("pass a LineGrid for d = 2 reconstructions")
        axes = [np.atleast_1d(np.asarray(x, dtype=float))]
    n = s.indices
    mats = [sinc(s.omega * a[:, None] - np.pi * n[None, :]) for a in axes]
    if s.dim == 1:
        vals = mats[0] @ s.values
    else:
        vals = mats[0] @ s.values @ mats[1].T
    omitted = None
    if f is not None:
        big = tail_window or 64 * s.n_max + 64
        wide = sample(f, s.omega, big, s.dim).values
        mask = np.ones(wide.shape, dtype=bool)
        inner_sl = tuple(slice(big - s.n_max, big + s.n_max + 1) for _ in range(s.dim))
        mask[inner_sl] = False
        omitted = float(np.sqrt(np.sum(np.abs(wide[mask]) ** 2)))
    return Reconstruction(tuple(axes), vals, omitted)


def five_sinc_signal(x) -> np.ndarray:
    """-sinc(2pi(x+1)) + 2 sinc(2pi(x+1/2)) + 3 sinc(2pi x) + 2 sinc(2pi(x-1/2)) + sinc(2pi(x-1))."""
    x = np.asarray(x, dtype=float)
    coef = {-1.0: -1.0, -0.5: 2.0, 0.0: 3.0, 0.5: 2.0, 1.0: 1.0}
    return sum(c * sinc(2 * np.pi * (x - a)) for a, c in coef.items())


def pw_project(f: LineSignal, omega: float) -> LineSignal:
    """Keep the spectrum on [-w, w]^d."""
    band = np.pi / f.grid.spacing
    if not 0 < omega <= band:
        raise ValueError(f"omega must lie in (0, {band:.6g}] (the grid band pi/h)")
    tol = 1e-9 * f.grid.dfreq
    m = np.ones(f.grid.shape)
    for xi in f.grid.freq_mesh():
        m = m * (np.abs(xi) <= omega + tol)
    return apply_multiplier(f, m)


@dataclass(frozen=True)
class GrowthReport:
    y: float
    value: float
    integral: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.value / self.bound


def bandlimited_growth(name: str, y: float, const: float = 1.0) -> GrowthReport:
    """
    |D(iy)| for the Dirichlet function D(x) = sin(x)/(pi x), against C e^{|y|} / sqrt|y|.

    ``value`` is the closed form (e^y - e^-y)/(2 pi y); ``integral`` is the
    same number from (1/2pi) integral_{-1}^{1} e^{-xi y} d xi by Gauss-Legendre.
    """
    if name != "dirichlet_fn":
        raise ValueError("only 'dirichlet_fn' is available for the growth check")
    if y == 0:
        raise ValueError("y = 0: the value there is the limit 1/pi")
    value = abs(math.sinh(y) / (math.pi * y))
    xg, wg = np.polynomial.legendre.leggauss(64)
    integral = abs(float(np.sum(wg * np.exp(-xg * y))) / (2 * math.pi))
    bound = const * math.exp(abs(y)) / math.sqrt(abs(y))
    return GrowthReport(y, value, integral, bound)


# ---------------------------------------------------------------------------
# periodization
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PeriodizationResult:
    signal: TorusSignal
    wraps: int
    residual: float
    tail_corrected: bool = False


def _shell(f: Callable, t: np.ndarray, k: int) -> np.ndarray:
    return np.asarray(f(t + 2 * np.pi * k), dtype=complex) + np.asarray(f(t - 2 * np.pi * k), dtype=complex)


def periodize(
    f,
    n: int = 256,
    wrap_tol: float = 1e-12,
    max_wraps: int = 4096,
    tail_correction: bool = False,
) -> PeriodizationResult:
    """
    Pe(f)(t) = 2 pi sum_k f(t + 2 pi k) on the torus grid of size n (d = 1).

    For a callable (or catalog name) shells k = +-1, +-2, ... are added until
    the sup of the newest shell (times 2 pi) drops below ``wrap_tol``. With
    ``tail_correction`` a slowly decaying f may stop at ``max_wraps``: the
    remainder beyond |k| = K is continued by a power law C u^-p fitted to the
    shells at K/2 and K. The reported residual is then the change in the
    corrected sum between K/2 and K shells.

    For a LineSignal on [-P pi, P pi) with P a power of two, the grid is
    folded period by period (N/P nodes per period) and ``wraps`` = P.
    """
    if isinstance(f, LineSignal):
        return _periodize_grid(f)
    if isinstance(f, str):
        f = closed_form_entry(f, 1).spatial
    t = TorusGrid(n).nodes
    acc = np.asarray(f(t), dtype=complex).copy()
    k = 0
    last = np.inf
    half_sum = None
    while k < max_wraps:
        k += 1
        sh = _shell(f, t, k)
        acc += sh
        last = 2 * np.pi * float(np.max(np.abs(sh)))
        if k == max_wraps // 2:
            half_sum = acc.copy()
        if last < wrap_tol:
            return PeriodizationResult(TorusSignal(TorusGrid(n), 2 * np.pi * acc), k, last)
    if not tail_correction:
        raise ValueError(
            f"shell sum not below wrap_tol = {wrap_tol:g} after {max_wraps} wraps "
            f"(last shell {last:.3g}); raise max_wraps or enable tail_correction"
        )
    full = acc + _tail(f, t, max_wraps)
    half = half_sum + _tail(f, t, max_wraps // 2)
    resid = 2 * np.pi * float(np.max(np.abs(full - half)))
    return PeriodizationResult(TorusSignal(TorusGrid(n), 2 * np.pi * full), max_wraps, resid, True)


def _tail(f: Callable, t: np.ndarray, k: int) -> np.ndarray:
    """Power-law continuation of both shell tails past |k| = K, node by node."""
    out = np.zeros(t.size)
    for i, ti in enumerate(t):
        for step in (2 * np.pi, -2 * np.pi):
            g1 = float(np.real(f(np.array([ti + step * (k // 2)]))[0]))
            g2 = float(np.real(f(np.array([ti + step * k]))[0]))
            if g1 * g2 > 0:
                out[i] += _power_tail(f, ti, step, k)
    return out


def _periodize_grid(f: LineSignal) -> PeriodizationResult:
    g = f.grid
    if g.dim != 1:
        raise ValueError("grid periodization is implemented for d = 1")
    p = g.half_width / np.pi
    pr = int(round(p))
    if abs(p - pr) > 1e-12 or pr < 1 or pr & (pr - 1):
        raise ValueError("grid periodization needs L = P pi with P a power of two")
    m = g.size // pr
    if m < 4:
        raise ValueError("too few nodes per period")
    folded = f.values.reshape(pr, m).sum(axis=0)
    # node -P pi + j h; the torus node -pi sits at offset m/2 when P is even
    if pr % 2 == 0:
        folded = np.roll(folded, -m // 2)
    return PeriodizationResult(TorusSignal(TorusGrid(m), 2 * np.pi * folded), pr, 0.0)


def poisson_kernel_line(omega: float) -> Callable:
    """P_w(x) = (1/pi) w^-1 / (x^2 + w^-2)."""
    return lambda x: (1 / np.pi) / omega / (np.asarray(x, dtype=float) ** 2 + omega**-2)


def gauss_kernel_line(omega: float) -> Callable:
    return lambda x: omega / math.sqrt(2 * math.pi) * np.exp(-((omega * np.asarray(x, dtype=float)) ** 2) / 2)


# ---------------------------------------------------------------------------
# Poisson summation, theta, cosecant series
# ---------------------------------------------------------------------------

# functions meeting the decay hypotheses: |f(x)| <= C (1 + |x|)^-(1+e) and
# |f^(xi)| <= C (1 + |xi|)^-(1+e)
POISSON_QUALIFYING = ("exp_abs", "fejer_fn", "gauss_fn", "gaussian", "poisson_fn")


def _lattice_sum(fn: Callable, x: float, step: float, tol: float, max_terms: int = 10**6) -> float:
    """
    sum_k fn(x + step k) over all integers k.

    Terms are added in doubling chunks until both newest terms fall below
    ``tol``. If ``max_terms`` is reached first, each one-signed side is
    continued by fitting C u^-p (u = |x/step + k|) to the terms at K/2 and K
    and integrating it from K + 1/2; an oscillating side is left as is.
    """
    terms = [float(np.real(fn(np.array([x]))[0]))]
    k = 0
    chunk = 256
    while k < max_terms:
        ks = np.arange(k + 1, k + chunk + 1)
        a = np.real(fn(x + step * ks))
        b = np.real(fn(x - step * ks))
        terms.extend(a.tolist())
        terms.extend(b.tolist())
        k += chunk
        if max(abs(a[-1]), abs(b[-1])) < tol:
            return math.fsum(terms)
        chunk = min(2 * chunk, 65536)
    tail = 0.0
    for sign, side in ((1, a), (-1, b)):
        if np.all(side > 0) or np.all(side < 0):
            tail += _power_tail(fn, x, sign * step, k)
    return math.fsum(terms) + tail


def _power_tail(fn: Callable, x: float, step: float, k: int) -> float:
    u1, u2 = abs(x / step + k // 2), abs(x / step + k)
    g1 = float(np.real(fn(np.array([x + step * (k // 2)]))[0]))
    g2 = float(np.real(fn(np.array([x + step * k]))[0]))
    p = math.log(g1 / g2) / math.log(u2 / u1)
    if not p > 1:
        raise ValueError("lattice sum tail decays too slowly to continue")
    return g2 * u2**p * (u2 + 0.5) ** (1 - p) / (p - 1)


def poisson_summation_residual(name: str, x: float, tol: float = 1e-18) -> float:
    """|2 pi sum_n f(x + 2 pi n) - sum_j f^(j) e^{ijx}| for a qualifying catalog function."""
    if name not in POISSON_QUALIFYING:
        raise ValueError(
            f"{name!r} does not meet the decay hypotheses; qualifying functions: {', '.join(POISSON_QUALIFYING)}"
        )
    e = closed_form_entry(name, 1)
    lhs = 2 * np.pi * _lattice_sum(e.spatial, x, 2 * np.pi, tol)
    # sum_j f^(j) e^{ijx}, real part since every catalog entry is even
    rhs = _lattice_sum(lambda j: np.real(e.spectral(j) * np.exp(1j * j * x)), 0.0, 1.0, tol)
    return abs(lhs - rhs)


def poisson_kernel_periodization_error(omega: float, n: int = 256) -> float:
    """max |Pe(P_w) - P_r| on the torus grid, r = e^{-1/w}."""
    res = periodize(poisson_kernel_line(omega), n, wrap_tol=1e-13, max_wraps=2048, tail_correction=True)
    r = math.exp(-1 / omega)
    t = res.signal.t
    want = (1 - r * r) / (1 - 2 * r * np.cos(t) + r * r)
    return float(np.max(np.abs(res.signal.values - want)))


def theta(s: float, max_terms: int = 10**7) -> float:
    """theta(s) = sum_n e^{-n^2 pi s}, summed directly until terms drop below 1e-18."""
    if not s > 0:
        raise ValueError("theta needs s > 0")
    # last n with e^{-n^2 pi s} >= 1e-18
    top = int(math.ceil(math.sqrt(math.log(1e18) / (math.pi * s))))
    if top > max_terms:
        raise ValueError(f"theta({s:g}) needs {top} terms, above the guard of {max_terms}")
    n = np.arange(1, top + 1, dtype=float)
    return math.fsum([1.0] + (2 * np.exp(-(n**2) * math.pi * s)).tolist())


def theta_equation_residual(s: float) -> float:
    return abs(theta(s) - theta(1 / s) / math.sqrt(s))


@dataclass(frozen=True)
class CosecantResult:
    partial: float
    target: float
    tail_bound: float

    @property
    def error(self) -> float:
        return abs(self.target - self.partial)


def cosecant_series(x: float, n_max: int) -> CosecantResult:
    """sum_{|n| <= n_max} 1/(x + n)^2 against pi^2 / sin^2(pi x); tail below 2/n_max."""
    if abs(x - round(x)) == 0:
        raise ValueError("x must not be an integer")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    n = np.arange(-n_max, n_max + 1, dtype=float)
    partial = math.fsum((1.0 / (x + n) ** 2).tolist())
    target = math.pi**2 / math.sin(math.pi * x) ** 2
    return CosecantResult(partial, target, 2.0 / n_max)

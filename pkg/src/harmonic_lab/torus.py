"""
Fourier analysis on the torus: summability kernels and means, convolution,
the Wiener algebra of absolutely summable coefficients, coefficient decay,
pointwise experiments, and the conjugate-function (Hilbert) transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import (
    SpectrumT,
    TorusGrid,
    TorusSignal,
    _same_grid,
    apply_multiplier_torus,
    dft_analyze,
    dft_synthesize,
    inner,
    lp_norm,
)

KERNEL_KINDS = ("dirichlet", "fejer", "poisson", "gauss")
_SMALL_T = 1e-8


@dataclass(frozen=True)
class TorusKernelSpec:
    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KERNEL_KINDS}")
        p = self.param
        if self.kind in ("dirichlet", "fejer"):
            if int(p) != p or p < 0:
                raise ValueError(f"{self.kind} kernel needs an integer n >= 0, got {p}")
        elif self.kind == "poisson":
            if not 0 < p < 1:
                raise ValueError(f"poisson kernel needs 0 < r < 1, got {p}")
        elif not p > 0:
            raise ValueError(f"gauss kernel needs s > 0, got {p}")


@dataclass(frozen=True)
class KernelAxiomReport:
    s1: complex
    s2: float
    s3: dict = field(default_factory=dict)
    s4: dict = field(default_factory=dict)


def _gauss_cutoff(s: float) -> int:
    # smallest j with exp(-j^2 s) < 1e-16
    return int(math.ceil(math.sqrt(-math.log(1e-16) / s)))


def kernel_eval(spec: TorusKernelSpec, t) -> np.ndarray:
    """Closed forms of the four kernels; limits at the removable singularity."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < _SMALL_T
    half = np.where(small, 1.0, np.sin(t / 2))
    if spec.kind == "dirichlet":
        n = int(spec.param)
        return np.where(small, 2 * n + 1, np.sin((n + 0.5) * t) / half)
    if spec.kind == "fejer":
        n = int(spec.param)
        return np.where(small, n + 1, (np.sin((n + 1) * t / 2) / half) ** 2 / (n + 1))
    if spec.kind == "poisson":
        r = spec.param
        return (1 - r * r) / (1 - 2 * r * np.cos(t) + r * r)
    s = spec.param
    out = np.zeros_like(t)
    for n in range(-8, 9):
        out = out + np.exp(-((t + 2 * np.pi * n) ** 2) / (4 * s))
    return 2 * np.pi / math.sqrt(4 * math.pi * s) * out


def kernel_multiplier(spec: TorusKernelSpec, freqs) -> np.ndarray:
    """Fourier coefficients of the kernel at the given integer frequencies."""
    j = np.abs(np.asarray(freqs))
    if spec.kind == "dirichlet":
        return (j <= spec.param).astype(float)
    if spec.kind == "fejer":
        return np.maximum(1 - j / (spec.param + 1), 0.0)
    if spec.kind == "poisson":
        return spec.param ** j.astype(float)
    return np.exp(-(j.astype(float) ** 2) * spec.param)


def kernel_series(spec: TorusKernelSpec, t) -> np.ndarray:
    """The same kernels summed from their Fourier series, truncated below 1e-16."""
    t = np.asarray(t, dtype=float)
    if spec.kind in ("dirichlet", "fejer"):
        top = int(spec.param)
    elif spec.kind == "poisson":
        top = int(math.ceil(math.log(1e-16) / math.log(spec.param)))
    else:
        top = _gauss_cutoff(spec.param)
    j = np.arange(1, top + 1)
    w = kernel_multiplier(spec, j)
    return 1.0 + 2.0 * np.cos(np.multiply.outer(t, j)) @ w


def kernel_signal(spec: TorusKernelSpec, n: int) -> TorusSignal:
    g = TorusGrid(n)
    return TorusSignal(g, kernel_eval(spec, g.nodes))


def _axiom_points(spec: TorusKernelSpec) -> int:
    if spec.kind in ("dirichlet", "fejer"):
        want = 64 * (int(spec.param) + 1)
    elif spec.kind == "poisson":
        want = int(64 / (1 - spec.param))
    else:
        want = int(64 / math.sqrt(spec.param))
    return 1 << max(12, int(math.ceil(math.log2(want))))


def kernel_axioms(spec: TorusKernelSpec, deltas=(), n_points: int | None = None) -> KernelAxiomReport:
    """Mean value, L^1 norm, tail mass and tail sup, by N-point quadrature."""
    n = n_points or _axiom_points(spec)
    t = TorusGrid(n).nodes
    k = kernel_eval(spec, t)
    a = np.abs(k)
    s3, s4 = {}, {}
    for d in deltas:
        if not 0 < d < np.pi:
            raise ValueError(f"delta must lie in (0, pi), got {d}")
        tail = np.abs(t) > d
        s3[d] = float(a[tail].sum() / n)
        s4[d] = float(a[tail].max())
    return KernelAxiomReport(complex(k.mean()), float(a.mean()), s3, s4)


def convolve_torus(f: TorusSignal, g: TorusSignal) -> TorusSignal:
    """(f*g)(t) = (1/2pi) integral f(t - s) g(s) ds, computed coefficient-wise."""
    _same_grid(f, g)
    cf, cg = dft_analyze(f), dft_analyze(g)
    return dft_synthesize(cf.with_multiplier(cg.coefficients))


# ---------------------------------------------------------------------------
# summability means
# ---------------------------------------------------------------------------

METHODS = ("partial", "cesaro", "abel", "gauss")


def mean_multiplier(method: str, param: float, freqs: np.ndarray) -> np.ndarray:
    j = np.abs(freqs)
    if method == "partial":
        return (j <= param).astype(float)
    if method == "cesaro":
        return np.maximum(1 - j / (param + 1), 0.0)
    if method == "abel":
        if not 0 <= param < 1:
            raise ValueError(f"abel mean needs 0 <= r < 1, got {param}")
        return float(param) ** j.astype(float)
    if method == "gauss":
        if not param > 0:
            raise ValueError(f"gauss mean needs s > 0, got {param}")
        return np.exp(-(j.astype(float) ** 2) * param)
    raise ValueError(f"unknown summability method {method!r}; expected one of {METHODS}")


def summability_mean(method: str, param: float, f: TorusSignal) -> TorusSignal:
    if method in ("partial", "cesaro"):
        if int(param) != param or param < 0:
            raise ValueError(f"{method} needs an integer n >= 0, got {param}")
        if param >= f.grid.size // 2:
            raise ValueError(f"{method}({int(param)}) needs n < N/2 = {f.grid.size // 2}")
    return apply_multiplier_torus(f, mean_multiplier(method, param, f.grid.freqs))


def partial_sum(f: TorusSignal, n: int) -> TorusSignal:
    return summability_mean("partial", n, f)


def convergence_experiment(method: str, f: TorusSignal, schedule, p: float = np.inf) -> np.ndarray:
    """Rows (param, ||mean - f||_p)."""
    rows = []
    for q in schedule:
        err = summability_mean(method, q, f) - f
        rows.append((float(q), lp_norm(err, p)))
    return np.array(rows)


def loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def decay_exponent(f: TorusSignal) -> float:
    """
    Fitted exponent of coefficient decay |f^(n)| ~ |n|^e.

    Uses the max of |f^(n)| over each dyadic block 2^k <= |n| < 2^(k+1), drops
    the k = 0 block, the two top blocks, and blocks at rounding level (below
    1e-12 of the peak coefficient), and fits log(max) against log 2^k.
    """
    n = f.grid.size
    if n < 256:
        raise ValueError("decay_exponent needs N >= 256")
    c = dft_analyze(f)
    a = np.abs(c.coefficients)
    if not np.any(a > 0):
        raise ValueError("spectrum is identically zero")
    freqs = np.abs(c.freqs)
    top = int(math.log2(n // 2))
    ks, ms = [], []
    for k in range(1, top - 2 + 1):
        block = (freqs >= 2**k) & (freqs < 2 ** (k + 1))
        m = a[block].max()
        if m > 1e-12 * a.max():
            ks.append(2.0**k)
            ms.append(m)
    if len(ks) < 2:
        raise ValueError("not enough nonzero dyadic blocks to fit a slope")
    return loglog_slope(ks, ms)


def dini_integral(f: TorusSignal, t0: float, eps: float) -> float:
    """
    Trapezoid value of  integral_{eps<|tau|<pi} |f(t0 - tau) - f(t0)| / |tau| dtau.

    t0 is snapped to the nearest node; the lower limit is rounded up to a node.
    """
    n = f.grid.size
    h = f.grid.spacing
    if not h <= eps < np.pi:
        raise ValueError(f"eps must lie in [h, pi) with h = {h:.3g}")
    j0 = int(round((t0 + np.pi) / h)) % n
    m = int(math.ceil(eps / h - 1e-9))
    k = np.arange(m, n // 2 + 1)
    w = np.ones(k.size)
    w[0] = w[-1] = 0.5
    f0 = f.values[j0]
    left = np.abs(f.values[(j0 - k) % n] - f0)
    right = np.abs(f.values[(j0 + k) % n] - f0)
    return float(h * np.sum(w * (left + right) / (k * h)))


def coefficient_by_difference(f: TorusSignal, n: int) -> complex:
    """f^(n) = (1/4pi) integral [f(t) - f(t - pi/n)] e^{-int} dt, for n | N/2."""
    size = f.grid.size
    if n == 0 or (size // 2) % abs(n):
        raise ValueError(f"pi/n must be grid aligned; need n dividing N/2 = {size // 2}")
    shift = size // (2 * abs(n))
    diff = f.values - np.roll(f.values, shift if n > 0 else -shift)
    return complex(np.mean(diff * np.exp(-1j * n * f.grid.nodes)) / 2)


# ---------------------------------------------------------------------------
# Wiener algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoeffSequence:
    """Finitely supported a(n), stored as a(start), a(start+1), ..."""

    start: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_dict(cls, d: dict) -> "CoeffSequence":
        if not d:
            return cls(0, np.zeros(0))
        lo, hi = min(d), max(d)
        v = np.zeros(hi - lo + 1, dtype=complex)
        for k, x in d.items():
            v[k - lo] = x
        return cls(lo, v)

    @classmethod
    def from_spectrum(cls, c: SpectrumT) -> "CoeffSequence":
        return cls(-c.size // 2, c.coefficients)

    def __getitem__(self, n: int) -> complex:
        i = n - self.start
        return complex(self.values[i]) if 0 <= i < self.values.size else 0j

    @property
    def indices(self) -> np.ndarray:
        return self.start + np.arange(self.values.size)

    def l1(self) -> float:
        return float(np.abs(self.values).sum())

    def to_spectrum(self, size: int) -> SpectrumT:
        """Restrict to [-size/2, size/2); entries outside must vanish."""
        lo, hi = -size // 2, size // 2
        outside = (self.indices < lo) | (self.indices >= hi)
        if np.any(self.values[outside] != 0):
            raise ValueError(f"sequence has nonzero entries outside [{lo}, {hi})")
        out = np.array([self[n] for n in range(lo, hi)])
        return SpectrumT(size, out)


def seq_convolve(a: CoeffSequence, b: CoeffSequence) -> CoeffSequence:
    """(a*b)(n) = sum_m a(m) b(n-m), exact."""
    if a.values.size == 0 or b.values.size == 0:
        return CoeffSequence(0, np.zeros(0))
    return CoeffSequence(a.start + b.start, np.convolve(a.values, b.values))


# ---------------------------------------------------------------------------
# conjugate function
# ---------------------------------------------------------------------------


def hilbert_multiplier_torus(n: int) -> np.ndarray:
    return -1j * np.sign(TorusGrid(n).freqs)


def hilbert_torus(f: TorusSignal) -> TorusSignal:
    """Multiplier -i sign(n) with sign(0) = 0 on every bin, Nyquist included."""
    return apply_multiplier_torus(f, hilbert_multiplier_torus(f.grid.size))


def _central_derivative_weights(q: int) -> np.ndarray:
    """Weights w_1..w_q of the order-2q centred first-derivative stencil."""
    k = np.arange(1, q + 1)
    w = np.empty(q)
    for i, kk in enumerate(k):
        w[i] = (-1) ** (kk + 1) * 2 * math.factorial(q) ** 2 / (kk * math.factorial(q - kk) * math.factorial(q + kk))
    return w / 2  # derivative = sum_k w_k (f(x+kh) - f(x-kh)) / h


def central_derivative(values: np.ndarray, h: float, q: int = 8, axis: int = 0) -> np.ndarray:
    """Order-2q centred finite difference of periodic samples along one axis."""
    w = _central_derivative_weights(q)
    out = np.zeros_like(values)
    for k, wk in enumerate(w, start=1):
        out = out + wk * (np.roll(values, -k, axis=axis) - np.roll(values, k, axis=axis))
    return out / h


def hilbert_torus_pv(f: TorusSignal, eps: float, near_field: bool = True, fd_order: int = 16) -> TorusSignal:
    """
    Principal-value quadrature (1/2pi) integral_{eps<|tau|<pi} f(t-tau) cot(tau/2) dtau.

    The truncated integral is summed by the trapezoid rule over grid shifts,
    written in symmetric-difference form [f(t-tau) - f(t+tau)] cot(tau/2) on
    (eps, pi). With ``near_field`` the excluded window (0, eps) is filled by the
    same rule, whose tau = 0 endpoint value -4 f'(t) comes from a centred finite
    difference of order ``fd_order``. Without it the raw truncated integral is
    returned, which differs from the limit by about (2 eps / pi) f'(t).
    """
    n = f.grid.size
    h = f.grid.spacing
    m = eps / h
    if abs(m - round(m)) > 1e-9 or round(m) < 1:
        raise ValueError(f"eps must be a positive multiple of the grid spacing {h:.6g}")
    m = int(round(m))
    if m >= n // 2:
        raise ValueError("eps must be smaller than pi")
    v = f.values
    acc = np.zeros(n, dtype=complex)
    first = 1 if near_field else m
    for k in range(first, n // 2):
        w = 0.5 if (k == m and not near_field) else 1.0
        acc += w * (np.roll(v, k) - np.roll(v, -k)) / math.tan(k * h / 2)
    if near_field:
        fprime = central_derivative(v, h, q=fd_order // 2)
        acc += 0.5 * (-4.0 * fprime)
    return TorusSignal(f.grid, acc * h / (2 * np.pi))


def riesz_projection_torus(f: TorusSignal) -> TorusSignal:
    """Keep the coefficients with n >= 0."""
    return apply_multiplier_torus(f, (f.grid.freqs >= 0).astype(float))


def modulate(f: TorusSignal, m: int) -> TorusSignal:
    return TorusSignal(f.grid, f.values * np.exp(1j * m * f.grid.nodes))


def partial_sum_via_projection(f: TorusSignal, m: int) -> TorusSignal:
    """e^{-imt} P(e^{imt} f) - e^{i(m+1)t} P(e^{-i(m+1)t} f)."""
    a = modulate(riesz_projection_torus(modulate(f, m)), -m)
    b = modulate(riesz_projection_torus(modulate(f, -(m + 1))), m + 1)
    return a - b


# ---------------------------------------------------------------------------
# inequalities on the torus
# ---------------------------------------------------------------------------


def hausdorff_young_torus(f: TorusSignal, p: float) -> float:
    """
    sum |f^(n)|^p' / ||f||_p^p'  for 1 <= p <= 2 (p' = inf when p = 1).

    At most 1 when the inequality holds. For p = 1 the ratio is sup|f^| / ||f||_1.
    """
    if not 1 <= p <= 2:
        raise ValueError("Hausdorff-Young on the torus is checked only for 1 <= p <= 2")
    a = np.abs(dft_analyze(f).coefficients)
    norm = lp_norm(f, p)
    if p == 1:
        return float(a.max() / norm)
    q = p / (p - 1)
    return float(np.sum(a**q) / norm**q)


def jump_experiment(f: TorusSignal, t_jump: float, ns) -> np.ndarray:
    """
    Rows (n, |S_n f(t_jump) - midpoint|), t_jump snapped to the nearest node.

    The midpoint is the sample stored at that node, which the catalog sets to
    the average of the one-sided limits.
    """
    j = int(round((t_jump + np.pi) / f.grid.spacing)) % f.grid.size
    mid = f.values[j]
    rows = [(n, abs(partial_sum(f, n).values[j] - mid)) for n in ns]
    return np.array(rows, dtype=float)


def anti_self_adjoint_defect(f: TorusSignal, g: TorusSignal) -> float:
    return abs(inner(hilbert_torus(f), g) + inner(f, hilbert_torus(g)))

"""
Singular integrals on R and R^2: Hilbert and Riesz transforms as Fourier
multipliers and as principal-value quadratures, the Riesz projection, the
Hoermander kernel-smoothness integral and weak (1,1) reports.

Multiplier forms act on the periodic grid, so they are exact for inputs that
are negligible near the edges of [-L, L)^d. The p.v. forms treat the grid as
one period and sum the truncated kernel over offsets y in [-L, L)^d; they
match the line transforms at nodes away from the edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .catalog import c_d
from .grid import LineGrid, LineSignal, apply_multiplier, lp_norm
from .maximal import WeakNormReport, cz_decompose, weak_norm_report
from .torus import central_derivative


def _nyquist_mask(grid: LineGrid) -> np.ndarray:
    """True on bins where some axis sits at the Nyquist index -N/2."""
    idx = np.arange(-grid.size // 2, grid.size // 2)
    ny = idx == -grid.size // 2
    if grid.dim == 1:
        return ny
    return ny[:, None] | ny[None, :]


def _require_dim(f: LineSignal, d: int, what: str):
    if f.grid.dim != d:
        raise ValueError(f"{what} needs d = {d}, got d = {f.grid.dim}")


def _grid_steps(eps: float, h: float) -> int:
    m = eps / h
    if round(m) < 1 or abs(m - round(m)) > 1e-9:
        raise ValueError(f"eps must be a positive multiple of the grid spacing {h:.6g}")
    return int(round(m))


@dataclass(frozen=True)
class SingularKernelSpec:
    kind: str  # "hilbert_1d" or "riesz"
    dim: int
    eps: float
    j: int = 1

    def __post_init__(self):
        if self.kind == "hilbert_1d":
            if self.dim != 1:
                raise ValueError("the Hilbert kernel needs d = 1")
        elif self.kind == "riesz":
            if self.dim != 2 or self.j not in (1, 2):
                raise ValueError("Riesz kernels are supported for d = 2, j in {1, 2}")
        else:
            raise ValueError(f"unknown singular kernel {self.kind!r}")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def constant(self) -> float:
        return c_d(self.dim)

    def __call__(self, *ys) -> np.ndarray:
        """Kernel values; zero inside the excluded ball |y| < eps."""
        r2 = sum(np.asarray(y, dtype=float) ** 2 for y in ys)
        keep = r2 >= self.eps**2 * (1 - 1e-12)
        safe = np.where(keep, r2, 1.0)
        if self.kind == "hilbert_1d":
            out = 1.0 / (np.pi * np.where(keep, ys[0], 1.0))
        else:
            out = self.constant * ys[self.j - 1] / safe ** ((self.dim + 1) / 2)
        return np.where(keep, out, 0.0)


# ---------------------------------------------------------------------------
# Hilbert transform on R
# ---------------------------------------------------------------------------


def hilbert_multiplier_line(grid: LineGrid) -> np.ndarray:
    m = -1j * np.sign(grid.freqs)
    m[_nyquist_mask(grid)] = 0.0
    return m


def hilbert_line(f: LineSignal) -> LineSignal:
    """Multiplier -i sign(xi); the xi = 0 and Nyquist bins are zero."""
    _require_dim(f, 1, "hilbert_line")
    return apply_multiplier(f, hilbert_multiplier_line(f.grid))


def _circular_conv(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """
    Periodic convolution with a kernel sampled on offsets -N/2..N/2-1 per axis.

    The grid is treated as one period, so every offset y in [-L, L)^d is used
    and the truncated kernel stays odd (the unpaired offset -L carries zero).
    """
    axes = tuple(range(values.ndim))
    kf = np.fft.fftn(np.fft.ifftshift(kernel, axes=axes), axes=axes)
    return np.fft.ifftn(np.fft.fftn(values, axes=axes) * kf, axes=axes)


def hilbert_line_pv(f: LineSignal, eps: float, near_field: bool = True) -> LineSignal:
    """
    Principal value integral of f(x - y) / (pi y) over eps < |y| < L.

    The truncated part is a lattice sum over offsets y = k h, treating the
    grid as one period. In symmetric-difference form the integral runs over
    (0, L) of g(y) = [f(x - y) - f(x + y)] / (pi y), an even smooth function
    of y. With ``near_field`` the excluded window is filled by the trapezoid
    rule for g, whose y = 0 value -2 f'(x) / pi comes from a 16th order
    centred difference. Without it the sum is cut at |y| = eps with half
    weight there, and the result carries the window term -(2 eps / pi) f'(x).
    """
    _require_dim(f, 1, "hilbert_line_pv")
    n, h = f.grid.size, f.grid.spacing
    m = _grid_steps(eps, h)
    if m >= n // 2:
        raise ValueError("eps must be smaller than L")
    k = np.arange(-n // 2, n // 2)
    first = 1 if near_field else m
    w = np.where(np.abs(k) >= first, 1.0, 0.0)
    if not near_field:
        w[np.abs(k) == m] = 0.5
    w[0] = 0.0  # k = -N/2 has no partner
    kern = np.zeros(n)
    nz = k != 0
    kern[nz] = w[nz] / (np.pi * k[nz])
    out = _circular_conv(f.values, kern)
    if near_field:
        out = out - (h / np.pi) * central_derivative(f.values, h)
    return LineSignal(f.grid, out)


def box_hilbert_closed_form(x) -> np.ndarray:
    """(1/pi) ln|(x + 1)/(x - 1)|, the Hilbert transform of the indicator of [-1, 1]."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x + 1)) / np.pi - np.log(np.abs(x - 1)) / np.pi


# ---------------------------------------------------------------------------
# Riesz transforms on R^2
# ---------------------------------------------------------------------------


def riesz_multiplier(grid: LineGrid, j: int) -> np.ndarray:
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    xi = grid.freq_mesh()
    r = np.sqrt(xi[0] ** 2 + xi[1] ** 2)
    m = np.where(r > 0, -1j * xi[j - 1] / np.where(r > 0, r, 1.0), 0.0)
    m[_nyquist_mask(grid)] = 0.0
    return m


def riesz_transform(f: LineSignal, j: int) -> LineSignal:
    """Multiplier -i xi_j / |xi|; zero at xi = 0 and on the Nyquist row and column."""
    _require_dim(f, 2, "riesz_transform")
    return apply_multiplier(f, riesz_multiplier(f.grid, j))


def spectral_partial(f: LineSignal, orders) -> LineSignal:
    """Mixed spectral derivative prod_j (i xi_j)^orders[j]; Nyquist bins zeroed."""
    m = np.ones(f.grid.shape, dtype=complex)
    for xi, o in zip(f.grid.freq_mesh(), orders):
        m = m * (1j * xi) ** o
    m[_nyquist_mask(f.grid)] = 0.0
    return apply_multiplier(f, m)


def spectral_laplacian(f: LineSignal) -> LineSignal:
    r2 = sum(xi**2 for xi in f.grid.freq_mesh())
    m = -r2.astype(complex)
    m[_nyquist_mask(f.grid)] = 0.0
    return apply_multiplier(f, m)


def _smooth_step(s: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for s <= 0, 1 for s >= 1, and step(s) + step(1 - s) = 1."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        a = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1 - s, 1.0)), 0.0)
    return a / (a + b)


# moments of phi = 1 - step on [0, 1]: integral phi = 1/2 by the symmetry of
# the step; integral phi s^2 by quadrature
_PHI_M0 = 0.5
_PHI_M2 = float(quad(lambda s: (1 - _smooth_step(s)) * s * s, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13)[0])


def riesz_pv(f: LineSignal, j: int, eps: float, near_field: bool = True) -> LineSignal:
    """
    Principal value integral of f(x - y) c_2 y_j / |y|^3 over |y| > eps, d = 2.

    With ``near_field`` (default) the kernel is split by a smooth radial
    cutoff psi(|y|/eps) rising from 0 at the origin to 1 at |y| = eps. The far
    part K psi is smooth, so its lattice sum over y in [-L, L)^2 converges
    fast. The near part, the p.v. integral against K (1 - psi), is expanded in
    Taylor series: the odd terms give

        -c_2 pi M0 d_j f  -  c_2 (pi / 8) M2 d_j (Laplacian f),

    with M0 = integral (1 - psi), M2 = integral (1 - psi) r^2 over r > 0, and
    derivatives from 16th order centred differences. Without ``near_field``
    the kernel is cut sharply at |y| = eps and nothing is added back.
    """
    _require_dim(f, 2, "riesz_pv")
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    n, h = f.grid.size, f.grid.spacing
    m = _grid_steps(eps, h)
    if m >= n // 2:
        raise ValueError("eps must be smaller than L")
    k = np.arange(-n // 2, n // 2) * h
    y1, y2 = np.meshgrid(k, k, indexing="ij")
    r = np.sqrt(y1**2 + y2**2)
    safe = np.where(r > 0, r, 1.0)
    kern = np.where(r > 0, c_d(2) * (y1, y2)[j - 1] / safe**3, 0.0)
    if near_field:
        kern = kern * _smooth_step(r / eps)
    else:
        kern = np.where(r >= eps * (1 - 1e-12), kern, 0.0)
    kern[0, :] = 0.0  # offsets at -L have no partner
    kern[:, 0] = 0.0
    out = _circular_conv(f.values, kern * f.grid.cell)
    if near_field:
        v = f.values
        dj = central_derivative(v, h, axis=j - 1)
        lap_dj = sum(central_derivative(central_derivative(dj, h, axis=a), h, axis=a) for a in (0, 1))
        c2 = c_d(2)
        out = out - c2 * np.pi * _PHI_M0 * eps * dj - c2 * (np.pi / 8) * _PHI_M2 * eps**3 * lap_dj
    return LineSignal(f.grid, out)


def riesz_direct(f: LineSignal, j: int, points) -> np.ndarray:
    """
    Plain lattice sum of f(y) c_2 (x - y)_j / |x - y|^3 at the given points.

    Only meaningful where f vanishes near each point, so no p.v. is needed.
    """
    _require_dim(f, 2, "riesz_direct")
    x1, x2 = f.grid.mesh()
    out = []
    for p in np.atleast_2d(points):
        d1, d2 = p[0] - x1, p[1] - x2
        r2 = d1**2 + d2**2
        safe = np.where(r2 > 0, r2, 1.0)
        kern = np.where(r2 > 0, c_d(2) * (d1, d2)[j - 1] / safe**1.5, 0.0)
        out.append(f.grid.cell * np.sum(f.values * kern))
    return np.array(out)


# ---------------------------------------------------------------------------
# Riesz projection on R
# ---------------------------------------------------------------------------


def riesz_projection_line(f: LineSignal) -> LineSignal:
    """Keep xi > 0."""
    _require_dim(f, 1, "riesz_projection_line")
    return apply_multiplier(f, (f.grid.freqs > 0).astype(float))


def _modulate(f: LineSignal, omega: float) -> LineSignal:
    return LineSignal(f.grid, f.values * np.exp(1j * omega * f.grid.nodes))


def partial_sum_line(f: LineSignal, omega: float, closed: bool = True) -> LineSignal:
    """S_w f with band [-w, w] (``closed``) or the half-open band (-w, w]."""
    xi = f.grid.freqs
    tol = 1e-9 * f.grid.dfreq
    lower = xi >= -omega - tol if closed else xi > -omega + tol
    return apply_multiplier(f, (lower & (xi <= omega + tol)).astype(float))


def _check_modulation(f: LineSignal, omega: float):
    m = omega / f.grid.dfreq
    if abs(m - round(m)) > 1e-9:
        raise ValueError(f"omega must be a multiple of pi/L = {f.grid.dfreq:.6g}")
    if not 0 < omega < np.pi / f.grid.spacing:
        raise ValueError("omega must lie inside the grid band (0, pi/h)")


def partial_sum_via_projection_line(f: LineSignal, omega: float) -> LineSignal:
    """e^{-iwx} P(e^{iwx} f) - e^{iwx} P(e^{-iwx} f)."""
    _check_modulation(f, omega)
    a = _modulate(riesz_projection_line(_modulate(f, omega)), -omega)
    b = _modulate(riesz_projection_line(_modulate(f, -omega)), omega)
    return a - b


def partial_sum_identity_check(f: LineSignal, omega: float) -> float:
    """
    Max deviation between the modulated-projection formula and S_w f.

    With grid-aligned w the formula keeps exactly the bins with -w < xi <= w,
    so it is compared with the half-open partial sum. Spectral content that
    modulation pushes across the Nyquist bin wraps around; keep inputs band
    limited to |xi| < pi/h - w.
    """
    got = partial_sum_via_projection_line(f, omega)
    want = partial_sum_line(f, omega, closed=False)
    return float(np.max(np.abs(got.values - want.values)))


# ---------------------------------------------------------------------------
# Hoermander condition
# ---------------------------------------------------------------------------


def riesz_kernel(j: int, *xs) -> np.ndarray:
    """c_d x_j / |x|^(d+1); for d = 1 this is 1/(pi x)."""
    d = len(xs)
    r2 = sum(np.asarray(x, dtype=float) ** 2 for x in xs)
    return c_d(d) * np.asarray(xs[j - 1], dtype=float) / r2 ** ((d + 1) / 2)


def hormander_integral(j: int, y, z, domain_radius: float, panel_nodes: int = 24, angular_nodes: int = 1024) -> float:
    """
    Integral of |rho_j(x - y) - rho_j(x - z)| over 2|y - z| <= |x - z| <= R.

    The domain is centred at z, so the value depends on (y, z) only through
    y - z and is exactly translation invariant. Polar coordinates about z:
    Gauss-Legendre in log r (panels split at each doubling of r) and the
    periodic trapezoid rule in the angle. In d = 1 the "angle" is the two
    half-lines.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    d = y.size
    if z.size != d or d not in (1, 2):
        raise ValueError("y and z must be points of the same dimension d in {1, 2}")
    if not 1 <= j <= d:
        raise ValueError(f"j must lie in 1..{d}")
    delta = float(np.linalg.norm(y - z))
    if delta == 0:
        raise ValueError("y and z must differ")
    r_lo = 2 * delta
    if not domain_radius > r_lo:
        return 0.0
    # panels in u = log r
    u0, u1 = math.log(r_lo), math.log(domain_radius)
    edges = np.arange(u0, u1, math.log(2.0))
    edges = np.append(edges, u1)
    gl_x, gl_w = np.polynomial.legendre.leggauss(panel_nodes)
    us, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        us.append((b - a) / 2 * gl_x + (a + b) / 2)
        ws.append((b - a) / 2 * gl_w)
    u = np.concatenate(us)
    wu = np.concatenate(ws)
    r = np.exp(u)
    if d == 1:
        dirs = np.array([[1.0], [-1.0]])
        wdir = np.array([1.0, 1.0])
    else:
        th = 2 * np.pi * np.arange(angular_nodes) / angular_nodes
        dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
        wdir = np.full(angular_nodes, 2 * np.pi / angular_nodes)
    total = 0.0
    for e, we in zip(dirs, wdir):
        x = z[None, :] + r[:, None] * e[None, :]
        a = riesz_kernel(j, *(x - y).T)
        b = riesz_kernel(j, *(x - z).T)
        # dx = r^(d-1) dr dtheta = r^d du dtheta
        total += we * np.sum(wu * r**d * np.abs(a - b))
    return float(total)


# ---------------------------------------------------------------------------
# weak (1,1) reports
# ---------------------------------------------------------------------------


def weak11_singular_report(transform: str, ensemble, j: int = 1, lambda_grid=None) -> WeakNormReport:
    """
    Sup over the ensemble of lam |{|Tf| > lam}| / ||f||_1.

    ``transform`` is "hilbert_line" (d = 1) or "riesz" (d = 2, component j).
    The returned ratios are the per-lambda maxima over the ensemble.
    """
    if transform == "hilbert_line":
        op = hilbert_line
    elif transform == "riesz":
        op = lambda f: riesz_transform(f, j)  # noqa: E731
    else:
        raise ValueError(f"unknown transform {transform!r}; expected hilbert_line or riesz")
    ens = list(ensemble)
    if not ens:
        raise ValueError("empty ensemble")
    reports = []
    for f in ens:
        tf = op(f)
        lam = lambda_grid
        if lam is None:
            top = float(np.max(np.abs(tf.values)))
            lam = np.geomspace(top * 1e-6, top, 200)
        reports.append(weak_norm_report(tf, lp_norm(f, 1), lam))
    if lambda_grid is None:
        lam = reports[0].lambda_grid
        ratios = reports[0].ratios
        for rep in reports[1:]:
            ratios = np.maximum(ratios, np.interp(lam, rep.lambda_grid, rep.ratios))
    else:
        lam = np.asarray(lambda_grid, dtype=float)
        ratios = np.max([rep.ratios for rep in reports], axis=0)
    return WeakNormReport(lam, ratios, max(rep.sup_ratio for rep in reports))


@dataclass(frozen=True)
class CZTailReport:
    tail_sum: float
    f_l1: float
    b_l1: float
    pieces: int

    @property
    def ratio(self) -> float:
        return self.tail_sum / self.f_l1


def cz_tail_integral(f: LineSignal, lam: float, j: int = 1) -> CZTailReport:
    """
    Sum over CZ bad pieces of the integral of |T b_l| outside the enlarged cube.

    T is the Hilbert transform (d = 1) or R_j (d = 2). The enlarged cube is
    concentric with Q(l) and 2 sqrt(d) times larger.
    """
    res = cz_decompose(f, lam)
    g = f.grid
    d = g.dim
    shifted = [x + g.half_width for x in g.mesh()]
    total = 0.0
    for l, cube in enumerate(res.cubes):
        piece = res.piece(l)
        tb = hilbert_line(piece) if d == 1 else riesz_transform(piece, j)
        centre = cube.lower + cube.side / 2
        half = math.sqrt(d) * cube.side
        inside = np.ones(g.shape, dtype=bool)
        for x, c in zip(shifted, centre):
            inside &= np.abs(x - c) <= half
        total += g.cell * float(np.sum(np.abs(tb.values)[~inside]))
    return CZTailReport(total, lp_norm(f, 1), lp_norm(res.bad, 1), len(res.cubes))

"""
Maximal functions, the covering selection, dyadic averages and the
Calderon-Zygmund decomposition.

Dyadic machinery runs in shifted coordinates: a line grid on [-L, L)^d is
re-indexed to [0, 2L)^d, so the level-k cube with index m is
2^-k ([0, 1)^d + m) in those coordinates. This needs 2L to be a power of two;
level k_min has one cube covering the domain and level k_max has one node
per cube. Torus intervals use t + pi in [0, 2pi) in the same way.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.signal import fftconvolve

from .grid import LineGrid, LineSignal, TorusSignal, apply_multiplier_torus, lp_norm
from .rng import Xorshift64Star

Signal = LineSignal | TorusSignal


# ---------------------------------------------------------------------------
# Hardy-Littlewood maximal function
# ---------------------------------------------------------------------------


def _radii_steps(grid: LineGrid, radii) -> np.ndarray:
    top = grid.size // 2
    if radii is None:
        return np.arange(1, top + 1)
    k = np.asarray(radii, dtype=int)
    if k.size == 0 or np.any(k < 1) or np.any(k > top):
        raise ValueError(f"radii are grid steps in 1..{top}")
    return np.unique(k)


def _hl_1d(a: np.ndarray, steps: np.ndarray) -> np.ndarray:
    n = a.size
    s = np.concatenate(([0.0], np.cumsum(a)))
    i = np.arange(n)
    best = np.zeros(n)
    for k in steps:
        lo = np.maximum(i - k, 0)
        hi = np.minimum(i + k, n - 1)
        avg = (s[hi + 1] - s[lo]) / (hi - lo + 1)
        np.maximum(best, avg, out=best)
    return best


def _hl_2d(a: np.ndarray, steps: np.ndarray) -> np.ndarray:
    ones = np.ones_like(a)
    best = np.zeros_like(a)
    for k in steps:
        o = np.arange(-k, k + 1)
        disk = ((o[:, None] ** 2 + o[None, :] ** 2) <= k * k).astype(float)
        num = fftconvolve(a, disk, mode="same")
        cnt = np.rint(fftconvolve(ones, disk, mode="same"))
        np.maximum(best, np.maximum(num, 0.0) / cnt, out=best)
    return best


def hl_maximal(f: LineSignal, radii=None) -> LineSignal:
    """
    Centred Hardy-Littlewood maximal function on the grid.

    Mf(x) = max over r = k h (k in ``radii``, default 1..N/2) of the mean of |f|
    over the nodes in the closed Euclidean ball B(x, r). Balls are cut at the
    domain edge and the mean is taken over the nodes actually included.
    """
    steps = _radii_steps(f.grid, radii)
    a = np.abs(f.values)
    out = _hl_1d(a, steps) if f.grid.dim == 1 else _hl_2d(a, steps)
    return LineSignal(f.grid, out)


def covering_select(balls) -> list[int]:
    """
    Greedy disjoint subcollection: scan by decreasing radius (ties by input
    order) and keep a ball when it misses every ball already kept.
    """
    centres = [np.atleast_1d(np.asarray(c, dtype=float)) for c, _ in balls]
    radii = [float(r) for _, r in balls]
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    order = sorted(range(len(balls)), key=lambda i: (-radii[i], i))
    kept: list[int] = []
    for i in order:
        if all(np.linalg.norm(centres[i] - centres[j]) > radii[i] + radii[j] for j in kept):
            kept.append(i)
    return kept


def ball_volume(r: float, d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * r**d


def union_measure_mc(balls, samples: int = 200_000, seed: int = 0) -> float:
    """Monte-Carlo measure of a union of balls over their bounding box."""
    c = np.array([np.atleast_1d(np.asarray(b[0], dtype=float)) for b in balls])
    r = np.array([float(b[1]) for b in balls])
    lo = (c - r[:, None]).min(axis=0)
    hi = (c + r[:, None]).max(axis=0)
    u = Xorshift64Star(seed).uniforms(samples * c.shape[1]).reshape(samples, c.shape[1])
    pts = lo + u * (hi - lo)
    inside = np.zeros(samples, dtype=bool)
    for ci, ri in zip(c, r):
        inside |= np.sum((pts - ci) ** 2, axis=1) <= ri * ri
    return float(np.prod(hi - lo) * inside.mean())


# ---------------------------------------------------------------------------
# dyadic cubes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DyadicCube:
    """2^-k ([0, 1)^d + m) in shifted coordinates."""

    level: int
    index: tuple

    @property
    def side(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def dim(self) -> int:
        return len(self.index)

    @property
    def measure(self) -> float:
        return self.side**self.dim

    @property
    def lower(self) -> np.ndarray:
        return self.side * np.asarray(self.index, dtype=float)

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1, tuple(i // 2 for i in self.index))

    def children(self) -> list["DyadicCube"]:
        return [
            DyadicCube(self.level + 1, tuple(2 * i + e for i, e in zip(self.index, bits)))
            for bits in product((0, 1), repeat=self.dim)
        ]

    def contains(self, other: "DyadicCube") -> bool:
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return all((j >> shift) == i for i, j in zip(self.index, other.index))

    def disjoint(self, other: "DyadicCube") -> bool:
        return not (self.contains(other) or other.contains(self))


def _dyadic_layout(grid: LineGrid) -> tuple[int, int]:
    """(k_min, k_max) for the shifted grid; both need powers of two."""
    width = 2 * grid.half_width
    k_min = -math.log2(width)
    k_max = -math.log2(grid.spacing)
    if abs(k_min - round(k_min)) > 1e-12:
        raise ValueError(f"dyadic cubes need 2L to be a power of two, got 2L = {width}")
    return int(round(k_min)), int(round(k_max))


def _block(grid_size: int, k: int, k_max: int) -> int:
    return 2 ** (k_max - k)


def _check_level(k: int, k_min: int, k_max: int):
    if not k_min <= k <= k_max:
        raise ValueError(f"level {k} is not grid aligned; available levels are {k_min}..{k_max}")


def _block_reduce(a: np.ndarray, b: int, dim: int, op=np.mean) -> np.ndarray:
    n = a.shape[0]
    if dim == 1:
        return op(a.reshape(n // b, b), axis=1)
    return op(a.reshape(n // b, b, n // b, b), axis=(1, 3))


def _block_expand(a: np.ndarray, b: int, dim: int) -> np.ndarray:
    out = np.repeat(a, b, axis=0)
    if dim == 2:
        out = np.repeat(out, b, axis=1)
    return out


def dyadic_levels(grid: LineGrid) -> range:
    k_min, k_max = _dyadic_layout(grid)
    return range(k_min, k_max + 1)


def dyadic_average(f: LineSignal, k: int) -> LineSignal:
    """E_k f: on each level-k cube, the node mean of f there."""
    k_min, k_max = _dyadic_layout(f.grid)
    _check_level(k, k_min, k_max)
    b = _block(f.grid.size, k, k_max)
    means = _block_reduce(f.values, b, f.grid.dim)
    return LineSignal(f.grid, _block_expand(means, b, f.grid.dim))


def dyadic_maximal(f: LineSignal, k_range) -> LineSignal:
    ks = list(k_range)
    if not ks:
        raise ValueError("empty level range")
    best = np.zeros(f.grid.shape)
    for k in ks:
        np.maximum(best, np.abs(dyadic_average(f, k).values), out=best)
    return LineSignal(f.grid, best)


# ---------------------------------------------------------------------------
# Calderon-Zygmund decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CZResult:
    """
    f = good + sum of bad pieces.

    Each piece is stored as the block of values on its cube (a local array of
    side 2^-k / h nodes); ``piece(l)`` expands it to a full signal.
    ``domain`` is "line" or "torus"; on the torus ``cubes`` are the intervals
    2pi 2^-k ([0, 1) + m) with k >= 1 in the coordinate t + pi.
    """

    lam: float
    good: Signal
    cubes: list
    blocks: list
    domain: str = "line"
    averages: list = field(default_factory=list)

    def _slices(self, cube: DyadicCube) -> tuple:
        g = self.good.grid
        n = g.size
        if self.domain == "torus":
            b = n >> cube.level
        else:
            b = int(round(cube.side / g.spacing))
        return tuple(slice(i * b, (i + 1) * b) for i in cube.index)

    def piece(self, l: int) -> Signal:
        v = np.zeros(self.good.grid.shape if self.domain == "line" else (self.good.grid.size,), dtype=complex)
        v[self._slices(self.cubes[l])] = self.blocks[l]
        return type(self.good)(self.good.grid, v)

    @property
    def bad(self) -> Signal:
        v = np.zeros_like(self.good.values)
        for cube, blk in zip(self.cubes, self.blocks):
            v[self._slices(cube)] += blk
        return type(self.good)(self.good.grid, v)

    def cube_measure(self, l: int) -> float:
        """Lebesgue measure of the l-th cube (length of the interval on the torus)."""
        c = self.cubes[l]
        if self.domain == "torus":
            return 2 * math.pi * 2.0 ** (-c.level)
        return c.measure

    def to_json(self) -> str:
        gl1 = lp_norm(self.good, 1)
        glinf = lp_norm(self.good, np.inf)
        bl1 = lp_norm(self.bad, 1)
        cubes = [
            {"k": c.level, "m": list(c.index), "avg": [float(np.real(a)), float(np.imag(a))]}
            for c, a in zip(self.cubes, self.averages)
        ]
        doc = {"lambda": self.lam, "cubes": cubes, "norms": {"g_l1": gl1, "g_linf": glinf, "b_l1": bl1}}
        return json.dumps(doc, sort_keys=True)


def _cz_scan(values: np.ndarray, dim: int, lam: float, levels, block_of) -> tuple[list, list, list, np.ndarray]:
    """Coarse-to-fine stopping time on |values|; returns cubes, blocks, averages, good."""
    a = np.abs(values)
    covered = np.zeros(values.shape, dtype=bool)
    cubes, blocks, avgs = [], [], []
    good = np.array(values, dtype=complex)
    for k in levels:
        b = block_of(k)
        means = _block_reduce(a, b, dim)
        taken = _block_reduce(covered, b, dim, op=np.any)
        hits = np.argwhere((means > lam) & ~taken)
        for idx in hits:
            sl = tuple(slice(i * b, (i + 1) * b) for i in idx)
            local = values[sl]
            avg = local.mean()
            cubes.append(DyadicCube(int(k), tuple(int(i) for i in idx)))
            blocks.append(np.array(local - avg))
            avgs.append(complex(avg))
            good[sl] = avg
            covered[sl] = True
    return cubes, blocks, avgs, good


def cz_decompose(f: LineSignal, lam: float) -> CZResult:
    """
    Calderon-Zygmund split of f at level lam on the shifted grid [0, 2L)^d.

    Cubes are the maximal dyadic cubes whose |f| node mean exceeds lam,
    scanning levels k_min..k_max. The domain cube is allowed only when its
    dyadic parent (side 4L, f = 0 outside the grid) has mean at most lam;
    otherwise the grid is too small for the decomposition and ValueError is
    raised.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    g = f.grid
    k_min, k_max = _dyadic_layout(g)
    parent_mean = lp_norm(f, 1) / (4 * g.half_width) ** g.dim
    if parent_mean > lam:
        raise ValueError(
            f"lambda = {lam:.6g} is below the mean of |f| over the parent of the domain cube "
            f"({parent_mean:.6g}); enlarge L or raise lambda"
        )
    cubes, blocks, avgs, good = _cz_scan(
        f.values, g.dim, lam, range(k_min, k_max + 1), lambda k: _block(g.size, k, k_max)
    )
    return CZResult(lam, LineSignal(g, good), cubes, blocks, "line", avgs)


def cz_decompose_torus(f: TorusSignal, lam: float) -> CZResult:
    """
    Torus split at level lam on intervals 2pi 2^-k ([0, 1) + m), k >= 1, in the
    coordinate t + pi. Needs lam > ||f||_1 (normalized measure).
    """
    norm = lp_norm(f, 1)
    if not lam > norm:
        raise ValueError(f"torus decomposition needs lambda > ||f||_1 = {norm:.6g}, got {lam}")
    n = f.grid.size
    top = int(math.log2(n))
    cubes, blocks, avgs, good = _cz_scan(f.values, 1, lam, range(1, top + 1), lambda k: n >> k)
    return CZResult(lam, TorusSignal(f.grid, good), cubes, blocks, "torus", avgs)


@dataclass(frozen=True)
class CZPropertyReport:
    reconstruction: float
    disjoint: bool
    mean_zero: float
    g_l1_ok: bool
    g_linf_ok: bool
    b_l1_ok: bool
    pieces_ok: bool
    total_measure_ok: bool
    total_measure: float
    total_bound: float

    @property
    def passed(self) -> bool:
        return (
            self.reconstruction <= 1e-10
            and self.disjoint
            and self.mean_zero <= 1e-10
            and self.g_l1_ok
            and self.g_linf_ok
            and self.b_l1_ok
            and self.pieces_ok
            and self.total_measure_ok
        )


def cz_properties(f: Signal, res: CZResult, rtol: float = 1e-10) -> CZPropertyReport:
    """Check (i)-(vi) with relative slack ``rtol``; torus constants when on the torus."""
    lam = res.lam
    scale = max(float(np.max(np.abs(f.values))), 1e-300)
    recon = float(np.max(np.abs(f.values - res.good.values - res.bad.values))) / scale
    disjoint = all(
        res.cubes[i].disjoint(res.cubes[j]) for i in range(len(res.cubes)) for j in range(i + 1, len(res.cubes))
    )
    mz = max((abs(blk.mean()) / scale for blk in res.blocks), default=0.0)
    fl1 = lp_norm(f, 1)
    if res.domain == "torus":
        linf_bound = 2 * lam
        piece_bound = [4 / (2 * math.pi) * lam * res.cube_measure(l) for l in range(len(res.cubes))]
        total = sum(res.cube_measure(l) for l in range(len(res.cubes)))
        total_bound = 2 * math.pi / lam * fl1
        piece_norm = [lp_norm(res.piece(l), 1) for l in range(len(res.cubes))]
    else:
        d = res.good.grid.dim
        linf_bound = 2**d * lam
        piece_bound = [2 ** (d + 1) * lam * res.cube_measure(l) for l in range(len(res.cubes))]
        total = sum(c.measure for c in res.cubes)
        total_bound = fl1 / lam
        cell = res.good.grid.cell
        piece_norm = [cell * float(np.abs(b).sum()) for b in res.blocks]
    tol = 1 + rtol
    return CZPropertyReport(
        reconstruction=recon,
        disjoint=disjoint,
        mean_zero=mz,
        g_l1_ok=lp_norm(res.good, 1) <= fl1 * tol,
        g_linf_ok=lp_norm(res.good, np.inf) <= linf_bound * tol,
        b_l1_ok=lp_norm(res.bad, 1) <= 2 * fl1 * tol,
        pieces_ok=all(pn <= pb * tol for pn, pb in zip(piece_norm, piece_bound)),
        total_measure_ok=total <= total_bound * tol,
        total_measure=total,
        total_bound=total_bound,
    )


# ---------------------------------------------------------------------------
# maximal functions on the torus
# ---------------------------------------------------------------------------


def lebesgue_averages(f: TorusSignal, widths=None) -> np.ndarray:
    """
    Rows A_m f = mean of f over the 2m+1 nodes centred at each node.

    ``widths`` are half-widths m in nodes (default 0..N/2-1); the full mean
    (the window covering the whole circle) is appended as the last row.
    """
    n = f.grid.size
    ms = np.arange(n // 2) if widths is None else np.asarray(widths, dtype=int)
    if np.any(ms < 0) or np.any(ms >= n // 2):
        raise ValueError(f"half-widths must lie in 0..{n // 2 - 1}")
    v = f.values
    ext = np.concatenate((v, v, v))
    s = np.concatenate(([0], np.cumsum(ext)))
    i = np.arange(n) + n
    rows = [(s[i + m + 1] - s[i - m]) / (2 * m + 1) for m in ms]
    rows.append(np.full(n, v.mean()))
    return np.array(rows)


def torus_maximal(kind: str, f: TorusSignal, param_grid=None) -> TorusSignal:
    """
    Pointwise sup of |k_param * f| over a schedule.

    lebesgue: half-widths h = m * spacing given in radians (default: every
              m in 0..N/2-1, plus the full circle)
    fejer:    integers n (default 0..N/4)
    poisson:  radii r in (0, 1) (default 0.05..0.9 step 0.05)
    """
    n = f.grid.size
    if kind == "lebesgue":
        widths = None
        if param_grid is not None:
            m = np.asarray(param_grid, dtype=float) / f.grid.spacing
            if np.any(np.abs(m - np.rint(m)) > 1e-9):
                raise ValueError("lebesgue half-widths must be multiples of the grid spacing")
            widths = np.rint(m).astype(int)
        rows = lebesgue_averages(f, widths)
        return TorusSignal(f.grid, np.abs(rows).max(axis=0))
    if kind == "fejer":
        params = range(n // 4 + 1) if param_grid is None else param_grid
        j = np.abs(f.grid.freqs)
        mult = lambda p: np.maximum(1 - j / (p + 1), 0.0)  # noqa: E731
    elif kind == "poisson":
        params = np.arange(1, 19) * 0.05 if param_grid is None else param_grid
        j = np.abs(f.grid.freqs).astype(float)
        mult = lambda p: float(p) ** j  # noqa: E731
    else:
        raise ValueError(f"unknown maximal kind {kind!r}; expected lebesgue, fejer or poisson")
    best = np.zeros(n)
    for p in params:
        np.maximum(best, np.abs(apply_multiplier_torus(f, mult(p)).values), out=best)
    return TorusSignal(f.grid, best)


# ---------------------------------------------------------------------------
# weak-type reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakNormReport:
    lambda_grid: np.ndarray
    ratios: np.ndarray
    sup_ratio: float

    def to_dict(self) -> dict:
        return {
            "lambda_grid": [float(x) for x in self.lambda_grid],
            "ratios": [float(x) for x in self.ratios],
            "sup_ratio": float(self.sup_ratio),
        }


def _measure_weight(t: Signal) -> float:
    return 1.0 / t.grid.size if isinstance(t, TorusSignal) else t.grid.cell


def weak_norm_report(tf: Signal, f_l1: float, lambda_grid=None) -> WeakNormReport:
    """
    Ratios lam * mu{|Tf| > lam} / ||f||_1 on a grid, plus the exact sup.

    The sup over all lam > 0 is approached as lam rises to a sample value v,
    so it equals max_v v * mu{|Tf| >= v} / ||f||_1, computed from the sorted
    samples.
    """
    if not f_l1 > 0:
        raise ValueError("||f||_1 must be positive")
    w = _measure_weight(tf)
    a = np.sort(np.abs(tf.values).ravel())[::-1]
    count = np.arange(1, a.size + 1)
    exact = float(np.max(a * count) * w / f_l1) if a.size and a[0] > 0 else 0.0
    if lambda_grid is None:
        lam = np.geomspace(max(a[0], 1e-300) * 1e-6, max(a[0], 1e-300), 200) if a[0] > 0 else np.array([1.0])
    else:
        lam = np.asarray(lambda_grid, dtype=float)
        if np.any(lam <= 0):
            raise ValueError("lambda grid must be positive")
    asc = a[::-1]
    above = asc.size - np.searchsorted(asc, lam, side="right")
    ratios = lam * above * w / f_l1
    return WeakNormReport(lam, ratios, max(exact, float(ratios.max(initial=0.0))))

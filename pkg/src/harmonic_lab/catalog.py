"""
Named test functions.

Keys are strings of the form ``name`` or ``name(arg, arg, ...)``.

Torus (2pi-periodic, sampled on [-pi, pi)):
    sawtooth          f(t) = t on (-pi, pi]
    triangle          f(t) = |t|
    square            f(t) = sign(t)
    lacunary(a, K)    f(t) = sum_{k=0}^{K} 2^{-k a} exp(i 2^k t)
    trigpoly(s, D)    complex trig polynomial of degree D, standard complex
                      normal coefficients drawn from Xorshift64Star(s)
    holder(a)         f(t) = |t|^a, Hoelder of order a at t = 0
    spike(s, K)       K unit-mass grid spikes at random nodes (seed s)
    exp               f(t) = e^t on (-pi, pi), value cosh(pi) at the jump
    indicator(a, b)   f(t) = 1 on (a, b), 0 outside, 1/2 at the endpoints

Line (R^d, d = 1 or 2; product/radial forms as in the transform tables):
    box, tent, exp_abs, gaussian, dirichlet_fn, fejer_fn, poisson_fn, gauss_fn
    bump(s)           C-infinity bump exp(1 - 1/(1 - r^2)), random centre in
                      [-1, 1]^d and radius in [1, 2] (seed s)
    randnn(s)         nonnegative random step-ish signal used by the CZ runs

At a jump, sampled values take the midpoint of the one-sided limits. This
keeps Riemann sums second order and matches pointwise Fourier convergence.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import LineGrid, LineSignal, TorusGrid, TorusSignal
from .rng import Xorshift64Star

_KEY = re.compile(r"^\s*([a-z_][a-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def parse_key(key: str) -> tuple[str, list[float]]:
    m = _KEY.match(key)
    if not m:
        raise ValueError(f"malformed function key {key!r}; expected name or name(a, b, ...)")
    name, args = m.group(1), m.group(2)
    vals: list[float] = []
    if args and args.strip():
        for a in args.split(","):
            try:
                vals.append(float(a))
            except ValueError:
                raise ValueError(f"non-numeric argument {a.strip()!r} in {key!r}") from None
    return name, vals


def c_d(d: int) -> float:
    """Gamma((d+1)/2) / pi^((d+1)/2); c_1 = 1/pi."""
    return math.gamma((d + 1) / 2) / math.pi ** ((d + 1) / 2)


# ---------------------------------------------------------------------------
# torus
# ---------------------------------------------------------------------------


def _sawtooth(t):
    v = np.array(t, dtype=float)
    v[np.isclose(np.abs(v), np.pi)] = 0.0
    return v


def _square(t):
    v = np.sign(t).astype(float)
    v[np.isclose(np.abs(t), np.pi)] = 0.0
    return v


def trigpoly_coefficients(seed: int, degree: int) -> np.ndarray:
    """Coefficients for n = -degree..degree."""
    return Xorshift64Star(seed).complex_normals(2 * degree + 1) / math.sqrt(2)


def _torus_builder(name: str, args: list[float]) -> Callable[[np.ndarray], np.ndarray]:
    def need(k):
        if len(args) != k:
            raise ValueError(f"torus function {name!r} takes {k} argument(s), got {len(args)}")

    if name == "sawtooth":
        need(0)
        return _sawtooth
    if name == "triangle":
        need(0)
        return np.abs
    if name == "square":
        need(0)
        return _square
    if name == "exp":
        need(0)

        def _exp(t):
            v = np.exp(np.asarray(t, dtype=float))
            v[np.isclose(np.abs(t), np.pi)] = np.cosh(np.pi)
            return v

        return _exp
    if name == "indicator":
        need(2)
        a, b = args
        if not -np.pi <= a < b <= np.pi:
            raise ValueError("indicator(a, b) needs -pi <= a < b <= pi")

        def _ind(t):
            t = np.asarray(t, dtype=float)
            v = ((t > a) & (t < b)).astype(float)
            v[np.isclose(t, a) | np.isclose(t, b)] = 0.5
            return v

        return _ind
    if name == "lacunary":
        need(2)
        alpha, big_k = args[0], int(args[1])
        return lambda t: sum(2.0 ** (-k * alpha) * np.exp(1j * 2 ** k * t) for k in range(big_k + 1))
    if name == "holder":
        need(1)
        alpha = args[0]
        if not 0 < alpha < 1:
            raise ValueError("holder(alpha) needs 0 < alpha < 1")
        return lambda t: np.abs(t) ** alpha
    if name == "trigpoly":
        need(2)
        seed, deg = int(args[0]), int(args[1])
        coef = trigpoly_coefficients(seed, deg)
        ns = np.arange(-deg, deg + 1)
        return lambda t: np.exp(1j * np.multiply.outer(t, ns)) @ coef
    raise KeyError(name)


TORUS_KEYS = ("exp", "holder", "indicator", "lacunary", "sawtooth", "spike", "square", "triangle", "trigpoly")


def torus_function(key: str, n: int) -> TorusSignal:
    name, args = parse_key(key)
    grid = TorusGrid(n)
    if name == "spike":
        if len(args) != 2:
            raise ValueError("spike(seed, K) takes 2 arguments")
        rng = Xorshift64Star(int(args[0]))
        v = np.zeros(n)
        for _ in range(int(args[1])):
            v[rng.integers(0, n)] += n  # unit normalized mass
        return TorusSignal(grid, v)
    try:
        f = _torus_builder(name, args)
    except KeyError:
        raise KeyError(_unknown(name, TORUS_KEYS)) from None
    return TorusSignal(grid, np.asarray(f(grid.nodes), dtype=complex))


# ---------------------------------------------------------------------------
# line
# ---------------------------------------------------------------------------


def _sinc(x):
    return np.sinc(np.asarray(x) / np.pi)


def _box(x):
    a = np.abs(x)
    return np.where(a < 1, 1.0, 0.0) + np.where(np.isclose(a, 1.0, rtol=0, atol=1e-12), 0.5, 0.0)


def _prod(fn, xs):
    out = fn(xs[0])
    for x in xs[1:]:
        out = out * fn(x)
    return out


def _r2(xs):
    return sum(np.asarray(x, dtype=float) ** 2 for x in xs)


@dataclass(frozen=True)
class ClosedFormEntry:
    name: str
    spatial: Callable
    spectral: Callable
    dim: int


def _entries(d: int) -> dict[str, ClosedFormEntry]:
    cd = c_d(d)
    tp = (2 * np.pi) ** d
    e = {
        "box": (lambda *x: _prod(_box, x), lambda *k: _prod(lambda s: 2 * _sinc(s), k)),
        "tent": (
            lambda *x: _prod(lambda s: np.maximum(1 - np.abs(s), 0.0), x),
            lambda *k: _prod(lambda s: _sinc(s / 2) ** 2, k),
        ),
        "exp_abs": (
            lambda *x: np.exp(-np.sqrt(_r2(x))),
            lambda *k: tp * cd / (1 + _r2(k)) ** ((d + 1) / 2),
        ),
        "gaussian": (
            lambda *x: np.exp(-_r2(x) / 2),
            lambda *k: (2 * np.pi) ** (d / 2) * np.exp(-_r2(k) / 2),
        ),
        "dirichlet_fn": (
            lambda *x: _prod(lambda s: _sinc(s) / np.pi, x),
            lambda *k: _prod(_box, k),
        ),
        "fejer_fn": (
            lambda *x: _prod(lambda s: _sinc(s / 2) ** 2 / (2 * np.pi), x),
            lambda *k: _prod(lambda s: np.maximum(1 - np.abs(s), 0.0), k),
        ),
        "poisson_fn": (
            lambda *x: cd / (1 + _r2(x)) ** ((d + 1) / 2),
            lambda *k: np.exp(-np.sqrt(_r2(k))),
        ),
        "gauss_fn": (
            lambda *x: (2 * np.pi) ** (-d / 2) * np.exp(-_r2(x) / 2),
            lambda *k: np.exp(-_r2(k) / 2),
        ),
    }
    return {k: ClosedFormEntry(k, s, f, d) for k, (s, f) in e.items()}


CLOSED_FORMS = {1: _entries(1), 2: _entries(2)}
LINE_KEYS = tuple(sorted(list(CLOSED_FORMS[1]) + ["bump", "randnn"]))


def closed_form_entry(name: str, d: int = 1) -> ClosedFormEntry:
    if d not in CLOSED_FORMS:
        raise ValueError("only d = 1 or 2 is supported")
    try:
        return CLOSED_FORMS[d][name]
    except KeyError:
        raise KeyError(_unknown(name, tuple(CLOSED_FORMS[d]))) from None


def bump_function(seed: int, d: int = 1) -> Callable:
    rng = Xorshift64Star(seed)
    centre = [2 * rng.uniform() - 1 for _ in range(d)]
    radius = 1 + rng.uniform()

    def f(*xs):
        r2 = sum((np.asarray(x, dtype=float) - c) ** 2 for x, c in zip(xs, centre)) / radius**2
        out = np.zeros_like(r2)
        inside = r2 < 1
        out[inside] = np.exp(1 - 1 / (1 - r2[inside]))
        return out

    return f


def randnn_values(seed: int, grid: LineGrid, pieces: int = 12) -> np.ndarray:
    """Nonnegative sum of random boxes and spikes on the middle half of the grid."""
    rng = Xorshift64Star(seed)
    v = np.zeros(grid.shape)
    n = grid.size
    lo, hi = n // 4, 3 * n // 4
    for _ in range(pieces):
        idx = []
        for _ in range(grid.dim):
            a = rng.integers(lo, hi)
            w = rng.integers(1, max(2, n // 16))
            idx.append(slice(a, min(a + w, hi)))
        v[tuple(idx)] += 10.0 * rng.uniform() ** 3
    for _ in range(3):
        idx = tuple(rng.integers(lo, hi) for _ in range(grid.dim))
        v[idx] += 5.0 / grid.cell * rng.uniform()
    return v


def line_function(key: str, grid: LineGrid) -> LineSignal:
    name, args = parse_key(key)
    if name == "bump":
        seed = int(args[0]) if args else 0
        return LineSignal.from_function(bump_function(seed, grid.dim), grid)
    if name == "randnn":
        seed = int(args[0]) if args else 0
        return LineSignal(grid, randnn_values(seed, grid))
    if args:
        raise ValueError(f"line function {name!r} takes no arguments")
    entry = closed_form_entry(name, grid.dim)
    return LineSignal.from_function(entry.spatial, grid)


def _unknown(name, keys) -> str:
    import difflib

    near = difflib.get_close_matches(name, keys, n=1)
    hint = f"; did you mean {near[0]!r}?" if near else ""
    return f"unknown function {name!r}{hint} (known: {', '.join(sorted(keys))})"

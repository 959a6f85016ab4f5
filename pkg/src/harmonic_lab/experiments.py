"""
Named, seeded experiments behind the command line.

Each experiment takes a fully resolved :class:`ExperimentConfig` and returns a
:class:`ResultTable`. Acceptance experiments report one row per check with
columns (check, value, limit, relation, pass); ``relation`` says whether the
value must be "<=" or ">=" the limit.
"""

from __future__ import annotations

import csv
import dataclasses
import difflib
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .catalog import CLOSED_FORMS, LINE_KEYS, TORUS_KEYS, closed_form_entry, line_function, parse_key, torus_function
from .grid import (
    LineGrid,
    LineSignal,
    TorusGrid,
    TorusSignal,
    dft_analyze,
    dft_line,
    dft_synthesize,
    idft_line,
    lp_norm,
)
from .line import convolve_line, default_grid
from .maximal import (
    cz_decompose,
    cz_decompose_torus,
    cz_properties,
    hl_maximal,
    torus_maximal,
    weak_norm_report,
)
from .rng import Xorshift64Star
from .sampling import (
    five_sinc_signal,
    cosecant_series,
    poisson_kernel_periodization_error,
    poisson_summation_residual,
    sample,
    sinc_reconstruct,
    theta,
    theta_equation_residual,
)
from .singular import (
    partial_sum_identity_check,
    riesz_pv,
    riesz_transform,
    spectral_laplacian,
    spectral_partial,
)
from .torus import (
    METHODS,
    TorusKernelSpec,
    anti_self_adjoint_defect,
    convergence_experiment,
    hausdorff_young_torus,
    hilbert_torus,
    hilbert_torus_pv,
    jump_experiment,
    kernel_axioms,
    kernel_eval,
    kernel_series,
    loglog_slope,
    partial_sum,
    partial_sum_via_projection,
)
from .uncertainty import heisenberg_report, lp_interpolation_residual, young_residual


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


# ---------------------------------------------------------------------------
# configuration and schedules
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """
    One experiment invocation. ``None`` fields are filled from the
    experiment's documented defaults by :func:`resolve` before serialization.
    """

    experiment: str
    n: int | None = None
    half_width: float | None = None
    dim: int | None = None
    function: str | None = None
    method: str | None = None
    schedule: Any = None
    seed: int | None = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str | None = None

    def to_dict(self) -> dict:
        return _jsonable(dataclasses.asdict(self))

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        names = [f.name for f in dataclasses.fields(cls)]
        unknown = [k for k in doc if k not in names]
        if unknown:
            raise ConfigError("; ".join(f"unknown config field {k!r}{_suggest(k, names)}" for k in unknown))
        if "experiment" not in doc:
            raise ConfigError("config needs an 'experiment' field")
        doc = dict(doc)
        doc["params"] = dict(doc.get("params") or {})
        return cls(**doc)


def _suggest(key: str, keys) -> str:
    near = difflib.get_close_matches(key, list(keys), n=1)
    return f" (did you mean {near[0]!r}?)" if near else ""


def _jsonable(x):
    """Non-finite floats become the strings 'inf', '-inf', 'nan' so JSON stays standard."""
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, np.integer):
        return int(x)
    return x


def _as_float(x) -> float:
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "-inf", "infinity", "nan"):
        return float(x)
    return float(x)


def expand_schedule(spec) -> list:
    """
    Expand a schedule: a list of values, {start, stop, step} (inclusive),
    {dyadic: [lo, hi]} (lo, 2 lo, ..., hi) or {geom: [lo, hi, count]}.
    """
    if isinstance(spec, (list, tuple)):
        if not spec:
            raise ConfigError("schedule list is empty")
        return [v if isinstance(v, str) else _as_float(v) if not isinstance(v, int) else v for v in spec]
    if not isinstance(spec, dict) or len(spec) == 0:
        raise ConfigError("schedule must be a list, {start, stop, step}, {dyadic: [lo, hi]} or {geom: [lo, hi, count]}")
    if "dyadic" in spec:
        lo, hi = (int(v) for v in spec["dyadic"])
        if lo < 1 or hi < lo or lo & (lo - 1) or hi & (hi - 1):
            raise ConfigError(f"dyadic schedule needs powers of two 1 <= lo <= hi, got {spec['dyadic']}")
        out, v = [], lo
        while v <= hi:
            out.append(v)
            v *= 2
        return out
    if "geom" in spec:
        lo, hi, count = spec["geom"]
        lo, hi, count = float(lo), float(hi), int(count)
        if not (0 < lo <= hi) or count < 1:
            raise ConfigError(f"geom schedule needs 0 < lo <= hi and count >= 1, got {spec['geom']}")
        return np.geomspace(lo, hi, count).tolist()
    if {"start", "stop", "step"} <= set(spec):
        a, b, s = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        if not s > 0 or b < a:
            raise ConfigError(f"range schedule needs step > 0 and stop >= start, got {spec}")
        count = int(math.floor((b - a) / s + 1e-9)) + 1
        return [round(a + k * s, 12) for k in range(count)]
    raise ConfigError(f"unrecognised schedule {spec!r}; use a list, {{start, stop, step}}, {{dyadic: [lo, hi]}} or {{geom: [lo, hi, count]}}")


# ---------------------------------------------------------------------------
# result tables
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


@dataclass
class ResultTable:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        w = len(self.columns)
        for r in self.rows:
            if len(r) != w:
                raise ValueError(f"row {r!r} has {len(r)} entries, expected {w}")

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    @property
    def passed(self) -> bool:
        """All checks pass (tables without a 'pass' column count as passed)."""
        return "pass" not in self.columns or all(self.column("pass"))

    def data_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    def to_csv(self) -> str:
        head = "".join(
            f"# {k}: {json.dumps(_jsonable(self.metadata[k]), sort_keys=True)}\n" for k in sorted(self.metadata)
        )
        return head + self.data_csv()

    def data_json(self) -> dict:
        return {c: [_jsonable(r[i]) if not isinstance(r[i], (bool, np.bool_)) else bool(r[i]) for r in self.rows] for i, c in enumerate(self.columns)}

    def to_json(self) -> str:
        doc = {"columns": list(self.columns), "data": self.data_json(), "metadata": _jsonable(self.metadata)}
        return json.dumps(doc, sort_keys=True, indent=1)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")


CHECK_COLUMNS = ["check", "value", "limit", "relation", "pass"]


def _check(name: str, value: float, limit: float, relation: str = "<=") -> list:
    value = float(value)
    ok = value <= limit if relation == "<=" else value >= limit
    return [name, value, float(limit), relation, bool(ok and math.isfinite(value))]


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    defaults: dict
    func: Callable
    domain: str = "none"  # which catalog the function key is drawn from
    criterion: int | None = None
    fields: tuple = ()


REGISTRY: dict[str, Experiment] = {}


def _register(name, description, defaults=None, domain="none", criterion=None):
    base = {"n": 0, "half_width": 0.0, "dim": 1, "function": "", "method": "", "schedule": [0], "seed": 0, "params": {}}
    base.update(defaults or {})

    def deco(fn):
        REGISTRY[name] = Experiment(name, description, base, fn, domain, criterion, tuple(defaults or {}))
        return fn

    return deco


def _rng(cfg, i: int) -> Xorshift64Star:
    return Xorshift64Star((int(cfg.seed) * 1_000_003 + i) & ((1 << 64) - 1))


def _sched(cfg) -> list:
    return expand_schedule(cfg.schedule)


def _param(cfg, key):
    return cfg.params[key]


# -- general experiments ----------------------------------------------------


@_register(
    "converge",
    "sup or L^p error of a torus summability mean along a parameter schedule",
    {"n": 16384, "function": "holder(0.5)", "method": "cesaro", "schedule": {"dyadic": [4, 1024]}, "params": {"p": "inf"}},
    domain="torus",
)
def _converge(cfg):
    f = torus_function(cfg.function, cfg.n)
    rows = convergence_experiment(cfg.method, f, _sched(cfg), _as_float(cfg.params["p"]))
    return ResultTable(["param", "error"], [[float(a), float(b)] for a, b in rows])


@_register(
    "theta",
    "theta(s) and its functional-equation residual along a schedule of s",
    {"schedule": {"start": 0.3, "stop": 3.0, "step": 0.1}},
)
def _theta(cfg):
    rows = [[s, theta(s), theta_equation_residual(s)] for s in map(float, _sched(cfg))]
    return ResultTable(["s", "theta", "residual"], rows)


@_register(
    "czd",
    "Calderon-Zygmund decomposition per lambda with a property pass column",
    {"n": 256, "half_width": 8.0, "function": "randnn(0)", "schedule": {"geom": [1.0, 100.0, 5]}},
    domain="line",
)
def _czd(cfg):
    f = line_function(cfg.function, LineGrid(cfg.n, cfg.half_width, cfg.dim))
    rows = []
    for lam in map(float, _sched(cfg)):
        res = cz_decompose(f, lam)
        rep = cz_properties(f, res)
        rows.append([lam, len(res.cubes), rep.total_measure, rep.total_bound, rep.passed, res.to_json()])
    return ResultTable(["lambda", "cubes", "total_measure", "measure_bound", "pass", "summary"], rows)


# -- acceptance experiments -------------------------------------------------


@_register("inversion", "DFT round trips and Parseval/Plancherel on torus and line catalog functions", {"n": 16384}, criterion=1)
def _inversion(cfg):
    rows = []
    keys = ["sawtooth", "triangle", "square", "exp", "holder(0.5)", "trigpoly(1,100)", "spike(3,1)"]
    fs = [(k, torus_function(k, cfg.n)) for k in keys]
    r = _rng(cfg, 0)
    fs.append(("random", TorusSignal(TorusGrid(cfg.n), r.complex_normals(cfg.n))))
    for k, f in fs:
        c = dft_analyze(f)
        back = dft_synthesize(c)
        rows.append(_check(f"torus {k} round trip", np.max(np.abs(back.values - f.values)) / max(1.0, np.max(np.abs(f.values))), 1e-12))
        energy = float(np.mean(np.abs(f.values) ** 2))
        rows.append(_check(f"torus {k} Parseval", abs(energy - np.sum(np.abs(c.coefficients) ** 2)) / energy, 1e-10))
    line_cases = [(name, default_grid(name)) for name in sorted(CLOSED_FORMS[1])]
    line_cases += [("gaussian", LineGrid(256, 8.0, 2)), ("tent", LineGrid(256, 8.0, 2))]
    for name, g in line_cases:
        f = LineSignal.from_function(closed_form_entry(name, g.dim).spatial, g)
        spec = dft_line(f)
        back = idft_line(spec)
        tag = f"line d={g.dim} {name}"
        rows.append(_check(f"{tag} round trip", np.max(np.abs(back.values - f.values)) / max(1.0, np.max(np.abs(f.values))), 1e-12))
        e1 = g.cell * np.sum(np.abs(f.values) ** 2)
        e2 = g.dfreq**g.dim * np.sum(np.abs(spec.values) ** 2) / (2 * np.pi) ** g.dim
        rows.append(_check(f"{tag} Plancherel", abs(e1 - e2) / e1, 1e-10))
    return ResultTable(CHECK_COLUMNS, rows)


@_register("kernel_forms", "torus kernels: closed form against Fourier series, and Fejer as a mean of Dirichlet kernels", {"n": 1024}, criterion=2)
def _kernel_forms(cfg):
    t = TorusGrid(cfg.n).nodes
    rows = []
    for kind, p in [("dirichlet", 7), ("dirichlet", 64), ("fejer", 9), ("fejer", 64), ("poisson", 0.5), ("poisson", 0.9), ("gauss", 0.01), ("gauss", 0.5)]:
        s = TorusKernelSpec(kind, p)
        rows.append(_check(f"{kind}({p}) closed vs series", np.max(np.abs(kernel_eval(s, t) - kernel_series(s, t))), 1e-10))
    for n in (9, 64):
        mean = sum(kernel_eval(TorusKernelSpec("dirichlet", k), t) for k in range(n + 1)) / (n + 1)
        rows.append(_check(f"fejer({n}) vs mean of dirichlet", np.max(np.abs(kernel_eval(TorusKernelSpec("fejer", n), t) - mean)), 1e-10))
    return ResultTable(CHECK_COLUMNS, rows)


# per doubling of n, ||D_n||_1 grows by (4/pi^2) log 2
DIRICHLET_INCREMENT = 4 * math.log(2) / math.pi**2


@_register("dirichlet_log", "growth of the Dirichlet kernel L^1 norm over dyadic n", {"schedule": {"dyadic": [64, 1024]}}, criterion=3)
def _dirichlet_log(cfg):
    ns = [int(v) for v in _sched(cfg)]
    norms = [kernel_axioms(TorusKernelSpec("dirichlet", n)).s2 for n in ns]
    inc = np.diff(norms)
    rows = [[f"||D_{n}||_1", float(v), float("nan"), "info", True] for n, v in zip(ns, norms)]
    rows.append(_check("increment spread max|inc/mean - 1|", np.max(np.abs(inc / inc.mean() - 1)), 0.05))
    rows.append(_check("mean increment vs (4/pi^2) log 2, relative", abs(inc.mean() / DIRICHLET_INCREMENT - 1), 0.05))
    return ResultTable(CHECK_COLUMNS, rows)


@_register(
    "cesaro_rate",
    "log-log slope of the Cesaro sup error for Holder functions",
    {"n": 16384, "method": "cesaro", "schedule": {"dyadic": [16, 1024]}, "params": {"alphas": [0.3, 0.5, 0.7]}},
    criterion=4,
)
def _cesaro_rate(cfg):
    rows = []
    for a in cfg.params["alphas"]:
        f = torus_function(f"holder({a})", cfg.n)
        res = convergence_experiment(cfg.method, f, _sched(cfg), np.inf)
        slope = loglog_slope(res[:, 0], res[:, 1])
        rows.append(_check(f"holder({a}) |slope + alpha|", abs(slope + a), 0.15))
    return ResultTable(CHECK_COLUMNS, rows)


@_register("hilbert_torus", "torus Hilbert transform: p.v. quadrature, H^2 and anti-self-adjointness", {"n": 4096, "function": "trigpoly(7,512)"}, domain="torus", criterion=5)
def _hilbert_torus(cfg):
    f = torus_function(cfg.function, cfg.n)
    g = torus_function("trigpoly(8,512)", cfg.n)
    hf = hilbert_torus(f)
    pv = hilbert_torus_pv(f, 4 * f.grid.spacing)
    hh = hilbert_torus(hf)
    want = -f.values + dft_analyze(f)[0]
    return ResultTable(
        CHECK_COLUMNS,
        [
            _check("multiplier vs p.v. quadrature", np.max(np.abs(pv.values - hf.values)), 1e-6),
            _check("H^2 f + f - f^(0)", np.max(np.abs(hh.values - want)), 1e-12),
            _check("<Hf, g> + <f, Hg>", anti_self_adjoint_defect(f, g), 1e-12),
        ],
    )


def _random_bandlimited_line(r: Xorshift64Star, grid: LineGrid, terms: int = 4, max_freq: float = 5.0) -> LineSignal:
    x = grid.nodes
    v = np.zeros(grid.size, dtype=complex)
    for _ in range(terms):
        c = complex(r.normal(), r.normal())
        x0 = 16 * r.uniform() - 8
        xi = max_freq * (2 * r.uniform() - 1)
        v += c * np.exp(-((x - x0) ** 2) / 2 + 1j * xi * x)
    return LineSignal(grid, v)


@_register(
    "projection_identity",
    "partial sums through modulated Riesz projections, torus and line",
    {"n": 256, "schedule": [10], "params": {"seeds": 50, "degree": 40, "line_n": 1024, "line_half_width": 32.0, "omega": 3.141592653589793}},
    criterion=6,
)
def _projection_identity(cfg):
    worst_t, worst_l = 0.0, 0.0
    m = int(_sched(cfg)[0])
    lg = LineGrid(int(cfg.params["line_n"]), float(cfg.params["line_half_width"]))
    omega = float(cfg.params["omega"])
    for i in range(int(cfg.params["seeds"])):
        seed = (int(cfg.seed) * 1_000_003 + i) & ((1 << 64) - 1)
        f = torus_function(f"trigpoly({seed},{int(cfg.params['degree'])})", cfg.n)
        worst_t = max(worst_t, float(np.max(np.abs(partial_sum_via_projection(f, m).values - partial_sum(f, m).values))))
        worst_l = max(worst_l, partial_sum_identity_check(_random_bandlimited_line(_rng(cfg, i), lg), omega))
    return ResultTable(CHECK_COLUMNS, [_check("torus identity, max over seeds", worst_t, 1e-10), _check("line identity, max over seeds", worst_l, 1e-10)])


@_register(
    "cz_ensemble",
    "Calderon-Zygmund properties on seeded random signals, line (d = 1, 2) and torus",
    {"params": {"seeds": 100, "lambdas": 5}},
    criterion=7,
)
def _cz_ensemble(cfg):
    fails = {1: 0, 2: 0, "torus": 0}
    worst_measure = 0.0
    seeds, nl = int(cfg.params["seeds"]), int(cfg.params["lambdas"])
    for i in range(seeds):
        seed = (int(cfg.seed) * 1_000_003 + i) & ((1 << 64) - 1)
        for d in (1, 2):
            g = LineGrid(256, 8.0) if d == 1 else LineGrid(64, 4.0, 2)
            f = line_function(f"randnn({seed})", g)
            base = lp_norm(f, 1) / (2 * g.half_width) ** d
            for lam in np.geomspace(1.0, 10.0, nl) * base:
                res = cz_decompose(f, lam)
                rep = cz_properties(f, res)
                fails[d] += not rep.passed
                worst_measure = max(worst_measure, rep.total_measure / rep.total_bound - 1)
        r = _rng(cfg, i)
        ft = TorusSignal(TorusGrid(256), np.abs(r.normals(256)) ** 3)
        for lam in np.geomspace(1.5, 20.0, nl) * lp_norm(ft, 1):
            res = cz_decompose_torus(ft, lam)
            fails["torus"] += not cz_properties(ft, res).passed
    return ResultTable(
        CHECK_COLUMNS,
        [
            _check("line d=1 failures", fails[1], 0),
            _check("line d=2 failures", fails[2], 0),
            _check("torus failures", fails["torus"], 0),
            _check("max total measure / (||f||_1 / lambda) - 1", worst_measure, 1e-10),
        ],
    )


@_register("weak11_maximal", "weak (1,1) ratio of the HL maximal function over a spike ensemble (d = 1)", {"n": 2048, "half_width": 16.0, "params": {"seeds": 50}}, criterion=8)
def _weak11(cfg):
    g = LineGrid(cfg.n, cfg.half_width)
    worst = 0.0
    for i in range(int(cfg.params["seeds"])):
        r = _rng(cfg, i)
        v = np.zeros(g.size)
        for _ in range(1 + i % 8):
            v[r.integers(g.size // 8, 7 * g.size // 8)] += 1 / g.spacing
        f = LineSignal(g, v)
        worst = max(worst, weak_norm_report(hl_maximal(f), lp_norm(f, 1)).sup_ratio)
    return ResultTable(CHECK_COLUMNS, [_check("sup lambda |{Mf > lambda}| / ||f||_1", worst, 3.05)])


@_register("majorization", "Fejer and Poisson maximal functions against the Lebesgue maximal function", {"n": 256, "params": {"seeds": 50}}, criterion=9)
def _majorization(cfg):
    wf, wp = -np.inf, -np.inf
    for i in range(int(cfg.params["seeds"])):
        r = _rng(cfg, i)
        f = TorusSignal(TorusGrid(cfg.n), r.normals(cfg.n))
        a = f.abs()
        lmax = torus_maximal("lebesgue", a).values.real
        wf = max(wf, float(np.max(torus_maximal("fejer", f).values.real - 2 * lmax)))
        wp = max(wp, float(np.max(torus_maximal("poisson", a).values.real - lmax)))
    return ResultTable(CHECK_COLUMNS, [_check("max(F*f - 2 L*|f|)", wf, 1e-10), _check("max(P*f - L*f), f >= 0", wp, 1e-10)])


@_register("riesz_d2", "Riesz transforms in d = 2: sum of squares, R1 R2 Laplacian, p.v. form", {"n": 256, "half_width": 12.0, "dim": 2, "params": {"seeds": 10}}, criterion=10)
def _riesz_d2(cfg):
    g = LineGrid(cfg.n, cfg.half_width, 2)
    x1, x2 = g.mesh()
    worst = 0.0
    for i in range(int(cfg.params["seeds"])):
        r = _rng(cfg, i)
        v = np.zeros(g.shape, dtype=complex)
        for _ in range(3):
            c = complex(r.normal(), r.normal())
            a, b = 4 * r.uniform() - 2, 4 * r.uniform() - 2
            k1, k2 = 6 * r.uniform() - 3, 6 * r.uniform() - 3
            v += c * np.exp(-((x1 - a) ** 2 + (x2 - b) ** 2) / 2 + 1j * (k1 * x1 + k2 * x2))
        f = LineSignal(g, v - v.mean())  # mean free on the grid
        s = riesz_transform(riesz_transform(f, 1), 1) + riesz_transform(riesz_transform(f, 2), 2)
        worst = max(worst, float(np.max(np.abs(s.values + f.values))))
    bump = LineSignal(g, np.exp(-(x1**2 + x2**2) / 2))
    lhs = riesz_transform(riesz_transform(spectral_laplacian(bump), 2), 1)
    rhs = spectral_partial(bump, (1, 1))
    mixed = float(np.max(np.abs(lhs.values + rhs.values)))
    gp = LineGrid(512, 6.0, 2)
    y1, y2 = gp.mesh()
    fp = LineSignal(gp, np.exp(-(y1**2 + y2**2) / 2) * np.cos(4 * y1) * np.cos(4 * y2))
    inner = (np.abs(y1) < 3) & (np.abs(y2) < 3)
    pv_err = max(float(np.max(np.abs(riesz_pv(fp, j, 4 * gp.spacing).values - riesz_transform(fp, j).values)[inner])) for j in (1, 2))
    return ResultTable(
        CHECK_COLUMNS,
        [
            _check("sum_j R_j^2 f + f, mean-free signals", worst, 1e-10),
            _check("R1 R2 Laplacian f + d1 d2 f", mixed, 1e-8),
            _check("p.v. vs multiplier, interior nodes", pv_err, 1e-3),
        ],
    )


@_register("sampling", "five-sinc reconstruction from half-integer samples", {"schedule": [64], "params": {"omega": 6.283185307179586}}, criterion=11)
def _sampling(cfg):
    omega = float(cfg.params["omega"])
    n_max = int(_sched(cfg)[0])
    s = sample(five_sinc_signal, omega, n_max)
    x = np.linspace(-4.0, 4.0, 1601)
    rec = sinc_reconstruct(s, x)
    err = float(np.max(np.abs(rec.values - five_sinc_signal(x))))
    nodes = s.indices * s.spacing
    interp = float(np.max(np.abs(sinc_reconstruct(s, nodes).values - s.values)))
    return ResultTable(CHECK_COLUMNS, [_check("max reconstruction error on [-4, 4]", err, 1e-8), _check("interpolation at the samples", interp, 1e-12)])


@_register("poisson_summation", "Poisson summation, Poisson kernel periodization and the theta equation", {"schedule": {"start": 0.3, "stop": 3.0, "step": 0.1}}, criterion=12)
def _poisson_summation(cfg):
    rows = [_check(f"gaussian residual at x = {x:.6g}", poisson_summation_residual("gaussian", x), 1e-12) for x in (0.0, 1.0, math.pi)]
    rows += [_check(f"Pe(P_w) - P_r, w = {w:g}", poisson_kernel_periodization_error(w), 1e-8) for w in (1.0, 2.0, 5.0)]
    rows.append(_check("theta residual, max over schedule", max(theta_equation_residual(float(s)) for s in _sched(cfg)), 1e-12))
    return ResultTable(CHECK_COLUMNS, rows)


@_register("cosecant", "partial sums of 1/(x+n)^2 against pi^2 / sin^2(pi x)", {"schedule": [100, 1000, 10000], "params": {"x": 0.5}}, criterion=13)
def _cosecant(cfg):
    x = float(cfg.params["x"])
    ns = [int(v) for v in _sched(cfg)]
    res = [cosecant_series(x, n) for n in ns]
    rows = [_check(f"error at n_max = {n}", r.error, r.tail_bound) for n, r in zip(ns, res)]
    rows.append(_check(f"error at n_max = {ns[-1]} within 2e-4", res[-1].error, 2e-4))
    slope = loglog_slope(np.array(ns, float), np.array([r.error for r in res]))
    rows.append(_check("|log-log slope + 1|", abs(slope + 1), 0.05))
    return ResultTable(CHECK_COLUMNS, rows)


def _random_admissible(r: Xorshift64Star, grid: LineGrid) -> LineSignal:
    x = grid.nodes
    v = np.zeros(grid.size, dtype=complex)
    for _ in range(1 + r.integers(0, 3)):
        c = complex(r.normal(), r.normal())
        x0 = 6 * r.uniform() - 3
        sig = 0.5 + 1.5 * r.uniform()
        xi = 6 * r.uniform() - 3
        v += c * np.exp(-((x - x0) ** 2) / (2 * sig**2) + 1j * xi * x)
    return LineSignal(grid, v)


@_register("heisenberg", "Heisenberg product: Gaussian equality, tent gap, random ensemble", {"n": 1024, "half_width": 32.0, "params": {"seeds": 1000}}, criterion=14)
def _heisenberg(cfg):
    g = LineGrid(cfg.n, cfg.half_width)
    x = g.nodes
    gauss = heisenberg_report(LineSignal(g, np.exp(-(x**2) / 2)))
    mod = heisenberg_report(LineSignal(g, np.exp(5j * x) * np.exp(-((x - 2) ** 2) / 2)), 2, 5)
    tent = heisenberg_report(LineSignal.from_function(lambda s: np.maximum(1 - np.abs(s), 0), LineGrid(2**16, 16.0)))
    slack = np.inf
    for i in range(int(cfg.params["seeds"])):
        r = _rng(cfg, i)
        f = _random_admissible(r, g)
        a, b = 2 * r.uniform() - 1, 2 * r.uniform() - 1
        slack = min(slack, heisenberg_report(f, a, b).ratio - 1)
    return ResultTable(
        CHECK_COLUMNS,
        [
            _check("gaussian |product / bound - 1|", abs(gauss.ratio - 1), 1e-8),
            _check("modulated shifted gaussian |product / bound - 1|", abs(mod.ratio - 1), 1e-8),
            _check("tent product / bound", tent.ratio, 1.05, ">="),
            _check("min relative slack over the ensemble", slack, -1e-9, ">="),
        ],
    )


INTERPOLATION_TRIPLES = (
    (1.0, 2.0, 0.5),
    (1.0, 4.0, 0.3),
    (1.0, math.inf, 0.5),
    (2.0, 4.0, 0.5),
    (2.0, math.inf, 0.25),
    (1.5, 3.0, 0.6),
    (1.0, 3.0, 0.2),
    (3.0, math.inf, 0.7),
    (4.0 / 3.0, 4.0, 0.5),
)

YOUNG_TRIPLES = ((1.0, 1.0, 1.0), (1.5, 1.0, 1.5), (2.0, 1.0, 2.0), (math.inf, 1.0, math.inf), (2.0, 2.0, math.inf), (4 / 3, 4 / 3, 2.0), (1.5, 1.2, 2.0))


@_register("interpolation", "log-convexity of L^p norms, Young's inequality and Hausdorff-Young on the torus", {"n": 64, "params": {"seeds": 1000}}, criterion=15)
def _interpolation(cfg):
    seeds = int(cfg.params["seeds"])
    c3, yt, hy = np.inf, np.inf, -np.inf
    for i in range(seeds):
        r = _rng(cfg, i)
        f = TorusSignal(TorusGrid(cfg.n), r.complex_normals(cfg.n))
        for p0, p1, th in INTERPOLATION_TRIPLES:
            c3 = min(c3, lp_interpolation_residual(f, p0, p1, th))
        if i < seeds // 5:
            g = TorusSignal(TorusGrid(cfg.n), r.complex_normals(cfg.n))
            for p, q, rr in YOUNG_TRIPLES:
                yt = min(yt, young_residual(f, g, p, q, rr) / (lp_norm(f, p) * lp_norm(g, q)))
            for p in (1.0, 4 / 3, 1.5, 2.0):
                hy = max(hy, hausdorff_young_torus(f, p))
    lg = LineGrid(2048, 32.0)
    x = lg.nodes
    ga = LineSignal(lg, np.exp(-(x**2) / 2))
    gb = LineSignal(lg, np.exp(-((x - 1) ** 2)))
    yl = young_residual(ga, gb, 4 / 3, 4 / 3, 2.0, "line")
    return ResultTable(
        CHECK_COLUMNS,
        [
            _check("min norm interpolation residual", c3, -1e-12, ">="),
            _check("min relative Young residual, torus", yt, -1e-10, ">="),
            _check("Young residual, line gaussians (4/3, 4/3, 2)", yl, -1e-6, ">="),
            _check("max Hausdorff-Young ratio, torus", hy, 1 + 1e-10),
        ],
    )


@_register("jump", "partial sums at a jump against the midpoint of the one-sided limits", {"n": 16384, "function": "sawtooth", "schedule": {"dyadic": [16, 1024]}, "params": {"t_jump": -3.141592653589793}}, domain="torus", criterion=16)
def _jump(cfg):
    f = torus_function(cfg.function, cfg.n)
    res = jump_experiment(f, float(cfg.params["t_jump"]), [int(v) for v in _sched(cfg)])
    errs = res[:, 1]
    rows = [[f"|S_{int(n)} f - midpoint|", float(e), float("nan"), "info", True] for n, e in res]
    rows.append(_check(f"error at n = {int(res[-1, 0])}", errs[-1], 0.05))
    rows.append(_check("max increase along the schedule", float(np.max(np.diff(errs))), 1e-12))
    return ResultTable(CHECK_COLUMNS, rows)


ACCEPTANCE = {e.criterion: e.name for e in REGISTRY.values() if e.criterion is not None}


@_register("determinism", "runs experiments twice and compares their CSV data sections byte for byte", {"schedule": [ACCEPTANCE[k] for k in sorted(ACCEPTANCE)]}, criterion=17)
def _determinism(cfg):
    rows = []
    for name in _sched(cfg):
        if name == "determinism":
            continue
        a = run(ExperimentConfig(str(name), seed=cfg.seed)).data_csv()
        b = run(ExperimentConfig(str(name), seed=cfg.seed)).data_csv()
        rows.append([f"{name} identical data", float(a == b), 1.0, ">=", a == b])
    return ResultTable(CHECK_COLUMNS, rows)


ACCEPTANCE[17] = "determinism"


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def list_experiments(filter: str = "") -> list[tuple[str, str, list]]:
    """Alphabetised (name, description, configurable fields) entries whose name contains ``filter``."""
    out = []
    for name in sorted(REGISTRY):
        if filter in name:
            e = REGISTRY[name]
            out.append((name, e.description, list(e.fields)))
    return out


def resolve(cfg: ExperimentConfig) -> ExperimentConfig:
    """Fill every unset field from the experiment's defaults."""
    if cfg.experiment not in REGISTRY:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}{_suggest(cfg.experiment, REGISTRY)}")
    d = REGISTRY[cfg.experiment].defaults
    vals = {}
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "params":
            merged = json.loads(json.dumps(d["params"]))
            merged.update(v or {})
            vals["params"] = merged
        elif f.name in d and v is None:
            vals[f.name] = json.loads(json.dumps(d[f.name])) if isinstance(d[f.name], (dict, list)) else d[f.name]
        else:
            vals[f.name] = v
    vals["out"] = vals["out"] if vals["out"] is not None else "-"
    vals["format"] = vals["format"] if vals["format"] is not None else "csv"
    return ExperimentConfig(**vals)


def validate(cfg: ExperimentConfig) -> list[str]:
    """All precondition checks without running; an empty list means valid."""
    try:
        cfg = resolve(cfg)
    except ConfigError as e:
        return [str(e)]
    e = REGISTRY[cfg.experiment]
    diags = []
    if not isinstance(cfg.n, int) or cfg.n < 0 or (cfg.n and cfg.n & (cfg.n - 1)):
        diags.append(f"n must be a power of two, got {cfg.n!r}")
    if cfg.dim not in (1, 2):
        diags.append(f"dim must be 1 or 2, got {cfg.dim!r}")
    if e.domain == "line" and not (isinstance(cfg.half_width, (int, float)) and cfg.half_width > 0):
        diags.append(f"half_width must be positive, got {cfg.half_width!r}")
    if not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2**64:
        diags.append(f"seed must be an integer in [0, 2^64), got {cfg.seed!r}")
    if cfg.format not in ("csv", "json"):
        diags.append(f"format must be 'csv' or 'json', got {cfg.format!r}")
    unknown = sorted(set(cfg.params) - set(e.defaults["params"]))
    for k in unknown:
        diags.append(f"unknown param {k!r} for {e.name}{_suggest(k, e.defaults['params'])}")
    try:
        expand_schedule(cfg.schedule)
    except (ConfigError, TypeError, ValueError) as err:
        diags.append(f"schedule: {err}")
    if e.domain in ("torus", "line") and cfg.function:
        keys = TORUS_KEYS if e.domain == "torus" else LINE_KEYS
        try:
            name, _ = parse_key(cfg.function)
            if name not in keys:
                diags.append(f"unknown {e.domain} function {name!r}{_suggest(name, keys)}")
            elif e.domain == "torus":
                torus_function(cfg.function, 64)
            else:
                line_function(cfg.function, LineGrid(64, 4.0, cfg.dim if cfg.dim in (1, 2) else 1))
        except (KeyError, ValueError) as err:
            diags.append(f"function {cfg.function!r}: {err}")
    if cfg.experiment == "converge" and cfg.method not in METHODS:
        diags.append(f"unknown method {cfg.method!r}{_suggest(str(cfg.method), METHODS)}; expected one of {', '.join(METHODS)}")
    if cfg.experiment == "determinism":
        for name in expand_schedule(cfg.schedule) if not diags else []:
            if name not in REGISTRY:
                diags.append(f"unknown experiment {name!r} in schedule{_suggest(str(name), REGISTRY)}")
    return diags


def run(cfg: ExperimentConfig) -> ResultTable:
    """Resolve, validate and run; identical configs give identical data."""
    cfg = resolve(cfg)
    diags = validate(cfg)
    if diags:
        raise ConfigError("; ".join(diags))
    t0 = time.perf_counter()
    table = REGISTRY[cfg.experiment].func(cfg)
    table.metadata = {"config": cfg.to_dict(), "version": __version__, "wall_clock": time.perf_counter() - t0}
    return table

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import sici

from conftest import random_torus, seeds
from harmonic_lab.catalog import torus_function, trigpoly_coefficients
from harmonic_lab.grid import TorusGrid, TorusSignal, dft_analyze, inner, lp_norm
from harmonic_lab.torus import (
    CoeffSequence,
    TorusKernelSpec,
    anti_self_adjoint_defect,
    coefficient_by_difference,
    convolve_torus,
    decay_exponent,
    dini_integral,
    hausdorff_young_torus,
    hilbert_torus,
    hilbert_torus_pv,
    jump_experiment,
    kernel_axioms,
    kernel_eval,
    kernel_series,
    kernel_signal,
    partial_sum,
    partial_sum_via_projection,
    riesz_projection_torus,
    seq_convolve,
    summability_mean,
)

# (1/2pi) int |D_n| by adaptive quadrature between consecutive zeros of
# sin((n + 1/2) t), computed once with scipy.integrate.quad (epsrel 1e-13)
DIRICHLET_L1_ORACLE = {
    64: 2.959039774806268,
    128: 3.238387283563246,
    256: 3.5185198589479842,
    512: 3.7990465888970317,
    1024: 4.079770803324291,
}


def _sup(f: TorusSignal) -> float:
    return float(np.max(np.abs(f.values)))


def _exp_signal(j, n=64):
    return TorusSignal.from_function(lambda t: np.exp(1j * j * t), n)


# ---------------------------------------------------------------- kernels


def test_kernel_values_at_zero():
    assert kernel_eval(TorusKernelSpec("dirichlet", 5), 0.0) == 11
    assert kernel_eval(TorusKernelSpec("fejer", 9), 0.0) == 10
    assert kernel_eval(TorusKernelSpec("poisson", 0.5), 0.0) == pytest.approx(3.0, rel=1e-15)


@pytest.mark.parametrize(
    "kind,param",
    [("dirichlet", -1), ("dirichlet", 1.5), ("fejer", -2), ("poisson", 1.0), ("poisson", 0.0), ("gauss", 0.0), ("heat", 1)],
)
def test_kernel_spec_rejects_bad_params(kind, param):
    with pytest.raises(ValueError):
        TorusKernelSpec(kind, param)


@pytest.mark.parametrize(
    "spec",
    [
        TorusKernelSpec("dirichlet", 0),
        TorusKernelSpec("dirichlet", 17),
        TorusKernelSpec("fejer", 1),
        TorusKernelSpec("fejer", 30),
        TorusKernelSpec("poisson", 0.3),
        TorusKernelSpec("poisson", 0.9),
        TorusKernelSpec("gauss", 0.05),
        TorusKernelSpec("gauss", 2.0),
    ],
)
def test_closed_form_matches_series(spec):
    t = np.linspace(-np.pi, np.pi, 301)
    k = kernel_eval(spec, t)
    assert np.max(np.abs(k - kernel_series(spec, t))) <= 1e-10 * max(1.0, np.max(np.abs(k)))


@given(st.integers(0, 40))
def test_fejer_is_mean_of_dirichlets(n):
    t = np.linspace(-np.pi, np.pi, 97)
    mean = sum(kernel_eval(TorusKernelSpec("dirichlet", k), t) for k in range(n + 1)) / (n + 1)
    assert np.allclose(kernel_eval(TorusKernelSpec("fejer", n), t), mean, atol=1e-11)


@pytest.mark.parametrize(
    "spec", [TorusKernelSpec("fejer", 12), TorusKernelSpec("poisson", 0.7), TorusKernelSpec("gauss", 0.1)]
)
def test_good_kernels_are_positive(spec):
    assert np.all(kernel_eval(spec, np.linspace(-np.pi, np.pi, 1001)) >= 0)


def test_dirichlet_takes_negative_values():
    assert np.min(kernel_eval(TorusKernelSpec("dirichlet", 4), np.linspace(-np.pi, np.pi, 1001))) < 0


@pytest.mark.parametrize("n", [0, 3, 20])
def test_fejer_axioms(n):
    r = kernel_axioms(TorusKernelSpec("fejer", n), deltas=[0.5])
    assert r.s1 == pytest.approx(1.0, abs=1e-12)
    assert r.s2 == pytest.approx(1.0, abs=1e-12)


def test_dirichlet_l1_norm_matches_quadrature():
    for n, want in DIRICHLET_L1_ORACLE.items():
        assert kernel_axioms(TorusKernelSpec("dirichlet", n)).s2 == pytest.approx(want, rel=1e-4)


def test_dirichlet_l1_increments_approach_log_constant():
    c = 4 * math.log(2) / math.pi**2
    ns = sorted(DIRICHLET_L1_ORACLE)
    s2 = {n: kernel_axioms(TorusKernelSpec("dirichlet", n)).s2 for n in ns}
    for lo, hi in zip(ns[:-1], ns[1:]):
        assert abs(s2[hi] - s2[lo] - c) <= 0.05 * c
    # the mean value stays exactly one
    assert kernel_axioms(TorusKernelSpec("dirichlet", 64)).s1 == pytest.approx(1.0, abs=1e-12)


def test_poisson_tail_sup_decreases():
    rs = [0.5, 0.7, 0.9, 0.95, 0.99]
    s4 = [kernel_axioms(TorusKernelSpec("poisson", r), deltas=[0.5]).s4[0.5] for r in rs]
    assert all(b < a for a, b in zip(s4[:-1], s4[1:]))


def test_axioms_reject_bad_delta():
    with pytest.raises(ValueError):
        kernel_axioms(TorusKernelSpec("fejer", 3), deltas=[4.0])


# ---------------------------------------------------------------- convolution and means


@given(seeds)
def test_convolve_with_constant_gives_mean(seed):
    f = random_torus(seed, 64)
    one = TorusSignal(f.grid, np.ones(64))
    assert np.allclose(convolve_torus(f, one).values, dft_analyze(f)[0], atol=1e-13)


@given(seeds, st.integers(0, 31))
def test_convolve_with_dirichlet_is_partial_sum(seed, n):
    f = random_torus(seed, 64)
    d = kernel_signal(TorusKernelSpec("dirichlet", n), 64)
    assert np.allclose(convolve_torus(f, d).values, partial_sum(f, n).values, atol=1e-11)


@given(seeds, seeds, st.sampled_from([1.0, 2.0, 4.0, np.inf]))
def test_young_torus(s1, s2, p):
    f, g = random_torus(s1, 128), random_torus(s2, 128)
    assert lp_norm(convolve_torus(f, g), p) <= lp_norm(f, p) * lp_norm(g, 1) * (1 + 1e-12)


def test_convolve_rejects_mismatched_grids():
    with pytest.raises(ValueError):
        convolve_torus(random_torus(0, 32), random_torus(0, 64))


@given(st.integers(0, 12), st.integers(0, 19), st.integers(1, 4))
def test_partial_sum_reproduces_low_degree(deg, extra, seed):
    f = torus_function(f"trigpoly({seed},{deg})", 64)
    assert np.allclose(partial_sum(f, deg + extra).values, f.values, atol=1e-12)
    if deg > 0:
        assert not np.allclose(partial_sum(f, deg - 1).values, f.values, atol=1e-12)


def test_classical_means_on_exponentials():
    f = _exp_signal(1)
    assert np.allclose(summability_mean("cesaro", 1, f).values, 0.5 * f.values, atol=1e-14)
    for j in (-3, 0, 2, 5):
        g = _exp_signal(j)
        assert np.allclose(summability_mean("abel", 0.6, g).values, 0.6 ** abs(j) * g.values, atol=1e-14)
        assert np.allclose(summability_mean("gauss", 0.2, g).values, math.exp(-0.2 * j * j) * g.values, atol=1e-14)


def test_means_reject_bad_params():
    f = _exp_signal(1, 16)
    for method, param in [("partial", 8), ("cesaro", 9), ("partial", 1.5), ("abel", 1.0), ("gauss", 0.0), ("riemann", 1)]:
        with pytest.raises(ValueError):
            summability_mean(method, param, f)


# ---------------------------------------------------------------- coefficient decay


@pytest.mark.parametrize(
    "key,n,want,tol",
    [("sawtooth", 4096, -1.0, 0.1), ("triangle", 2**16, -2.0, 0.1), ("lacunary(0.5,10)", 4096, -0.5, 0.05)],
)
def test_decay_exponents(key, n, want, tol):
    assert decay_exponent(torus_function(key, n)) == pytest.approx(want, abs=tol)


def test_decay_exponent_needs_data():
    with pytest.raises(ValueError):
        decay_exponent(torus_function("sawtooth", 128))
    with pytest.raises(ValueError):
        decay_exponent(TorusSignal(TorusGrid(256), np.zeros(256)))


@given(seeds, st.sampled_from([1, 2, 4, 8, 32]))
def test_coefficient_by_difference(seed, n):
    f = random_torus(seed, 256)
    assert coefficient_by_difference(f, n) == pytest.approx(dft_analyze(f)[n], abs=1e-13)
    assert coefficient_by_difference(f, -n) == pytest.approx(dft_analyze(f)[-n], abs=1e-13)


def test_coefficient_by_difference_needs_alignment():
    with pytest.raises(ValueError):
        coefficient_by_difference(random_torus(0, 64), 3)


# ---------------------------------------------------------------- Dini integral


def test_dini_smooth_function_converges():
    f = TorusSignal.from_function(np.cos, 2**14)
    vals = [dini_integral(f, 0.0, eps) for eps in (1e-1, 1e-2, 1e-3)]
    assert abs(vals[2] - vals[1]) < 1e-4
    # exact integral of |cos tau - 1| / |tau| over (-pi, pi) is 2 Cin(pi)
    cin = np.euler_gamma + math.log(math.pi) - sici(math.pi)[1]
    assert vals[2] == pytest.approx(2 * cin, rel=1e-3)


def test_dini_jump_grows_logarithmically():
    f = torus_function("square", 2**14)
    # at the jump t0 = 0 the difference is about 1 on each side
    for eps in (1e-2, 1e-3):
        got = dini_integral(f, 0.0, eps)
        assert got == pytest.approx(2 * math.log(math.pi / eps), rel=0.02)


def test_dini_holder_is_finite():
    f = torus_function("holder(0.5)", 2**14)
    vals = [dini_integral(f, 0.0, eps) for eps in (1e-2, 1e-3)]
    # integral of |tau|^(1/2) / |tau| is 4 sqrt(pi)
    assert vals[1] == pytest.approx(4 * math.sqrt(math.pi), rel=0.05)
    assert vals[1] - vals[0] < 0.5


def test_dini_rejects_bad_eps():
    with pytest.raises(ValueError):
        dini_integral(torus_function("square", 64), 0.0, 1e-4)


# ---------------------------------------------------------------- Wiener algebra


@given(seeds)
def test_seq_convolve_identity(seed):
    a = CoeffSequence.from_spectrum(dft_analyze(random_torus(seed, 16)))
    one = CoeffSequence.from_dict({0: 1.0})
    b = seq_convolve(a, one)
    assert all(b[n] == pytest.approx(a[n], abs=1e-15) for n in range(-8, 8))


@given(st.integers(0, 50), st.integers(0, 50))
def test_seq_convolve_is_coefficients_of_product(s1, s2):
    f = torus_function(f"trigpoly({s1},5)", 64)
    g = torus_function(f"trigpoly({s2},6)", 64)
    a = CoeffSequence(-5, trigpoly_coefficients(s1, 5))
    b = CoeffSequence(-6, trigpoly_coefficients(s2, 6))
    prod = dft_analyze(TorusSignal(f.grid, f.values * g.values))
    c = seq_convolve(a, b)
    assert np.allclose(c.to_spectrum(64).coefficients, prod.coefficients, atol=1e-12)
    assert c.l1() <= a.l1() * b.l1() * (1 + 1e-12)


def test_coeff_sequence_from_dict_and_bounds():
    a = CoeffSequence.from_dict({-2: 1.0, 1: 2j})
    assert list(a.indices) == [-2, -1, 0, 1]
    assert a[1] == 2j and a[5] == 0
    assert a.l1() == 3.0
    with pytest.raises(ValueError):
        a.to_spectrum(2)


# ---------------------------------------------------------------- Hilbert transform


def test_hilbert_on_trig_functions():
    n = 64
    c = TorusSignal.from_function(np.cos, n)
    s = TorusSignal.from_function(np.sin, n)
    assert np.allclose(hilbert_torus(c).values, s.values, atol=1e-14)
    assert np.allclose(hilbert_torus(s).values, -c.values, atol=1e-14)
    one = TorusSignal(c.grid, np.ones(n))
    assert np.allclose(hilbert_torus(one).values, 0, atol=1e-15)


@given(seeds)
def test_hilbert_squared(seed):
    f = random_torus(seed, 128)
    hh = hilbert_torus(hilbert_torus(f))
    assert np.allclose(hh.values, -f.values + dft_analyze(f)[0], atol=1e-12)


@given(seeds, seeds)
def test_hilbert_is_anti_self_adjoint(s1, s2):
    assert anti_self_adjoint_defect(random_torus(s1, 128), random_torus(s2, 128)) <= 1e-12


@given(seeds)
def test_hilbert_is_l2_contraction(seed):
    f = random_torus(seed, 128)
    assert lp_norm(hilbert_torus(f), 2) <= lp_norm(f, 2) * (1 + 1e-13)
    g = TorusSignal(f.grid, f.values - dft_analyze(f)[0])
    assert lp_norm(hilbert_torus(g), 2) == pytest.approx(lp_norm(g, 2), rel=1e-12)


def test_hilbert_l2_strict_when_mean_nonzero():
    f = TorusSignal.from_function(lambda t: 1 + np.cos(t), 32)
    assert lp_norm(hilbert_torus(f), 2) < lp_norm(f, 2) - 0.1


def test_pv_quadrature_matches_multiplier():
    f = torus_function("trigpoly(3,7)", 4096)
    pv = hilbert_torus_pv(f, 8 * f.grid.spacing)
    assert _sup(pv - hilbert_torus(f)) <= 1e-6


def test_pv_of_constant_is_zero():
    f = TorusSignal(TorusGrid(512), np.full(512, 2.5))
    assert _sup(hilbert_torus_pv(f, 4 * f.grid.spacing)) <= 1e-12


def test_pv_of_indicator_matches_closed_form():
    a, b = -1.0, 1.5
    n = 2**12
    f = torus_function(f"indicator({a},{b})", n)
    t = f.grid.nodes
    away = (np.abs(t - a) > 0.2) & (np.abs(t - b) > 0.2)
    closed = np.log(np.abs(np.sin((t - a) / 2) / np.sin((t - b) / 2))) / np.pi
    pv = hilbert_torus_pv(f, 4 * f.grid.spacing, near_field=False)
    assert np.max(np.abs(pv.values[away] - closed[away])) <= 2e-3
    fine = torus_function(f"indicator({a},{b})", 2**16)
    mult = hilbert_torus(fine).values[:: 2**16 // n]
    assert np.max(np.abs(mult[away] - closed[away])) <= 2e-3


def test_pv_rejects_off_grid_eps():
    f = random_torus(0, 64)
    with pytest.raises(ValueError):
        hilbert_torus_pv(f, 0.5 * f.grid.spacing)
    with pytest.raises(ValueError):
        hilbert_torus_pv(f, np.pi)


# ---------------------------------------------------------------- Riesz projection


@pytest.mark.parametrize("j", [-3, -1, 0, 1, 7])
def test_riesz_projection_on_exponentials(j):
    f = _exp_signal(j)
    want = f.values if j >= 0 else 0 * f.values
    assert np.allclose(riesz_projection_torus(f).values, want, atol=1e-14)


@given(st.integers(0, 200), st.integers(0, 40))
def test_partial_sum_via_projection(seed, m):
    # degree 20 keeps every modulated copy inside the grid band
    f = torus_function(f"trigpoly({seed},20)", 128)
    got = partial_sum_via_projection(f, m)
    assert _sup(got - partial_sum(f, m)) <= 1e-12 * max(1.0, _sup(f))


# ---------------------------------------------------------------- inequalities


@given(seeds, st.sampled_from([1.0, 4 / 3, 1.5, 2.0]))
def test_hausdorff_young_torus(seed, p):
    assert hausdorff_young_torus(random_torus(seed, 128), p) <= 1 + 1e-12


def test_hausdorff_young_equality_for_exponential():
    assert hausdorff_young_torus(_exp_signal(3), 1.5) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        hausdorff_young_torus(_exp_signal(3), 3.0)


def test_localization_away_from_support():
    # indicator(1, 2) vanishes near t0 = 0, so S_n f(0) -> 0
    n = 2**14
    f = torus_function("indicator(1,2)", n)
    j = n // 2
    vals = [abs(partial_sum(f, k).values[j]) for k in (16, 64, 256, 1024)]
    assert all(b < a for a, b in zip(vals[:-1], vals[1:]))
    assert vals[-1] < 1e-3


def test_jump_experiment_converges_to_midpoint():
    rows = jump_experiment(torus_function("exp", 16384), -np.pi, [16, 64, 256, 1024])
    assert rows.shape == (4, 2)
    assert np.all(np.diff(rows[:, 1]) < 0)
    assert rows[-1, 1] < 0.01

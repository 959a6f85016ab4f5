import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import comb

from conftest import seeds
from harmonic_lab.catalog import closed_form_entry
from harmonic_lab.grid import LineGrid, LineSignal, dft_analyze, inner, lp_norm
from harmonic_lab.rng import Xorshift64Star
from harmonic_lab.sampling import (
    POISSON_QUALIFYING,
    SampleSet,
    bandlimited_growth,
    cosecant_series,
    five_sinc_signal,
    gauss_kernel_line,
    periodize,
    poisson_kernel_periodization_error,
    poisson_summation_residual,
    pw_project,
    sample,
    sinc,
    sinc_reconstruct,
    theta,
    theta_equation_residual,
)
from harmonic_lab.torus import convolve_torus


def _fast_decay_series(omega, coeffs, centre=0):
    """
    x -> sum_n a_n sinc(w x - pi (n - centre)).

    When a_n is a multiple of binomial(k, n), the first k moments of
    (-1)^n a_n vanish, the function decays like |x|^-(k+1) and its spectrum
    vanishes to order k at +-w.
    """
    a = np.asarray(coeffs, dtype=float)
    ns = np.arange(a.size) - centre

    def f(x):
        x = np.asarray(x, dtype=float)
        return sum(c * sinc(omega * x - np.pi * n) for c, n in zip(a, ns))

    return f, ns


def _smooth_band_coeffs(seed, k=8, terms=6):
    r = Xorshift64Star(seed)
    return np.convolve(r.normals(terms), comb(k, np.arange(k + 1)))


# ---------------------------------------------------------------- sample sets


def test_sinc_convention():
    assert sinc(0.0) == 1.0
    assert sinc(np.pi) == pytest.approx(0.0, abs=1e-16)
    assert sinc(1.0) == pytest.approx(math.sin(1.0))


def test_sample_of_sinc_is_delta():
    s = sample(lambda x: sinc(3.0 * x), 3.0, 10)
    want = np.zeros(21)
    want[10] = 1
    assert np.allclose(s.values, want, atol=1e-15)


def test_sample_cosine():
    s = sample(np.cos, 2.0, 4)
    assert np.allclose(s.values.real, [1, 0, -1, 0, 1, 0, -1, 0, 1], atol=1e-15)


def test_sample_five_sinc_signal():
    s = sample(five_sinc_signal, 2 * np.pi, 6)
    assert [s[n] for n in range(-2, 3)] == pytest.approx([-1, 2, 3, 2, 1], abs=1e-15)
    assert all(abs(s[n]) <= 1e-15 for n in (-6, -5, -4, -3, 3, 4, 5, 6))
    assert s[100] == 0


def test_undersampling_aliases():
    # cos(3x) on the lattice (pi/2) Z coincides with cos(x)
    assert np.allclose(sample(lambda x: np.cos(3 * x), 2.0, 8).values, sample(np.cos, 2.0, 8).values, atol=1e-14)


def test_sample_catalog_name_and_two_dim():
    s = sample("gaussian", 1.0, 3, dim=2)
    assert s.dim == 2 and s.values.shape == (7, 7)
    assert s[(1, -2)] == pytest.approx(math.exp(-(np.pi**2) * 5 / 2))


def test_sample_line_signal_on_nodes():
    g = LineGrid(256, 8 * np.pi)
    f = LineSignal(g, np.cos(g.nodes))
    s = sample(f, 2.0, 4)
    assert np.allclose(s.values.real, [1, 0, -1, 0, 1, 0, -1, 0, 1], atol=1e-14)
    with pytest.raises(ValueError):
        sample(f, 2.1, 4)  # points off the grid
    with pytest.raises(ValueError):
        sample(f, 2.0, 40)  # points outside the grid


def test_sample_set_validation_and_json():
    with pytest.raises(ValueError):
        SampleSet(0.0, 1, np.zeros(3))
    with pytest.raises(ValueError):
        SampleSet(1.0, 2, np.zeros(3))
    s = sample(lambda x, y: np.exp(1j * x) * y, 1.5, 2, dim=2)
    back = SampleSet.from_json(s.to_json())
    assert back.omega == s.omega and back.n_max == s.n_max
    assert np.array_equal(back.values, s.values)
    assert s.spacing == pytest.approx(np.pi / 1.5)


# ---------------------------------------------------------------- reconstruction


def test_reconstruct_single_sample_is_sinc():
    v = np.zeros(11)
    v[5] = 1
    x = np.linspace(-7, 7, 101)
    rec = sinc_reconstruct(SampleSet(1.0, 5, v), x)
    assert np.allclose(rec.values, sinc(x), atol=1e-15)


def test_reconstruct_five_sinc_signal():
    s = sample(five_sinc_signal, 2 * np.pi, 64)
    x = np.linspace(-3, 3, 1201)
    rec = sinc_reconstruct(s, x, f=five_sinc_signal)
    assert np.max(np.abs(rec.values - five_sinc_signal(x))) <= 1e-8
    assert rec.sup_bound <= 1e-13


@given(seeds, st.sampled_from([4, 16]))
def test_reconstruct_interpolates_samples(seed, n_max):
    f, _ = _fast_decay_series(2.0, Xorshift64Star(seed).normals(7), centre=3)
    s = sample(f, 2.0, n_max)
    x = np.pi / 2.0 * s.indices
    assert np.max(np.abs(sinc_reconstruct(s, x).values - s.values)) <= 1e-12


def test_reconstruction_error_shrinks_with_window():
    # slowly decaying band-limited signal: shifted sincs, samples ~ 1/n
    r = Xorshift64Star(4)
    shifts = 3 * r.uniforms(5) - 1.5
    amps = r.normals(5)
    omega = 1.0

    def f(x):
        return sum(a * sinc(omega * (np.asarray(x) - c)) for a, c in zip(amps, shifts))

    x = np.linspace(-5, 5, 2001)
    dx = x[1] - x[0]
    errs = []
    for n_max in (8, 16, 32, 64):
        rec = sinc_reconstruct(sample(f, omega, n_max), x, f=f)
        l2 = math.sqrt(dx * np.sum(np.abs(rec.values - f(x)) ** 2))
        # dense-grid oracle on a window is below the full-line Bessel bound
        assert l2 <= math.sqrt(np.pi / omega) * rec.omitted_l2 * 1.01
        assert np.max(np.abs(rec.values - f(x))) <= rec.sup_bound * 1.01
        errs.append(l2)
    assert all(b < a for a, b in zip(errs[:-1], errs[1:]))


def test_reconstruct_two_dim_product():
    g = LineGrid(32, 4.0, 2)
    s = sample(lambda x, y: sinc(2.0 * x) * sinc(2.0 * (y - np.pi / 2)), 2.0, 6, dim=2)
    rec = sinc_reconstruct(s, g)
    x, y = g.mesh()
    assert np.max(np.abs(rec.values - sinc(2.0 * x) * sinc(2.0 * y - np.pi))) <= 1e-14
    with pytest.raises(ValueError):
        sinc_reconstruct(s, np.zeros(3))


# ---------------------------------------------------------------- Paley-Wiener space


def _pw_grid_signal(seed, omega=1.0, n=8192, half_width=1024 * np.pi):
    g = LineGrid(n, half_width)
    f, _ = _fast_decay_series(omega, _smooth_band_coeffs(seed), centre=7)
    return LineSignal(g, f(g.nodes)), f


@given(seeds)
def test_pw_project_keeps_band_limited(seed):
    f, _ = _pw_grid_signal(seed)
    assert np.max(np.abs(pw_project(f, 1.0).values - f.values)) <= 1e-10


def test_pw_project_after_reconstruction():
    g = LineGrid(8192, 1024 * np.pi)
    fn, _ = _fast_decay_series(1.0, _smooth_band_coeffs(3), centre=7)
    rec = LineSignal(g, sinc_reconstruct(sample(fn, 1.0, 20), g.nodes).values)
    assert np.max(np.abs(pw_project(rec, 1.0).values - rec.values)) <= 1e-10


@given(seeds, seeds)
def test_pw_project_idempotent_and_self_adjoint(s1, s2):
    g = LineGrid(128, 8.0)
    r1, r2 = Xorshift64Star(s1), Xorshift64Star(s2)
    f = LineSignal(g, r1.complex_normals(128))
    h = LineSignal(g, r2.complex_normals(128))
    p = pw_project(f, 3.0)
    assert np.max(np.abs(pw_project(p, 3.0).values - p.values)) <= 1e-12
    assert abs(inner(p, h) - inner(f, pw_project(h, 3.0))) <= 1e-12 * max(1.0, lp_norm(f, 2) * lp_norm(h, 2))


def test_pw_project_rejects_out_of_band():
    f = LineSignal(LineGrid(64, 8.0), np.ones(64))
    with pytest.raises(ValueError):
        pw_project(f, 100.0)


@given(seeds)
def test_parseval_in_paley_wiener(seed):
    f, fn = _pw_grid_signal(seed)
    a = _smooth_band_coeffs(seed)
    # samples are exactly the series coefficients
    s = sample(fn, 1.0, 30)
    assert np.allclose(s.values[30 - 7 : 30 - 7 + a.size].real, a, atol=1e-12)
    assert lp_norm(f, 2) ** 2 == pytest.approx(np.pi * np.sum(a**2), rel=1e-10)


# ---------------------------------------------------------------- growth off the axis


def test_growth_at_one():
    r = bandlimited_growth("dirichlet_fn", 1.0)
    assert r.value == pytest.approx((math.e - 1 / math.e) / (2 * math.pi), rel=1e-15)
    assert r.integral == pytest.approx(r.value, rel=1e-13)


def test_growth_ratio_bounded():
    ratios = [bandlimited_growth("dirichlet_fn", y).ratio for y in np.linspace(1, 20, 39)]
    assert max(ratios) < 1 and min(ratios) > 0


def test_growth_near_zero_and_errors():
    assert bandlimited_growth("dirichlet_fn", 1e-8).value == pytest.approx(1 / math.pi, rel=1e-12)
    with pytest.raises(ValueError):
        bandlimited_growth("dirichlet_fn", 0.0)
    with pytest.raises(ValueError):
        bandlimited_growth("gaussian", 1.0)


# ---------------------------------------------------------------- periodization


def test_periodize_indicator():
    res = periodize(lambda x: ((x >= -np.pi) & (x < 2 * np.pi)).astype(float), n=64)
    t = res.signal.t
    want = 2 * np.pi * np.where(t < 0, 2.0, 1.0)
    assert np.array_equal(res.signal.values.real, want)
    assert res.residual == 0.0


def test_periodize_gaussian_coefficients():
    res = periodize("gaussian", n=64)
    assert res.wraps <= 3
    c = dft_analyze(res.signal)
    e = closed_form_entry("gaussian")
    for j in range(-10, 11):
        assert abs(c[j] - e.spectral(float(j))) <= 1e-10


def test_periodize_convolution():
    a, b = 0.7, 1.3
    ga = lambda x: np.exp(-(x**2) / (2 * a)) / math.sqrt(2 * math.pi * a)  # noqa: E731
    gb = lambda x: np.exp(-(x**2) / (2 * b)) / math.sqrt(2 * math.pi * b)  # noqa: E731
    gab = lambda x: np.exp(-(x**2) / (2 * (a + b))) / math.sqrt(2 * math.pi * (a + b))  # noqa: E731
    pa, pb, pab = (periodize(f, n=128).signal for f in (ga, gb, gab))
    assert np.max(np.abs(convolve_torus(pa, pb).values - pab.values)) <= 1e-9


def test_periodize_grid_signal_matches_callable():
    g = LineGrid(1024, 8 * np.pi)
    f = LineSignal(g, np.exp(-(g.nodes**2) / 2))
    res = periodize(f)
    assert res.signal.grid.size == 128 and res.wraps == 8
    assert np.max(np.abs(res.signal.values - periodize("gaussian", n=128).signal.values)) <= 1e-12
    with pytest.raises(ValueError):
        periodize(LineSignal(LineGrid(64, 3 * np.pi), np.zeros(64)))


@given(seeds)
def test_periodization_l1_bound(seed):
    shift = 4 * Xorshift64Star(seed).uniform() - 2
    g = LineGrid(1024, 8 * np.pi)
    f = LineSignal(g, np.exp(-np.abs(g.nodes - shift)) * np.cos(3 * g.nodes))
    assert lp_norm(periodize(f).signal, 1) <= lp_norm(f, 1) * (1 + 1e-12)


def test_periodize_slow_tail_needs_correction():
    pk = gauss_kernel_line(1.0)
    assert periodize(pk, n=32).wraps <= 3
    slow = lambda x: 1 / (1 + np.asarray(x) ** 2)  # noqa: E731
    with pytest.raises(ValueError):
        periodize(slow, n=32, max_wraps=64)
    res = periodize(slow, n=32, max_wraps=1024, tail_correction=True)
    # closed form: 2 pi sum 1/(1 + (t + 2 pi k)^2) = pi sinh(1) / (cosh(1) - cos t)
    want = np.pi * math.sinh(1) / (math.cosh(1) - np.cos(res.signal.t))
    assert np.max(np.abs(res.signal.values - want)) <= 1e-8
    assert res.tail_corrected and res.residual <= 1e-8


# ---------------------------------------------------------------- Poisson summation


@pytest.mark.parametrize("x", [0.0, 1.0, np.pi])
def test_poisson_summation_gaussian(x):
    assert poisson_summation_residual("gaussian", x) <= 1e-12


@pytest.mark.parametrize("name", POISSON_QUALIFYING)
def test_poisson_summation_qualifying(name):
    assert poisson_summation_residual(name, 0.5) <= 1e-10


def test_poisson_summation_rejects_non_qualifying():
    for name in ("box", "dirichlet_fn", "tent"):
        with pytest.raises(ValueError, match="decay hypotheses"):
            poisson_summation_residual(name, 0.0)


@pytest.mark.parametrize("omega", [0.5, 1.0, 4.0])
def test_periodized_poisson_kernel(omega):
    assert poisson_kernel_periodization_error(omega, n=64) <= 1e-8


# ---------------------------------------------------------------- theta


def test_theta_values():
    assert theta_equation_residual(1.0) <= 1e-16
    assert theta_equation_residual(4.0) <= 1e-14
    assert theta(4.0) == pytest.approx(0.5 * theta(0.25), rel=1e-14)
    assert theta(50.0) == pytest.approx(1.0, abs=1e-60)


@given(st.floats(0.3, 3.0))
def test_theta_equation(s):
    assert theta_equation_residual(s) <= 1e-12


def test_theta_direct_sum_oracle():
    # independent sum with many more terms than needed
    n = np.arange(1, 200)
    assert theta(0.3) == pytest.approx(1 + 2 * np.sum(np.exp(-(n**2) * np.pi * 0.3)), rel=1e-15)


def test_theta_guards():
    with pytest.raises(ValueError):
        theta(0.0)
    with pytest.raises(ValueError):
        theta(1e-6, max_terms=100)


# ---------------------------------------------------------------- cosecant series


def test_cosecant_half():
    r = cosecant_series(0.5, 10_000)
    assert r.target == pytest.approx(np.pi**2)
    assert r.error <= 2e-4
    assert r.error <= r.tail_bound


def test_cosecant_quarter_target():
    assert cosecant_series(0.25, 10).target == pytest.approx(2 * np.pi**2)


def test_cosecant_rate():
    errs = [cosecant_series(0.5, n).error for n in (100, 1000, 10_000)]
    # tail sum over |n| > N of 1/(x + n)^2 is about 2/N
    for n, e in zip((100, 1000, 10_000), errs):
        assert e * n == pytest.approx(2.0, rel=0.02)


def test_cosecant_rejects():
    with pytest.raises(ValueError):
        cosecant_series(2.0, 10)
    with pytest.raises(ValueError):
        cosecant_series(0.5, 0)

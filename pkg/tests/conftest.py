import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from harmonic_lab import LineGrid, LineSignal, TorusGrid, TorusSignal, Xorshift64Star

settings.register_profile("lab", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")

seeds = st.integers(min_value=0, max_value=2**64 - 1)
pow2 = st.sampled_from([4, 8, 16, 32, 64, 128, 256, 512, 1024])


def random_torus(seed: int, n: int, complex_: bool = True) -> TorusSignal:
    r = Xorshift64Star(seed)
    v = r.complex_normals(n) if complex_ else r.normals(n)
    return TorusSignal(TorusGrid(n), v)


def random_line(seed: int, n: int, half_width: float = 8.0, dim: int = 1) -> LineSignal:
    r = Xorshift64Star(seed)
    g = LineGrid(n, half_width, dim)
    v = np.asarray(r.complex_normals(n**dim)).reshape(g.shape)
    return LineSignal(g, v)


def gaussian_line(n: int = 1024, half_width: float = 16.0, dim: int = 1) -> LineSignal:
    g = LineGrid(n, half_width, dim)
    r2 = sum(x**2 for x in g.mesh())
    return LineSignal(g, np.exp(-r2 / 2))


@pytest.fixture
def gauss1d():
    return gaussian_line()

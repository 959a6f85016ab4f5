"""
Numerical harmonic analysis laboratory: Fourier series and integrals on grids,
summability kernels, maximal functions, Calderon-Zygmund decompositions,
singular integrals, sampling, Poisson summation and uncertainty inequalities.
"""

__version__ = "0.1.0"

from .grid import (  # noqa: E402
    LineGrid,
    LineSignal,
    SpectrumR,
    SpectrumT,
    TorusGrid,
    TorusSignal,
    dft_analyze,
    dft_line,
    dft_synthesize,
    idft_line,
    lp_norm,
)
from .rng import Xorshift64Star  # noqa: E402

__all__ = [
    "LineGrid",
    "LineSignal",
    "SpectrumR",
    "SpectrumT",
    "TorusGrid",
    "TorusSignal",
    "Xorshift64Star",
    "dft_analyze",
    "dft_line",
    "dft_synthesize",
    "idft_line",
    "lp_norm",
    "__version__",
]

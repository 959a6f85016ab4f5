#!/usr/bin/env python3
"""Heisenberg ratio of a few line signals under dilation; Gaussians stay at 1."""

import numpy as np

from harmonic_lab.grid import LineGrid, LineSignal
from harmonic_lab.uncertainty import heisenberg_report


def main() -> None:
    g = LineGrid(4096, 32.0)
    x = g.nodes
    shapes = {
        "gaussian": lambda u: np.exp(-(u**2) / 2),
        "hermite1": lambda u: u * np.exp(-(u**2) / 2),
        "quartic": lambda u: np.exp(-(u**4) / 4),
    }
    print(f"{'signal':>10} {'lambda':>7} {'ratio':>12}")
    for name, fn in shapes.items():
        for lam in (0.5, 1.0, 2.0):
            r = heisenberg_report(LineSignal(g, fn(lam * x)))
            print(f"{name:>10} {lam:7.2f} {r.ratio:12.8f}")


if __name__ == "__main__":
    main()

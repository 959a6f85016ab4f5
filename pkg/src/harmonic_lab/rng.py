"""
Portable seeded randomness.

Generator: xorshift64* (Vigna 2016)
    x ^= x >> 12; x ^= x << 25; x ^= x >> 27
    out = x * 0x2545F4914F6CDD1D  (mod 2^64)
The 64-bit seed is scrambled once through splitmix64 to form the initial state
(a zero state is replaced by the splitmix64 constant 0x9E3779B97F4A7C15).

Uniform doubles take the top 53 bits: (out >> 11) * 2^-53, giving [0, 1).

Normal variates use Leva's ratio-of-uniforms method (ACM TOMS 18, 1992):
    repeat
        u = 1 - uniform()                     # (0, 1]
        v = 1.7156 * (uniform() - 0.5)
        x = u - 0.449871
        y = |v| + 0.386595
        q = x^2 + y * (0.19600 y - 0.25472 x)
        accept if q < 0.27597
        reject if q > 0.27846
        accept if v^2 <= -4 u^2 ln u
    return v / u

Every draw is sequential and integer-exact, so any language reproducing these
steps produces the same stream.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class Xorshift64Star:
    def __init__(self, seed: int):
        s = splitmix64(int(seed) & _MASK)
        self.state = s if s != 0 else 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)])

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi) by scaling a uniform double (bias < 2^-40 for small ranges)."""
        return lo + min(int(self.uniform() * (hi - lo)), hi - lo - 1)

    def normal(self) -> float:
        while True:
            u = 1.0 - self.uniform()
            v = 1.7156 * (self.uniform() - 0.5)
            x = u - 0.449871
            y = abs(v) + 0.386595
            q = x * x + y * (0.19600 * y - 0.25472 * x)
            if q < 0.27597:
                return v / u
            if q > 0.27846:
                continue
            if v * v <= -4.0 * u * u * math.log(u):
                return v / u

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])

    def complex_normals(self, n: int) -> np.ndarray:
        z = self.normals(2 * n)
        return z[0::2] + 1j * z[1::2]

"""Seeded split-mix generator: every random draw in the suites flows from here.

A 64-bit split-mix state keeps the suites bit-reproducible across platforms;
per-trial child generators are derived by mixing the trial index into the seed.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z):
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic uint64 stream with uniform/normal/complex helpers."""

    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def u64(self):
        self.state = (self.state + _GAMMA) & _MASK
        return _mix(self.state)

    def uniform(self, low=0.0, high=1.0):
        # 53-bit mantissa fill
        return low + (high - low) * ((self.u64() >> 11) * 2.0 ** -53)

    def normal(self):
        # Box-Muller; draws two uniforms, returns one deviate
        u1 = max(self.uniform(), 2.0 ** -53)
        u2 = self.uniform()
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)

    def integer(self, low, high):
        """Uniform integer in [low, high)."""
        span = int(high) - int(low)
        return int(low) + self.u64() % span

    def complex_normal(self):
        return (self.normal() + 1j * self.normal()) / np.sqrt(2.0)

    def complex_matrix(self, n, m=None):
        m = n if m is None else m
        out = np.empty((n, m), dtype=complex)
        for i in range(n):
            for j in range(m):
                out[i, j] = self.complex_normal()
        return out

    def hermitian_matrix(self, n):
        a = self.complex_matrix(n)
        return (a + a.conj().T) / 2.0

    def unitary_matrix(self, n):
        """Unitary factor from modified Gram-Schmidt on a random matrix."""
        a = self.complex_matrix(n)
        q = np.zeros_like(a)
        for j in range(n):
            v = a[:, j].copy()
            for i in range(j):
                v -= (q[:, i].conj() @ v) * q[:, i]
            nv = np.linalg.norm(v)
            if nv < 1e-12:  # essentially impossible for continuous draws
                v = np.zeros(n, dtype=complex)
                v[j] = 1.0
                nv = 1.0
            q[:, j] = v / nv
        return q

    def spawn(self, key):
        """Child generator with a seed derived from (state seed, key)."""
        return SplitMix64(_mix(self.state ^ _mix(int(key) & _MASK)))

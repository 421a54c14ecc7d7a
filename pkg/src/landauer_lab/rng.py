"""Frozen, portable random number generation.

Reproducibility of CTPQ fixtures requires the exact bit stream to be part of
the package contract, so we do not delegate to ``numpy.random``.  The
algorithm is frozen as follows and must not change between versions:

* bit generator: SplitMix64.  State update ``s_k = (seed + k * GAMMA) mod 2^64``
  with ``GAMMA = 0x9E3779B97F4B7C15``; output ``z = mix(s_k)`` where ``mix`` is
  the standard finalizer (xor-shift 30, mul 0xBF58476D1CE4E5B9, xor-shift 27,
  mul 0x94D049BB133111EB, xor-shift 31).  Draw ``k`` counts from 1.
* uniforms: ``u = (z >> 11) * 2^-53`` in ``[0, 1)``; the Box-Muller radius
  uses the shifted variant ``((z >> 11) + 1) * 2^-53`` in ``(0, 1]`` so the
  logarithm never sees zero.
* Gaussians: Box-Muller.  Each pair consumes two consecutive outputs
  ``(z_a, z_b)``; with ``r = sqrt(-2 ln u_a)`` and ``t = 2 pi u_b`` the pair is
  ``(r cos t, r sin t)``.
* complex normals: draw ``k`` Box-Muller pairs; the k-th complex number is
  ``re + 1j*im`` from the k-th pair.

The counter-based form makes vectorized (NumPy) and scalar evaluation agree
bit for bit; ``test_rng.py`` pins the first outputs for seed 42.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4B7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


def _mix(state: np.ndarray) -> np.ndarray:
    z = state.copy()
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Seedable counter-based generator with the frozen conventions above."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed % (1 << 64))
        self._counter = 0

    @property
    def counter(self) -> int:
        """Number of 64-bit outputs consumed so far."""
        return self._counter

    def next_u64(self, n: int = 1) -> np.ndarray:
        """Return the next ``n`` raw 64-bit outputs."""
        k = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        return _mix(self._seed + _GAMMA * k)

    def uniform(self, n: int = 1) -> np.ndarray:
        """Uniforms in [0, 1)."""
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * _U53

    def standard_normal(self, n: int) -> np.ndarray:
        """``n`` Box-Muller Gaussians (consumes ceil(n/2) pairs)."""
        pairs = (n + 1) // 2
        raw = self.next_u64(2 * pairs)
        u_a = ((raw[0::2] >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _U53
        u_b = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _U53
        r = np.sqrt(-2.0 * np.log(u_a))
        t = 2.0 * np.pi * u_b
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(t)
        out[1::2] = r * np.sin(t)
        return out[:n]

    def complex_normal(self, n: int) -> np.ndarray:
        """``n`` complex numbers with unit-normal real and imaginary parts."""
        raw = self.next_u64(2 * n)
        u_a = ((raw[0::2] >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _U53
        u_b = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _U53
        r = np.sqrt(-2.0 * np.log(u_a))
        t = 2.0 * np.pi * u_b
        return r * np.cos(t) + 1j * (r * np.sin(t))


def derived_seed(base_seed: int, index: int) -> int:
    """Seed of the ``index``-th member of an ensemble (``base + index``)."""
    return (base_seed + index) % (1 << 64)

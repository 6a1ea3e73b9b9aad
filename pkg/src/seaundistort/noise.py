"""Seedable gradient noise and fractional Brownian motion.

Lattice gradients come from the counter hash in :mod:`seaundistort.rng`, so
noise values depend only on (position, seed) and are identical across
processes.  All evaluators broadcast over numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .rng import derive_seed, hash_unit

# Strict bound of 2-D gradient noise with unit gradients; dividing by it
# keeps values inside [-1, 1].
_GRAD_BOUND = np.sqrt(2.0) / 2.0


def _fade(t):
    # quintic: C2 continuity at cell boundaries
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _corner_dot(seed, ix, iy, dx, dy):
    angle = hash_unit(seed, ix.astype(np.uint64), iy.astype(np.uint64)) * (2.0 * np.pi)
    return np.cos(angle) * dx + np.sin(angle) * dy


def gradient_noise(x, y, seed: int):
    """Perlin-style gradient noise in [-1, 1], zero at lattice points."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ix = np.floor(x).astype(np.int64)
    iy = np.floor(y).astype(np.int64)
    fx = x - ix
    fy = y - iy

    n00 = _corner_dot(seed, ix, iy, fx, fy)
    n10 = _corner_dot(seed, ix + 1, iy, fx - 1.0, fy)
    n01 = _corner_dot(seed, ix, iy + 1, fx, fy - 1.0)
    n11 = _corner_dot(seed, ix + 1, iy + 1, fx - 1.0, fy - 1.0)

    u = _fade(fx)
    v = _fade(fy)
    nx0 = n00 + u * (n10 - n00)
    nx1 = n01 + u * (n11 - n01)
    return (nx0 + v * (nx1 - nx0)) / _GRAD_BOUND


def fbm(x, y, seed: int, octaves: int = 5, lacunarity: float = 2.0,
        gain: float = 0.5, base_wavelength: float = 1.0):
    """Fractional Brownian motion: stacked gradient-noise octaves in [-1, 1].

    ``base_wavelength`` sets the feature size of the first octave in the
    units of (x, y); each further octave shrinks it by ``lacunarity`` and
    scales amplitude by ``gain``.
    """
    x = np.asarray(x, dtype=np.float64) / base_wavelength
    y = np.asarray(y, dtype=np.float64) / base_wavelength
    total = np.zeros(np.broadcast(x, y).shape)
    amp = 1.0
    freq = 1.0
    norm = 0.0
    for octave in range(octaves):
        total += amp * gradient_noise(x * freq, y * freq, derive_seed(seed, octave))
        norm += amp
        amp *= gain
        freq *= lacunarity
    return total / norm


def cell_values(x, y, cell_m: float, seed: int):
    """Piecewise-constant random values in [0, 1) on a square cell grid.

    No interpolation: adjacent cells jump independently, which is exactly
    the speckle wanted for pebble-scale texture.
    """
    cx = np.floor(np.asarray(x, dtype=np.float64) / cell_m).astype(np.int64)
    cy = np.floor(np.asarray(y, dtype=np.float64) / cell_m).astype(np.int64)
    return hash_unit(seed, cx.astype(np.uint64), cy.astype(np.uint64))

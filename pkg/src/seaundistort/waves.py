"""Air-water interface model: a seeded superposition of directional sinusoids.

The surface must be point-evaluable along arbitrary rays with analytic
normals, so instead of an FFT height grid it is a sum of a couple dozen
sinusoidal components:

    h(x, y) = sum_i  a_i * sin(k_i . (x, y) + phi_i)

Derivatives are exact; there is no grid interpolation error anywhere in the
interface geometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WaveSpectrum:
    """Sampling recipe for one surface realization."""
    n_components: int = 24
    amplitude_range_m: tuple = (0.0005, 0.006)
    wavelength_range_m: tuple = (0.3, 5.0)
    direction_spread_deg: float = 60.0
    seed: int = 0

    def __post_init__(self):
        if self.n_components < 0:
            raise ValueError("n_components must be non-negative")
        if self.amplitude_range_m[0] < 0:
            raise ValueError("amplitudes must be non-negative")
        if self.wavelength_range_m[0] <= 0:
            raise ValueError("wavelengths must be positive")


class WaterSurface:
    """Evaluable height/normal field of the interface.

    Attributes
    ----------
    amplitude_m, phase_rad : (n,) arrays
    wavevector : (n, 2) array in rad/m
    mean_level_m : height of the still-water plane
    """

    def __init__(self, amplitude_m, wavevector, phase_rad, mean_level_m=0.0):
        self.amplitude_m = np.asarray(amplitude_m, dtype=np.float64).reshape(-1)
        self.wavevector = np.asarray(wavevector, dtype=np.float64).reshape(-1, 2)
        self.phase_rad = np.asarray(phase_rad, dtype=np.float64).reshape(-1)
        self.mean_level_m = float(mean_level_m)
        if not (len(self.amplitude_m) == len(self.wavevector) == len(self.phase_rad)):
            raise ValueError("component arrays must have equal length")

    @classmethod
    def flat(cls, mean_level_m=0.0):
        return cls(np.zeros(0), np.zeros((0, 2)), np.zeros(0), mean_level_m)

    @property
    def components(self):
        """Per-component records, handy for inspection and serialization."""
        return [
            {"amplitude_m": float(a), "wavevector": (float(kx), float(ky)),
             "phase": float(p)}
            for a, (kx, ky), p in zip(self.amplitude_m, self.wavevector,
                                      self.phase_rad)
        ]

    @property
    def max_abs_height(self) -> float:
        """Tight bound on |h - mean_level|: the sum of amplitudes."""
        return float(np.sum(self.amplitude_m))

    @property
    def is_flat(self) -> bool:
        return len(self.amplitude_m) == 0 or self.max_abs_height == 0.0

    def height(self, x_m, y_m):
        x = np.asarray(x_m, dtype=np.float64)
        y = np.asarray(y_m, dtype=np.float64)
        h = np.zeros(np.broadcast(x, y).shape)
        for a, (kx, ky), p in zip(self.amplitude_m, self.wavevector, self.phase_rad):
            h += a * np.sin(kx * x + ky * y + p)
        return h + self.mean_level_m

    def gradient(self, x_m, y_m):
        """Analytic (dh/dx, dh/dy)."""
        x = np.asarray(x_m, dtype=np.float64)
        y = np.asarray(y_m, dtype=np.float64)
        gx = np.zeros(np.broadcast(x, y).shape)
        gy = np.zeros_like(gx)
        for a, (kx, ky), p in zip(self.amplitude_m, self.wavevector, self.phase_rad):
            c = a * np.cos(kx * x + ky * y + p)
            gx += kx * c
            gy += ky * c
        return gx, gy

    def normal(self, x_m, y_m):
        """Unit up-facing normal, normalize(-dh/dx, -dh/dy, 1)."""
        gx, gy = self.gradient(x_m, y_m)
        n = np.stack([-gx, -gy, np.ones_like(gx)], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)


def make_surface(spectrum: WaveSpectrum, mean_level_m: float = 0.0) -> WaterSurface:
    """Realize a surface from a spectrum; deterministic in ``spectrum.seed``.

    Component directions scatter around a random primary heading within
    ``direction_spread_deg``; amplitudes and wavelengths draw uniformly from
    their ranges.
    """
    rng = np.random.Generator(np.random.PCG64(spectrum.seed))
    n = spectrum.n_components
    amps = rng.uniform(*spectrum.amplitude_range_m, size=n)
    wavelengths = rng.uniform(*spectrum.wavelength_range_m, size=n)
    primary = rng.uniform(0.0, 2.0 * np.pi)
    half_spread = np.deg2rad(spectrum.direction_spread_deg) / 2.0
    headings = primary + rng.uniform(-half_spread, half_spread, size=n)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n)
    k = 2.0 * np.pi / wavelengths
    wavevector = np.stack([k * np.cos(headings), k * np.sin(headings)], axis=-1)
    return WaterSurface(amps, wavevector, phases, mean_level_m)


def surface_height(surface: WaterSurface, x_m, y_m):
    """Interface height in meters at (x, y)."""
    return surface.height(x_m, y_m)


def surface_normal(surface: WaterSurface, x_m, y_m):
    """Unit surface normal at (x, y); (0, 0, 1) everywhere on a flat surface."""
    return surface.normal(x_m, y_m)


def rms_slope(surface: WaterSurface, extent_m: float = 20.0, n: int = 128) -> float:
    """RMS of |grad h| sampled on a regular grid; a roughness summary."""
    xs = np.linspace(-extent_m / 2, extent_m / 2, n)
    gx, gy = surface.gradient(xs[None, :], xs[:, None])
    return float(np.sqrt(np.mean(gx * gx + gy * gy)))

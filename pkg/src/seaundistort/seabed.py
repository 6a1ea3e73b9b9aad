"""Procedural seabed patches: heightfield plus albedo for four bottom types.

Each class has its own texture recipe (see ``generate_seabed``), but all
share the guarantees the renderer relies on: albedo strictly inside [0, 1],
height magnitude never exceeding the requested roughness amplitude, and
bit-identical output for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SEABED_CLASSES, SEABED_PALETTES
from .noise import cell_values, fbm, gradient_noise
from .rng import derive_seed, hash_unit


@dataclass(eq=False)
class SeabedPatch:
    """Square heightfield + albedo grid centred on the origin.

    Grid node (row i, col j) sits at world position
    ``(-extent/2 + j*d, -extent/2 + i*d)`` with ``d = extent/(resolution-1)``.
    """
    extent_m: float
    resolution: int
    height_m: np.ndarray        # (res, res) signed metres about avg depth
    albedo_rgb: np.ndarray      # (res, res, 3) in [0, 1]
    seabed_class: str
    seed: int
    wrap: bool = False
    _height32: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def cell_size_m(self) -> float:
        return self.extent_m / (self.resolution - 1)

    @property
    def height_range(self):
        """Actual (min, max) of the height grid; tight bounds for ray slabs."""
        return float(self.height_m.min()), float(self.height_m.max())

    def height32(self) -> np.ndarray:
        """Cached float32 view of the height grid for hot sampling loops."""
        if self._height32 is None:
            self._height32 = np.ascontiguousarray(self.height_m, dtype=np.float32)
        return self._height32


def _grid_coords(patch: SeabedPatch, x_m, y_m):
    """World (x, y) -> fractional grid coordinates (u cols, v rows)."""
    d = patch.cell_size_m
    u = (np.asarray(x_m, dtype=np.float64) + patch.extent_m / 2.0) / d
    v = (np.asarray(y_m, dtype=np.float64) + patch.extent_m / 2.0) / d
    n = patch.resolution
    if patch.wrap:
        u = np.mod(u, n - 1)
        v = np.mod(v, n - 1)
    else:
        u = np.clip(u, 0.0, n - 1.0)
        v = np.clip(v, 0.0, n - 1.0)
    return u, v


def _bilinear(grid: np.ndarray, u, v):
    """Bilinear lookup at fractional (col, row) positions; grid is (H, W[, C])."""
    h, w = grid.shape[:2]
    j0 = np.minimum(u.astype(np.int64), w - 2)
    i0 = np.minimum(v.astype(np.int64), h - 2)
    fu = u - j0
    fv = v - i0
    if grid.ndim == 3:
        fu = fu[..., None]
        fv = fv[..., None]
    g00 = grid[i0, j0]
    g01 = grid[i0, j0 + 1]
    g10 = grid[i0 + 1, j0]
    g11 = grid[i0 + 1, j0 + 1]
    return (g00 * (1 - fu) + g01 * fu) * (1 - fv) + (g10 * (1 - fu) + g11 * fu) * fv


def sample_height(patch: SeabedPatch, x_m, y_m):
    """Bilinear height (m, about avg depth) at world (x, y); clamped outside."""
    u, v = _grid_coords(patch, x_m, y_m)
    return _bilinear(patch.height_m, u, v)


def sample_albedo(patch: SeabedPatch, x_m, y_m):
    """Bilinear RGB albedo at world (x, y); clamped outside the extent."""
    u, v = _grid_coords(patch, x_m, y_m)
    return _bilinear(patch.albedo_rgb, u, v)


def _lerp_palette(lo, hi, t):
    t = np.clip(t, 0.0, 1.0)[..., None]
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    return lo + (hi - lo) * t


def _rock(x, y, seed, palette):
    base = fbm(x, y, derive_seed(seed, 1), octaves=5, base_wavelength=6.0)
    # cracks: ridges of a second noise field squeezed to thin lines
    crack_field = gradient_noise(x / 3.0, y / 3.0, derive_seed(seed, 2))
    crack = np.clip(1.0 - np.abs(crack_field) / 0.06, 0.0, 1.0)
    height = 0.75 * base - 0.25 * crack
    tone = fbm(x, y, derive_seed(seed, 3), octaves=4, base_wavelength=1.5)
    albedo = _lerp_palette(palette["lo"], palette["hi"], 0.5 * (tone + 1.0))
    albedo *= (1.0 - 0.85 * crack)[..., None]
    return height, albedo


def _sand_fields(x, y, seed):
    heading = hash_unit(derive_seed(seed, 4)) * 2.0 * np.pi
    along = x * np.cos(heading) + y * np.sin(heading)
    warp = fbm(x, y, derive_seed(seed, 5), octaves=3, base_wavelength=3.0)
    ripple = np.sin(2.0 * np.pi * along / 0.6 + 2.5 * warp)
    rolling = fbm(x, y, derive_seed(seed, 6), octaves=4, base_wavelength=8.0)
    return ripple, rolling


def _sand(x, y, seed, palette):
    ripple, rolling = _sand_fields(x, y, seed)
    height = 0.55 * ripple + 0.45 * rolling
    tone = 0.5 * (rolling + 1.0) + 0.08 * ripple
    albedo = _lerp_palette(palette["lo"], palette["hi"], tone)
    return height, albedo


def _gravel(x, y, seed, palette):
    fine = fbm(x, y, derive_seed(seed, 7), octaves=3, base_wavelength=0.35)
    coarse = fbm(x, y, derive_seed(seed, 8), octaves=3, base_wavelength=4.0)
    height = 0.6 * fine + 0.4 * coarse
    # pebble speckle: flat random value per ~8 cm cell, softened by fine noise
    speckle = cell_values(x, y, 0.08, derive_seed(seed, 9))
    tone = 0.75 * speckle + 0.25 * (0.5 * (fine + 1.0))
    albedo = _lerp_palette(palette["lo"], palette["hi"], tone)
    return height, albedo


def _seagrass(x, y, seed, palette):
    ripple, rolling = _sand_fields(x, y, seed)
    patchiness = fbm(x, y, derive_seed(seed, 10), octaves=4, base_wavelength=5.0)
    grass = patchiness > 0.03
    tufts = fbm(x, y, derive_seed(seed, 11), octaves=3, base_wavelength=0.5)
    height = 0.45 * ripple + 0.35 * rolling + 0.2 * np.where(grass, tufts, 0.0)
    sand_albedo = _lerp_palette(palette["lo"], palette["hi"], 0.5 * (rolling + 1.0))
    grass_albedo = _lerp_palette(palette["grass_lo"], palette["grass_hi"],
                                 0.5 * (tufts + 1.0))
    albedo = np.where(grass[..., None], grass_albedo, sand_albedo)
    return height, albedo


_RECIPES = {
    "rock": _rock,
    "sand": _sand,
    "gravel": _gravel,
    "seagrass": _seagrass,
}


def generate_seabed(seabed_class: str, seed: int, extent_m: float,
                    resolution: int, roughness: float,
                    palettes: dict | None = None,
                    wrap: bool = False) -> SeabedPatch:
    """Synthesize one seabed patch.

    Recipes per class: rock is low-frequency high-amplitude relief cut by
    dark crack lines; sand is directional ripples over rolling dunes; gravel
    is fine bumpy relief with pebble-scale albedo speckle; seagrass is dark
    green noise-thresholded patches over a sand bed.

    The height combination weights sum to 1 and every noise field is bounded
    by construction, so ``max |height| <= roughness`` always holds.
    """
    if seabed_class not in SEABED_CLASSES:
        raise ValueError(f"unknown seabed class {seabed_class!r}")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if extent_m <= 0:
        raise ValueError("extent_m must be positive")
    if roughness < 0:
        raise ValueError("roughness must be non-negative")

    palette = (palettes or SEABED_PALETTES)[seabed_class]
    coords = np.linspace(-extent_m / 2.0, extent_m / 2.0, resolution)
    x = coords[None, :]
    y = coords[:, None]
    height_norm, albedo = _RECIPES[seabed_class](x, y, seed, palette)
    height = roughness * height_norm
    albedo = np.clip(albedo, 0.0, 1.0)
    return SeabedPatch(extent_m=float(extent_m), resolution=int(resolution),
                       height_m=height, albedo_rgb=albedo,
                       seabed_class=seabed_class, seed=int(seed), wrap=wrap)

"""Generator configuration: sampling ranges, seabed recipes, optics defaults.

All scene randomness is drawn from the ranges held in a
:class:`GeneratorConfig`.  The defaults reproduce the published acquisition
envelope (camera, sun, depth) of the dataset this package generates; configs
may narrow the ranges but widening past the hard limits requires setting
``allow_out_of_range``.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

# Hard sampling limits.  sample_scene() refuses configs outside these unless
# the config sets allow_out_of_range.
HARD_LIMITS = {
    "altitude_range_m": (30.0, 200.0),
    "tilt_range_deg": (0.0, 5.0),
    "sun_elevation_range_deg": (25.0, 70.0),
    "avg_depth_range_m": (-8.0, -0.5),
    "focal_choices_mm": (20.0, 24.0),
    "pixel_width_choices": (4000, 5472),
    "gsd_range_m": (0.014, 0.063),
}

SEABED_CLASSES = ("rock", "sand", "gravel", "seagrass")

# Albedo anchors per seabed class, RGB in [0, 1].  "lo"/"hi" bound the
# noise-modulated base colour; extra entries are class-specific accents.
SEABED_PALETTES = {
    "rock": {
        "lo": (0.18, 0.16, 0.13),
        "hi": (0.48, 0.44, 0.38),
        "crack": (0.06, 0.055, 0.05),
    },
    "sand": {
        "lo": (0.55, 0.50, 0.38),
        "hi": (0.78, 0.72, 0.55),
    },
    "gravel": {
        "lo": (0.20, 0.18, 0.15),
        "hi": (0.62, 0.58, 0.50),
    },
    "seagrass": {
        "lo": (0.55, 0.50, 0.38),   # sand background
        "hi": (0.72, 0.66, 0.50),
        "grass_lo": (0.04, 0.16, 0.07),
        "grass_hi": (0.10, 0.30, 0.12),
    },
}

# Height amplitude (m) per class; patches never exceed these.
SEABED_ROUGHNESS_M = {
    "rock": 0.40,
    "sand": 0.06,
    "gravel": 0.10,
    "seagrass": 0.08,
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Every knob of scene sampling and rendering defaults, in one record."""

    # camera
    sensor_width_mm: float = 36.0
    crop_px: int = 512
    focal_choices_mm: tuple = (20.0, 24.0)
    pixel_width_choices: tuple = (4000, 5472)
    altitude_range_m: tuple = (30.0, 200.0)
    tilt_range_deg: tuple = (0.0, 5.0)
    gsd_range_m: tuple = (0.014, 0.063)

    # sun & atmosphere
    sun_elevation_range_deg: tuple = (25.0, 70.0)
    sun_angular_radius_deg: float = 0.27
    glint_feather_deg: float = 2.5
    air_range: tuple = (0.5, 2.0)
    dust_range: tuple = (0.0, 1.0)

    # water column
    ior: float = 1.34
    avg_depth_range_m: tuple = (-8.0, -0.5)
    attenuation_base_rgb: tuple = (0.45, 0.15, 0.08)
    attenuation_jitter: tuple = (0.7, 1.3)
    veiling_base_rgb: tuple = (0.030, 0.065, 0.090)
    veiling_jitter: tuple = (0.6, 1.4)

    # wave spectrum
    wave_components: int = 24
    wave_amplitude_range_m: tuple = (0.0005, 0.006)
    wave_amplitude_scale_range: tuple = (0.3, 1.6)
    wave_wavelength_range_m: tuple = (0.3, 5.0)
    wave_direction_spread_range_deg: tuple = (20.0, 120.0)

    # seabed
    seabed_resolution: int = 1024
    seabed_roughness_m: dict = field(
        default_factory=lambda: dict(SEABED_ROUGHNESS_M))
    seabed_palettes: dict = field(
        default_factory=lambda: {k: dict(v) for k, v in SEABED_PALETTES.items()})

    allow_out_of_range: bool = False

    def validate(self) -> None:
        """Raise ValueError when a range exceeds the hard limits."""
        if self.allow_out_of_range:
            return
        for key in ("altitude_range_m", "tilt_range_deg",
                    "sun_elevation_range_deg", "avg_depth_range_m"):
            lo, hi = getattr(self, key)
            hlo, hhi = HARD_LIMITS[key]
            if lo < hlo or hi > hhi or lo > hi:
                raise ValueError(
                    f"{key}=({lo}, {hi}) outside hard limits ({hlo}, {hhi}); "
                    "set allow_out_of_range to override")
        for key in ("focal_choices_mm", "pixel_width_choices"):
            allowed = set(HARD_LIMITS[key])
            if not set(getattr(self, key)) <= allowed:
                raise ValueError(
                    f"{key}={getattr(self, key)} not a subset of {sorted(allowed)}; "
                    "set allow_out_of_range to override")


def load_config(path: str | Path) -> GeneratorConfig:
    """Load a GeneratorConfig from a TOML or JSON file.

    The file holds a flat table of field overrides; unknown keys are
    rejected so typos do not silently fall back to defaults.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        raw = tomllib.loads(text)
    else:
        raw = json.loads(text)

    names = {f.name for f in dataclasses.fields(GeneratorConfig)}
    unknown = set(raw) - names
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    coerced = {}
    for key, value in raw.items():
        if isinstance(value, list):
            value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        coerced[key] = value
    cfg = GeneratorConfig(**coerced)
    cfg.validate()
    return cfg


DEFAULT_CONFIG = GeneratorConfig()

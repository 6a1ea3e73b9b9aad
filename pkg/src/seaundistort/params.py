"""Scene parameter records, per-scene sampling, and metadata round-trip.

A scene is fully determined by ``(seed, GeneratorConfig)``: sampling uses a
PCG64 stream seeded with the scene seed, so the same inputs always produce
the same :class:`SceneParams`, from any process or worker.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, SEABED_CLASSES, GeneratorConfig
from .waves import WaveSpectrum


def compute_gsd(altitude_m, focal_mm, sensor_width_mm, full_pixel_width):
    """Ground sampling distance in meters: footprint of one sensor pixel.

    ``altitude * pixel_pitch / focal_length`` with pitch and focal length in
    meters.
    """
    if min(altitude_m, focal_mm, sensor_width_mm, full_pixel_width) <= 0:
        raise ValueError("all gsd inputs must be positive")
    pitch_m = (sensor_width_mm / 1000.0) / full_pixel_width
    return altitude_m * pitch_m / (focal_mm / 1000.0)


def solar_irradiance(elevation_deg: float, air: float, dust: float) -> float:
    """Relative direct solar irradiance after atmospheric extinction.

    A plain two-parameter haze model; derived deterministically from the
    stored metadata fields so it never needs its own key.
    """
    airmass_term = max(math.sin(math.radians(elevation_deg)), 0.2)
    tau = 0.08 * air + 0.18 * dust
    return math.exp(-tau / airmass_term)


@dataclass(frozen=True)
class Atmosphere:
    """Scalar haze parameters scaling sky brightness and warm colour shift."""
    air: float = 1.0
    dust: float = 0.0

    def __post_init__(self):
        if self.air < 0 or self.dust < 0:
            raise ValueError("atmosphere parameters must be non-negative")


@dataclass(frozen=True)
class CameraParams:
    sensor_width_mm: float = 36.0
    full_pixel_width: int = 4000
    focal_mm: float = 20.0
    altitude_m: float = 100.0
    tilt_deg: float = 0.0
    yaw_deg: float = 0.0
    crop_px: int = 512

    def __post_init__(self):
        if self.full_pixel_width not in (4000, 5472):
            raise ValueError("full_pixel_width must be 4000 or 5472")
        if self.focal_mm not in (20.0, 24.0):
            raise ValueError("focal_mm must be 20 or 24")
        if not 30.0 <= self.altitude_m <= 200.0:
            raise ValueError("altitude_m must lie in [30, 200]")
        if not 0.0 <= self.tilt_deg <= 5.0:
            raise ValueError("tilt_deg must lie in [0, 5]")
        if not 0.0 <= self.yaw_deg < 360.0:
            raise ValueError("yaw_deg must lie in [0, 360)")

    @property
    def gsd_m(self) -> float:
        return compute_gsd(self.altitude_m, self.focal_mm,
                           self.sensor_width_mm, self.full_pixel_width)

    @property
    def pixel_pitch_mm(self) -> float:
        return self.sensor_width_mm / self.full_pixel_width


@dataclass(frozen=True)
class SunParams:
    elevation_deg: float
    azimuth_deg: float
    angular_radius_deg: float = 0.27
    irradiance: float = 1.0
    atmosphere: Atmosphere = Atmosphere()

    def __post_init__(self):
        if not 25.0 <= self.elevation_deg <= 70.0:
            raise ValueError("elevation_deg must lie in [25, 70]")


@dataclass(frozen=True)
class WaterParams:
    ior: float = 1.34
    attenuation_rgb: tuple = (0.45, 0.15, 0.08)
    veiling_rgb: tuple = (0.030, 0.065, 0.090)
    avg_depth_m: float = -3.0

    def __post_init__(self):
        if self.ior <= 1.0:
            raise ValueError("ior must exceed 1")
        if any(c <= 0 for c in self.attenuation_rgb):
            raise ValueError("attenuation components must be positive")
        if not -8.0 <= self.avg_depth_m <= -0.5:
            raise ValueError("avg_depth_m must lie in [-8, -0.5]")


@dataclass(frozen=True)
class SceneParams:
    camera: CameraParams
    sun: SunParams
    water: WaterParams
    surface: WaveSpectrum
    seabed_class: str
    seed: int

    def __post_init__(self):
        if self.seabed_class not in SEABED_CLASSES:
            raise ValueError(f"seabed_class must be one of {SEABED_CLASSES}")


def sample_scene(seed: int, config: GeneratorConfig = DEFAULT_CONFIG) -> SceneParams:
    """Draw one complete scene description, reproducibly, from a seed.

    Camera geometry is rejection-sampled until the realized GSD falls inside
    ``config.gsd_range_m``, which keeps the published GSD envelope a hard
    invariant even for altitude/focal/pixel combinations that would land
    outside it.
    """
    config.validate()
    rng = np.random.Generator(np.random.PCG64(seed))

    gsd_lo, gsd_hi = config.gsd_range_m
    while True:
        full_px = int(rng.choice(np.asarray(config.pixel_width_choices)))
        focal = float(rng.choice(np.asarray(config.focal_choices_mm)))
        altitude = float(rng.uniform(*config.altitude_range_m))
        gsd = compute_gsd(altitude, focal, config.sensor_width_mm, full_px)
        if gsd_lo <= gsd <= gsd_hi:
            break

    camera = CameraParams(
        sensor_width_mm=config.sensor_width_mm,
        full_pixel_width=full_px,
        focal_mm=focal,
        altitude_m=altitude,
        tilt_deg=float(rng.uniform(*config.tilt_range_deg)),
        yaw_deg=float(rng.uniform(0.0, 360.0)),
        crop_px=config.crop_px,
    )

    elevation = float(rng.uniform(*config.sun_elevation_range_deg))
    azimuth = float(rng.uniform(0.0, 360.0))
    atmosphere = Atmosphere(air=float(rng.uniform(*config.air_range)),
                            dust=float(rng.uniform(*config.dust_range)))
    sun = SunParams(
        elevation_deg=elevation,
        azimuth_deg=azimuth,
        angular_radius_deg=config.sun_angular_radius_deg,
        irradiance=solar_irradiance(elevation, atmosphere.air, atmosphere.dust),
        atmosphere=atmosphere,
    )

    att = tuple(float(base * rng.uniform(*config.attenuation_jitter))
                for base in config.attenuation_base_rgb)
    veil = tuple(float(base * rng.uniform(*config.veiling_jitter))
                 for base in config.veiling_base_rgb)
    water = WaterParams(
        ior=config.ior,
        attenuation_rgb=att,
        veiling_rgb=veil,
        avg_depth_m=float(rng.uniform(*config.avg_depth_range_m)),
    )

    amp_scale = float(rng.uniform(*config.wave_amplitude_scale_range))
    surface = WaveSpectrum(
        n_components=config.wave_components,
        amplitude_range_m=tuple(a * amp_scale for a in config.wave_amplitude_range_m),
        wavelength_range_m=tuple(config.wave_wavelength_range_m),
        direction_spread_deg=float(rng.uniform(*config.wave_direction_spread_range_deg)),
        seed=int(rng.integers(0, 2 ** 63)),
    )

    seabed_class = str(rng.choice(np.asarray(SEABED_CLASSES)))
    return SceneParams(camera=camera, sun=sun, water=water, surface=surface,
                       seabed_class=seabed_class, seed=int(seed))


def metadata_dict(scene: SceneParams) -> dict:
    """Per-image metadata record with the fixed, documented key set."""
    cam = scene.camera
    return {
        "seed": scene.seed,
        "sensor_width_mm": cam.sensor_width_mm,
        "full_pixel_width": cam.full_pixel_width,
        "focal_mm": cam.focal_mm,
        "altitude_m": cam.altitude_m,
        "gsd_m": cam.gsd_m,
        "tilt_deg": cam.tilt_deg,
        "yaw_deg": cam.yaw_deg,
        "sun_elevation_deg": scene.sun.elevation_deg,
        "sun_azimuth_deg": scene.sun.azimuth_deg,
        "atmosphere": {"air": scene.sun.atmosphere.air,
                       "dust": scene.sun.atmosphere.dust},
        "water": {"ior": scene.water.ior,
                  "attenuation_rgb": list(scene.water.attenuation_rgb),
                  "veiling_rgb": list(scene.water.veiling_rgb)},
        "avg_depth_m": scene.water.avg_depth_m,
        "seabed_class": scene.seabed_class,
        "surface": {"n_components": scene.surface.n_components,
                    "amplitude_range_m": list(scene.surface.amplitude_range_m),
                    "wavelength_range_m": list(scene.surface.wavelength_range_m),
                    "direction_spread_deg": scene.surface.direction_spread_deg,
                    "seed": scene.surface.seed},
    }


def metadata_json(scene: SceneParams) -> str:
    """Serialize scene metadata; ``scene_from_metadata`` inverts it exactly."""
    return json.dumps(metadata_dict(scene), indent=2)


def scene_from_metadata(doc, config: GeneratorConfig = DEFAULT_CONFIG) -> SceneParams:
    """Rebuild SceneParams from a metadata dict or JSON string.

    Fields not stored per image (crop size, solar disk radius) come from the
    config; the solar irradiance is re-derived from the stored sun and
    atmosphere fields, so the round-trip is lossless.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    atmosphere = Atmosphere(air=doc["atmosphere"]["air"],
                            dust=doc["atmosphere"]["dust"])
    camera = CameraParams(
        sensor_width_mm=doc["sensor_width_mm"],
        full_pixel_width=doc["full_pixel_width"],
        focal_mm=doc["focal_mm"],
        altitude_m=doc["altitude_m"],
        tilt_deg=doc["tilt_deg"],
        yaw_deg=doc["yaw_deg"],
        crop_px=config.crop_px,
    )
    sun = SunParams(
        elevation_deg=doc["sun_elevation_deg"],
        azimuth_deg=doc["sun_azimuth_deg"],
        angular_radius_deg=config.sun_angular_radius_deg,
        irradiance=solar_irradiance(doc["sun_elevation_deg"],
                                    atmosphere.air, atmosphere.dust),
        atmosphere=atmosphere,
    )
    water = WaterParams(
        ior=doc["water"]["ior"],
        attenuation_rgb=tuple(doc["water"]["attenuation_rgb"]),
        veiling_rgb=tuple(doc["water"]["veiling_rgb"]),
        avg_depth_m=doc["avg_depth_m"],
    )
    surf = doc["surface"]
    surface = WaveSpectrum(
        n_components=surf["n_components"],
        amplitude_range_m=tuple(surf["amplitude_range_m"]),
        wavelength_range_m=tuple(surf["wavelength_range_m"]),
        direction_spread_deg=surf["direction_spread_deg"],
        seed=surf["seed"],
    )
    return SceneParams(camera=camera, sun=sun, water=water, surface=surface,
                       seabed_class=doc["seabed_class"], seed=doc["seed"])

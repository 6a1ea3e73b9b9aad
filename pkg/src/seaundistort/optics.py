"""Interface and water-column light transport primitives.

Directions are unit 3-vectors, radiometric quantities are relative RGB
triplets (``(..., 3)`` float arrays).  Every function broadcasts over
leading axes, so the same code path serves single-ray unit tests and the
megapixel render batches.

Conventions: z is up, the mean water plane sits at z = 0, view rays point
downward (``dir . normal < 0`` at the interface) and surface normals point
up into the air.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SunParams


class TotalInternalReflection(Exception):
    """Raised when Snell's law has no transmitted solution."""


@dataclass
class Ray:
    """Origin plus unit direction; both may carry leading batch axes."""
    origin: np.ndarray
    direction: np.ndarray

    def at(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.origin + self.direction * t[..., None]


def refract(direction, normal, n1: float, n2: float):
    """Refract a unit direction through an interface with indices n1 -> n2.

    Implements the vector form of Snell's law.  The result is unit length
    and coplanar with (direction, normal); ``n1 sin(i) = n2 sin(t)`` holds
    to floating-point precision.

    Raises
    ------
    TotalInternalReflection
        When n1 > n2 and the incident angle exceeds the critical angle.
    """
    direction = np.asarray(direction, dtype=np.float64)
    normal = np.asarray(normal, dtype=np.float64)
    out, tir = refract_batch(direction, normal, n1, n2)
    if np.any(tir):
        raise TotalInternalReflection(
            f"incident angle exceeds critical angle asin({n2}/{n1})")
    return out


def refract_batch(direction, normal, n1: float, n2: float):
    """Vectorized refraction; returns ``(refracted, tir_mask)``.

    Entries flagged in ``tir_mask`` hold zero vectors.  Inputs must satisfy
    ``direction . normal < 0`` (ray travelling into the surface).
    """
    direction = np.asarray(direction, dtype=np.float64)
    normal = np.asarray(normal, dtype=np.float64)
    eta = n1 / n2
    cos_i = -np.sum(direction * normal, axis=-1)
    sin2_t = eta * eta * np.maximum(0.0, 1.0 - cos_i * cos_i)
    tir = sin2_t > 1.0
    cos_t = np.sqrt(np.maximum(0.0, 1.0 - sin2_t))
    coeff = eta * cos_i - cos_t
    out = eta * direction + coeff[..., None] * normal
    out = np.where(tir[..., None], 0.0, out)
    return out, tir


def reflect(direction, normal):
    """Mirror a direction about a unit normal."""
    direction = np.asarray(direction, dtype=np.float64)
    normal = np.asarray(normal, dtype=np.float64)
    d_dot_n = np.sum(direction * normal, axis=-1, keepdims=True)
    return direction - 2.0 * d_dot_n * normal


def fresnel_unpolarized(cos_theta_i, n1: float, n2: float):
    """Unpolarized Fresnel reflectance for a dielectric interface.

    Average of the s- and p-polarized power coefficients.  Returns 1.0 in
    the total-internal-reflection regime.  The transmitted fraction is
    ``1 - R`` (non-absorbing boundary).
    """
    cos_i = np.asarray(cos_theta_i, dtype=np.float64)
    sin2_i = np.maximum(0.0, 1.0 - cos_i * cos_i)
    sin2_t = (n1 / n2) ** 2 * sin2_i
    tir = sin2_t >= 1.0
    cos_t = np.sqrt(np.maximum(0.0, 1.0 - sin2_t))
    rs = (n1 * cos_i - n2 * cos_t) / (n1 * cos_i + n2 * cos_t)
    rp = (n1 * cos_t - n2 * cos_i) / (n1 * cos_t + n2 * cos_i)
    r = 0.5 * (rs * rs + rp * rp)
    return np.where(tir, 1.0, np.clip(r, 0.0, 1.0))


def attenuate(radiance, path_m, c):
    """Exponential extinction of radiance over an in-water path.

    Per channel ``L * exp(-c * path)``; composing two paths equals one pass
    over their sum.
    """
    radiance = np.asarray(radiance, dtype=np.float64)
    path = np.asarray(path_m, dtype=np.float64)
    if np.any(path < 0):
        raise ValueError("path_m must be non-negative")
    c = np.asarray(c, dtype=np.float64)
    if path.ndim:
        path = path[..., None]
    return radiance * np.exp(-c * path)


def composite_veiling(bottom, path_m, c, veil):
    """Blend the attenuated bottom signal toward the water-column radiance.

    Per channel ``bottom * exp(-c p) + veil * (1 - exp(-c p))``: a convex
    combination, so the result stays between bottom and veil channel-wise.
    """
    bottom = np.asarray(bottom, dtype=np.float64)
    path = np.asarray(path_m, dtype=np.float64)
    if np.any(path < 0):
        raise ValueError("path_m must be non-negative")
    c = np.asarray(c, dtype=np.float64)
    veil = np.asarray(veil, dtype=np.float64)
    if path.ndim:
        path = path[..., None]
    t = np.exp(-c * path)
    return bottom * t + veil * (1.0 - t)


def sun_direction(sun: SunParams):
    """Unit vector from the surface toward the sun.

    Azimuth is measured counterclockwise from +x in the horizontal plane.
    """
    el = np.deg2rad(sun.elevation_deg)
    az = np.deg2rad(sun.azimuth_deg)
    return np.array([np.cos(el) * np.cos(az),
                     np.cos(el) * np.sin(az),
                     np.sin(el)])


def glint_falloff(misalign_deg, angular_radius_deg, feather_deg):
    """Smooth cutoff of the specular sun disk.

    1 inside the disk, smoothstep ramp across the feather band, exactly 0
    beyond ``angular_radius + feather``.
    """
    t = (np.asarray(misalign_deg, dtype=np.float64) - angular_radius_deg)
    t = np.clip(t / max(feather_deg, 1e-12), 0.0, 1.0)
    return 1.0 - t * t * (3.0 - 2.0 * t)


def sun_glint_radiance(view_dir, surface_normal, sun: SunParams,
                       water_ior: float, feather_deg: float = 2.5,
                       sun_rgb=(1.0, 1.0, 1.0),
                       sky_radiance=(0.01, 0.012, 0.016)):
    """Specular surface radiance toward the sensor: sun glint plus sky.

    The view direction (pointing down, toward the surface) is mirrored
    about the facet normal; when the mirror direction falls within the
    feathered solar disk the Fresnel-weighted solar irradiance is returned,
    otherwise only the Fresnel-weighted ambient sky reflection.
    """
    view_dir = np.asarray(view_dir, dtype=np.float64)
    surface_normal = np.asarray(surface_normal, dtype=np.float64)
    mirror = reflect(view_dir, surface_normal)
    s = sun_direction(sun)
    cos_align = np.clip(np.sum(mirror * s, axis=-1), -1.0, 1.0)
    misalign_deg = np.degrees(np.arccos(cos_align))
    falloff = glint_falloff(misalign_deg, sun.angular_radius_deg, feather_deg)

    cos_i = np.clip(-np.sum(view_dir * surface_normal, axis=-1), 0.0, 1.0)
    r = fresnel_unpolarized(cos_i, 1.0, water_ior)

    glint = (r * falloff * sun.irradiance)[..., None] * np.asarray(sun_rgb, dtype=np.float64)
    sky = r[..., None] * np.asarray(sky_radiance, dtype=np.float64)
    return glint + sky

"""Laguerre-Gaussian beam propagation and the thin micro-lens transform.

Free-space propagation follows the standard Gaussian beam relations; transverse
mode patterns are Laguerre-Gaussian with radial index p and azimuthal index l.
All lengths are in meters, angles in radians, intensities in W/m^2 per watt of
mode power (so the full-plane integral of each mode pattern is 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

# Radial index guard: keeps every (p + l)! used by the default mode sets inside
# the exact-integer range of a double and the polynomial sum well conditioned.
MAX_RADIAL_INDEX = 12

# Factorials as floats, 0! .. 20!. 20! = 2^18 * odd, still exact in a double.
_FACTORIAL = tuple(float(math.factorial(n)) for n in range(21))


def _factorial(n: int) -> float:
    if n < len(_FACTORIAL):
        return _FACTORIAL[n]
    return float(math.factorial(n))


# Default transverse mode mix: p in {0, 1} x l in {0, 1, 2, 3}, equal power.
DEFAULT_MODES: tuple[tuple[int, int, float], ...] = tuple(
    (p, l, 1.0 / 8.0) for p in (0, 1) for l in (0, 1, 2, 3)
)

FUNDAMENTAL_MODE: tuple[tuple[int, int, float], ...] = ((0, 0, 1.0),)


@dataclass(frozen=True)
class BeamSpec:
    """Source beam: waist radius, wavelength and transverse mode mix.

    w0          waist radius at the source, m
    wavelength  vacuum wavelength, m
    modes       tuple of (p, l, power_fraction); fractions must sum to 1
    """

    w0: float
    wavelength: float
    modes: tuple[tuple[int, int, float], ...] = DEFAULT_MODES

    def __post_init__(self):
        if not self.w0 > 0:
            raise DomainError(f"w0 must be positive, got {self.w0!r}")
        if not self.wavelength > 0:
            raise DomainError(f"wavelength must be positive, got {self.wavelength!r}")
        if not self.modes:
            raise DomainError("modes must contain at least one (p, l, fraction) entry")
        seen = set()
        total = 0.0
        for p, l, frac in self.modes:
            if p < 0 or l < 0:
                raise DomainError(f"mode indices must be non-negative, got ({p}, {l})")
            if p > MAX_RADIAL_INDEX:
                raise DomainError(
                    f"radial index {p} exceeds the supported maximum {MAX_RADIAL_INDEX}"
                )
            if (p, l) in seen:
                raise DomainError(f"duplicate mode ({p}, {l})")
            seen.add((p, l))
            if frac < 0:
                raise DomainError(f"mode ({p}, {l}) has negative power fraction {frac!r}")
            total += frac
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"mode power fractions must sum to 1, got {total!r}")


@dataclass(frozen=True)
class LensSpec:
    """Thin micro-lens in front of the source.

    f        focal length, m
    d1       source-to-lens distance, m
    n_refr   lens material refractive index; recorded for documentation, the
             thin-lens transform is fully determined by f and d1
    """

    f: float
    d1: float
    n_refr: float = 1.5

    def __post_init__(self):
        if not self.f > 0:
            raise DomainError(f"focal length must be positive, got {self.f!r}")
        if self.d1 < 0:
            raise DomainError(f"source-to-lens distance must be >= 0, got {self.d1!r}")
        if not self.n_refr > 1:
            raise DomainError(f"refractive index must exceed 1, got {self.n_refr!r}")


@dataclass(frozen=True)
class TransformedBeam:
    """Beam parameters after the lens.

    d2      distance from the lens to the new waist plane, m
    w_l     new waist radius, m
    theta2  post-lens far-field half divergence, rad
    k       waist magnification w_l / w0
    """

    d2: float
    w_l: float
    theta2: float
    k: float

    def __post_init__(self):
        if not self.w_l > 0:
            raise DomainError("transformed waist must be positive")
        if not math.isfinite(self.d2):
            raise DomainError("transformed waist location must be finite")
        if not self.k > 0:
            raise DomainError("waist magnification must be positive")


def laguerre(p: int, l: int, x):
    """Generalized Laguerre polynomial L_p^l(x) by its explicit finite sum.

    L_p^l(x) = sum_{m=0}^{p} (-1)^m (p+l)! / ((p-m)! (l+m)! m!) x^m

    x may be a scalar or ndarray. p is guarded at MAX_RADIAL_INDEX so the
    factorial ratios stay exact in double precision.
    """
    if p < 0 or l < 0:
        raise DomainError(f"polynomial indices must be non-negative, got ({p}, {l})")
    if p > MAX_RADIAL_INDEX:
        raise DomainError(
            f"radial index {p} exceeds the supported maximum {MAX_RADIAL_INDEX}"
        )
    coeffs = [
        (-1.0) ** m * _factorial(p + l) / (_factorial(p - m) * _factorial(l + m) * _factorial(m))
        for m in range(p + 1)
    ]
    # Horner evaluation from the highest power down.
    acc = np.multiply(coeffs[p], np.ones_like(np.asarray(x, dtype=float)))
    for m in range(p - 1, -1, -1):
        acc = acc * x + coeffs[m]
    if np.ndim(x) == 0:
        return float(acc)
    return acc


def mode_norm_const(p: int, l: int, w0: float) -> float:
    """Normalization constant A_p^l = (1/w0) sqrt(2 p! / (pi (p+l)!))."""
    if p < 0 or l < 0:
        raise DomainError(f"mode indices must be non-negative, got ({p}, {l})")
    if p > MAX_RADIAL_INDEX:
        raise DomainError(
            f"radial index {p} exceeds the supported maximum {MAX_RADIAL_INDEX}"
        )
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got {w0!r}")
    return math.sqrt(2.0 * _factorial(p) / (math.pi * _factorial(p + l))) / w0


def rayleigh_range(beam: BeamSpec) -> float:
    """Rayleigh range z_r = pi w0^2 / lambda, m."""
    return math.pi * beam.w0**2 / beam.wavelength


def beam_radius(z: float, beam: BeamSpec) -> float:
    """1/e^2 beam radius w(z) = w0 sqrt(1 + (z/z_r)^2), m. Requires z >= 0."""
    if z < 0:
        raise DomainError(f"propagation distance must be >= 0, got {z!r}")
    zr = rayleigh_range(beam)
    return beam.w0 * math.sqrt(1.0 + (z / zr) ** 2)


def far_field_divergence(beam: BeamSpec) -> float:
    """Asymptotic half divergence atan(lambda / (pi w0)), rad."""
    return math.atan(beam.wavelength / (math.pi * beam.w0))


def divergence_half_angle(z: float, beam: BeamSpec) -> float:
    """Half divergence seen from the waist, theta(z) = atan(w(z)/z). Requires z > 0.

    Decreases monotonically toward atan(lambda/(pi w0)) as z grows.
    """
    if not z > 0:
        raise DomainError(f"divergence is defined for z > 0, got {z!r}")
    return math.atan(beam_radius(z, beam) / z)

def phase_front_radius(z: float, beam: BeamSpec) -> float:
    """Wavefront curvature radius R(z) = z (1 + (z_r/z)^2), m. Requires z > 0."""
    if not z > 0:
        raise DomainError(f"phase front radius is defined for z > 0, got {z!r}")
    zr = rayleigh_range(beam)
    return z * (1.0 + (zr / z) ** 2)


def mode_intensity(p: int, l: int, r, z: float, beam: BeamSpec):
    """Normalized LG mode intensity at radius r and distance z, 1/m^2.

    |U_{p,l}(r, z)|^2 = (A_p^l)^2 (w0^2 / w_z^2) (2 r^2 / w_z^2)^l
                        [L_p^l(2 r^2 / w_z^2)]^2 exp(-2 r^2 / w_z^2)

    Integrating over the transverse plane gives 1 for any z. r may be a
    scalar or ndarray of non-negative radii.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("radial coordinate must be >= 0")
    w_z = beam_radius(z, beam)
    a = mode_norm_const(p, l, beam.w0)
    x = 2.0 * r_arr**2 / w_z**2
    val = (a**2 * beam.w0**2 / w_z**2) * x**l * laguerre(p, l, x) ** 2 * np.exp(-x)
    if np.ndim(r) == 0:
        return float(val)
    return val


def beam_intensity(r, z: float, beam: BeamSpec):
    """Total intensity: mode intensities weighted by their power fractions."""
    total = None
    for p, l, frac in beam.modes:
        if frac == 0.0:
            continue
        term = frac * np.asarray(mode_intensity(p, l, r, z, beam))
        total = term if total is None else total + term
    if total is None:
        total = np.zeros_like(np.asarray(r, dtype=float))
    if np.ndim(r) == 0:
        return float(total)
    return total


def lens_transform(beam: BeamSpec, lens: LensSpec) -> TransformedBeam:
    """Image the source waist through the thin lens.

    Standard Gaussian waist relay: with delta = d1 - f and z_r the source
    Rayleigh range,

        d2  = f (z_r^2 + d1 delta) / (delta^2 + z_r^2)
        w_l = w0 f / sqrt(delta^2 + z_r^2)

    equivalent to propagating the complex beam parameter through free space
    d1 and a thin lens of focal length f. The denominator is strictly
    positive for any physical input, so there is no singular configuration.
    k = w_l/w0 and theta2 = theta/k, theta being the pre-lens far-field
    divergence; theta2 coincides with the transformed beam's own asymptotic
    divergence.
    """
    zr = rayleigh_range(beam)
    delta = lens.d1 - lens.f
    den = delta**2 + zr**2
    d2 = lens.f * (zr**2 + lens.d1 * delta) / den
    w_l = beam.w0 * lens.f / math.sqrt(den)
    k = w_l / beam.w0
    theta2 = far_field_divergence(beam) / k
    return TransformedBeam(d2=d2, w_l=w_l, theta2=theta2, k=k)


def transformed_source(beam: BeamSpec, lens: LensSpec | None) -> tuple[BeamSpec, float]:
    """Effective (beam, waist offset) pair for downstream propagation.

    Without a lens the source itself is returned with zero offset. With a
    lens, the returned beam has the transformed waist w_l located d2 past
    the lens, so intensities at a plane z from the source are evaluated at
    z - d2 from the new waist.
    """
    if lens is None:
        return beam, 0.0
    tb = lens_transform(beam, lens)
    return replace(beam, w0=tb.w_l), tb.d2

"""Line-of-sight optical channel: captured power fractions per (user, AP) link.

Each entry of the channel matrix is the fraction of an AP's emitted power
landing on a user's detector disc: the beam intensity integrated over the
disc by 2-D polar quadrature, summed over the source's transverse modes.
Links arriving outside a receiver's field of view contribute zero. Wall
reflections are out of scope; the stub below keeps the interface visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .beam_optics import BeamSpec, LensSpec, beam_intensity, transformed_source
from .errors import DomainError
from .scene import Scene

# Relative convergence target for the adaptive disc quadrature.
_QUAD_RTOL = 1e-8
_QUAD_START_ORDER = 16
_QUAD_MAX_ORDER = 1024


@dataclass
class ChannelMatrix:
    """Gains plus the geometry they were computed from.

    gains      (users x aps) captured power fractions
    distances  (users x aps) propagation distances from the source plane, m
    offsets    (users x aps) lateral offsets between beam axis and detector
               center, m
    """

    gains: np.ndarray
    distances: np.ndarray
    offsets: np.ndarray


@lru_cache(maxsize=16)
def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _disc_capture_fixed(
    beam: BeamSpec, z: float, rho: float, aperture_radius: float, order: int
) -> float:
    """Fixed-order tensor Gauss-Legendre integral of the intensity over the disc.

    Detector-centered polar coordinates (s, phi); the distance from the beam
    axis to an integration node is r = sqrt(rho^2 + s^2 + 2 rho s cos phi).
    """
    x, w = _gauss_nodes(order)
    s = 0.5 * aperture_radius * (x + 1.0)
    w_s = 0.5 * aperture_radius * w * s
    phi = math.pi * (x + 1.0)
    w_phi = math.pi * w
    r = np.sqrt(
        rho**2
        + s[:, None] ** 2
        + 2.0 * rho * s[:, None] * np.cos(phi)[None, :]
    )
    intensity = beam_intensity(r, z, beam)
    return float(w_s @ intensity @ w_phi)


def captured_fraction(
    beam: BeamSpec,
    lens: LensSpec | None,
    z: float,
    rho: float,
    aperture_radius: float,
) -> float:
    """Fraction of emitted power captured by a disc detector.

    z is the distance from the source plane, rho the lateral offset of the
    disc center from the beam axis, both in meters. With a lens, intensities
    come from the transformed beam whose waist sits d2 past the lens, so the
    effective propagation distance is z - d2 (z <= d2 is out of domain).
    The quadrature order doubles until the result changes by less than
    1e-8 relative; the result is clipped to [0, 1].
    """
    if not z > 0:
        raise DomainError(f"link distance must be positive, got {z!r}")
    if rho < 0:
        raise DomainError(f"lateral offset must be >= 0, got {rho!r}")
    if not aperture_radius > 0:
        raise DomainError(f"aperture radius must be positive, got {aperture_radius!r}")

    eff_beam, waist_offset = transformed_source(beam, lens)
    z_eff = z - waist_offset
    if lens is not None and z_eff <= 0:
        raise DomainError(
            f"link distance {z!r} m does not reach past the transformed waist at "
            f"{waist_offset!r} m behind the lens"
        )

    prev = _disc_capture_fixed(eff_beam, z_eff, rho, aperture_radius, _QUAD_START_ORDER)
    order = _QUAD_START_ORDER
    while order < _QUAD_MAX_ORDER:
        order *= 2
        cur = _disc_capture_fixed(eff_beam, z_eff, rho, aperture_radius, order)
        if abs(cur - prev) <= _QUAD_RTOL * abs(cur) + 1e-16:
            return min(max(cur, 0.0), 1.0)
        prev = cur
    raise DomainError(
        f"disc quadrature did not converge by order {_QUAD_MAX_ORDER} "
        f"(z={z!r}, rho={rho!r}, aperture={aperture_radius!r})"
    )


def build_channel_matrix(scene: Scene, include_incidence_cosine: bool = False) -> ChannelMatrix:
    """Evaluate every (user, AP) link in the scene.

    Beams point straight down, so the propagation distance is the vertical
    drop from the ceiling to the receive plane and the lateral offset is the
    horizontal AP-user distance. Links whose arrival angle at the detector
    exceeds the user's field-of-view half angle are zeroed. The incidence
    cosine factor is omitted by default (beams are near-vertical); pass
    include_incidence_cosine=True to apply it.
    """
    n_users = len(scene.users)
    n_aps = len(scene.aps)
    gains = np.zeros((n_users, n_aps))
    distances = np.zeros((n_users, n_aps))
    offsets = np.zeros((n_users, n_aps))
    for u, user in enumerate(scene.users):
        aperture = math.sqrt(user.detector_area / math.pi)
        for a, ap in enumerate(scene.aps):
            z = ap.position[2] - scene.room.rx_plane_height
            rho = math.hypot(
                user.position[0] - ap.position[0], user.position[1] - ap.position[1]
            )
            distances[u, a] = z
            offsets[u, a] = rho
            incidence = math.atan2(rho, z)
            if incidence > user.fov_half_angle:
                continue
            h = captured_fraction(ap.beam, ap.lens, z, rho, aperture)
            if include_incidence_cosine:
                h *= z / math.hypot(z, rho)
            gains[u, a] = h
    return ChannelMatrix(gains=gains, distances=distances, offsets=offsets)


def reflected_power_fraction(
    scene: Scene, user_index: int, ap_index: int, order: int = 1
) -> float:
    """Wall-reflection contribution of the given order. LOS-only model: 0."""
    return 0.0

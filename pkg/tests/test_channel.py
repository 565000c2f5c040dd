import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_genlaguerre

from vcselnet import (
    BeamSpec,
    build_channel_matrix,
    captured_fraction,
    default_scene,
    lens_transform,
    reflected_power_fraction,
)
from vcselnet.channel import _disc_capture_fixed
from vcselnet.errors import DomainError

# 2 cm^2 detector disc radius.
APERTURE = math.sqrt(2e-4 / math.pi)


def independent_intensity(beam, r, z):
    """Beam intensity rebuilt from scratch with scipy's Laguerre polynomials."""
    zr = math.pi * beam.w0**2 / beam.wavelength
    w = beam.w0 * math.sqrt(1.0 + (z / zr) ** 2)
    total = 0.0
    for p, l, frac in beam.modes:
        if frac == 0.0:
            continue
        a2 = 2.0 * math.factorial(p) / (math.pi * math.factorial(p + l)) / beam.w0**2
        x = 2.0 * r**2 / w**2
        total += frac * (
            a2 * (beam.w0**2 / w**2) * x**l * eval_genlaguerre(p, l, x) ** 2 * math.exp(-x)
        )
    return total


class TestCapturedFraction:
    def test_centered_fundamental_matches_closed_form(self, fundamental_beam):
        # Encircled power of a Gaussian over a centered disc: 1 - exp(-2a^2/w^2).
        z = 2.0
        zr = math.pi * 25e-12 / 850e-9
        w = 5e-6 * math.sqrt(1.0 + (z / zr) ** 2)
        closed = 1.0 - math.exp(-2.0 * APERTURE**2 / w**2)
        got = captured_fraction(fundamental_beam, None, z, 0.0, APERTURE)
        assert got == pytest.approx(closed, rel=1e-10)

    def test_centered_multimode_matches_radial_quadrature(self, multimode_beam):
        z = 2.0
        oracle, err = integrate.quad(
            lambda r: independent_intensity(multimode_beam, r, z) * 2.0 * math.pi * r,
            0.0,
            APERTURE,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=200,
        )
        got = captured_fraction(multimode_beam, None, z, 0.0, APERTURE)
        assert got == pytest.approx(oracle, rel=1e-8)

    def test_offset_multimode_matches_2d_quadrature(self, multimode_beam):
        z, rho = 2.0, 1.0
        oracle, err = integrate.dblquad(
            lambda phi, s: independent_intensity(
                multimode_beam,
                math.sqrt(rho**2 + s**2 + 2.0 * rho * s * math.cos(phi)),
                z,
            )
            * s,
            0.0,
            APERTURE,
            0.0,
            2.0 * math.pi,
            epsabs=1e-13,
            epsrel=1e-10,
        )
        got = captured_fraction(multimode_beam, None, z, rho, APERTURE)
        assert got == pytest.approx(oracle, rel=1e-6)

    def test_huge_aperture_captures_everything(self, multimode_beam):
        z = 2.0
        zr = math.pi * 25e-12 / 850e-9
        w = 5e-6 * math.sqrt(1.0 + (z / zr) ** 2)
        got = captured_fraction(multimode_beam, None, z, 0.0, 10.0 * w)
        assert got == pytest.approx(1.0, abs=1e-9)

    def test_far_offset_captures_nothing(self, fundamental_beam):
        z = 2.0
        zr = math.pi * 25e-12 / 850e-9
        w = 5e-6 * math.sqrt(1.0 + (z / zr) ** 2)
        got = captured_fraction(fundamental_beam, None, z, 50.0 * w, APERTURE)
        assert got <= 1e-12

    def test_monotone_in_aperture(self, multimode_beam):
        vals = [
            captured_fraction(multimode_beam, None, 2.0, 0.5, a)
            for a in (1e-3, 4e-3, APERTURE, 2e-2)
        ]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_lens_shifts_the_source_plane(self, fundamental_beam, table_lens):
        z = 2.0
        tb = lens_transform(fundamental_beam, table_lens)
        moved = dataclasses.replace(fundamental_beam, w0=tb.w_l)
        with_lens = captured_fraction(fundamental_beam, table_lens, z, 0.3, APERTURE)
        manual = captured_fraction(moved, None, z - tb.d2, 0.3, APERTURE)
        assert with_lens == pytest.approx(manual, rel=1e-12)

    def test_result_never_exceeds_unity(self, multimode_beam):
        z = 1e-3
        zr = math.pi * 25e-12 / 850e-9
        w = 5e-6 * math.sqrt(1.0 + (z / zr) ** 2)
        got = captured_fraction(multimode_beam, None, z, 0.0, 20.0 * w)
        assert got <= 1.0
        assert got == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(z=0.0, rho=0.0, aperture_radius=APERTURE),
            dict(z=-1.0, rho=0.0, aperture_radius=APERTURE),
            dict(z=2.0, rho=-0.1, aperture_radius=APERTURE),
            dict(z=2.0, rho=0.0, aperture_radius=0.0),
        ],
    )
    def test_domain_errors(self, fundamental_beam, kwargs):
        with pytest.raises(DomainError):
            captured_fraction(fundamental_beam, None, **kwargs)

    def test_lens_requires_distance_past_transformed_waist(
        self, fundamental_beam, table_lens
    ):
        tb = lens_transform(fundamental_beam, table_lens)
        with pytest.raises(DomainError, match="transformed waist"):
            captured_fraction(
                fundamental_beam, table_lens, 0.5 * tb.d2, 0.0, APERTURE
            )

    def test_fixed_order_quadrature_has_converged(self, multimode_beam):
        a = _disc_capture_fixed(multimode_beam, 2.0, 1.0, APERTURE, 256)
        b = _disc_capture_fixed(multimode_beam, 2.0, 1.0, APERTURE, 512)
        assert a == pytest.approx(b, rel=1e-10)


class TestChannelMatrix:
    def test_default_scene_geometry(self):
        scene = default_scene()
        h = build_channel_matrix(scene)
        assert h.gains.shape == (4, 4)
        assert np.all(h.distances == 2.0)
        assert h.offsets[0, 0] == 0.0
        assert h.offsets[0, 1] == pytest.approx(2.0)
        assert h.offsets[0, 3] == pytest.approx(2.0 * math.sqrt(2.0))

    def test_diagonal_dominates(self):
        h = build_channel_matrix(default_scene())
        diag = np.diag(h.gains)
        off = h.gains - np.diag(diag)
        assert np.all(diag > 0)
        assert off.max() < diag.min()

    def test_symmetric_for_symmetric_layout(self):
        # The default square AP grid with on-axis users makes equal-offset
        # pairs; the gain matrix inherits the symmetry.
        h = build_channel_matrix(default_scene())
        assert np.allclose(h.gains, h.gains.T, rtol=1e-9, atol=0.0)

    def test_entries_match_direct_evaluation(self):
        scene = default_scene()
        h = build_channel_matrix(scene)
        ap = scene.aps[1]
        user = scene.users[0]
        rho = math.hypot(
            user.position[0] - ap.position[0], user.position[1] - ap.position[1]
        )
        expected = captured_fraction(
            ap.beam, ap.lens, 2.0, rho, math.sqrt(user.detector_area / math.pi)
        )
        assert h.gains[0, 1] == expected

    def test_fov_zeroes_out_of_view_links(self):
        scene = default_scene()
        narrow = tuple(
            dataclasses.replace(u, fov_half_angle=0.1) for u in scene.users
        )
        h = build_channel_matrix(dataclasses.replace(scene, users=narrow))
        # On-axis arrivals (incidence 0) survive; the 2 m offset links arrive
        # at atan(2/2) ~ 0.785 rad and are cut.
        assert np.all(np.diag(h.gains) > 0)
        off = h.gains - np.diag(np.diag(h.gains))
        assert np.all(off == 0.0)

    def test_incidence_cosine_factor(self):
        scene = default_scene()
        plain = build_channel_matrix(scene)
        cosine = build_channel_matrix(scene, include_incidence_cosine=True)
        z = 2.0
        expected = plain.gains * (z / np.hypot(z, plain.offsets))
        assert np.allclose(cosine.gains, expected, rtol=1e-12, atol=0.0)

    def test_reflections_are_out_of_scope(self):
        scene = default_scene()
        assert reflected_power_fraction(scene, 0, 0) == 0.0
        assert reflected_power_fraction(scene, 1, 2, order=3) == 0.0

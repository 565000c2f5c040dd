import dataclasses

import pytest

from vcselnet import (
    BeamSpec,
    FUNDAMENTAL_MODE,
    LensSpec,
    SafetySpec,
    default_scene,
    load_scene,
)

# Exposure limit used throughout the tests. The library deliberately ships no
# default for this (it is a regulatory, site-specific number), so the suite
# pins one here.
DEFAULT_MPE = 10.0

# A 1 m x 1 m footprint with the APs pulled inward. Unfocused beam footprints
# overlap at the receive plane here, so randomly placed users always keep a
# full-rank channel. In the default 5 m room the pencil beams leave most
# random draws with an all-zero or rank-deficient channel matrix — a correct
# hard failure, but useless for exercising the statistics path.
COMPACT_CONFIG = f"""\
[room]
width_m = 1.0
length_m = 1.0

[transmitters]
positions_m = (0.25, 0.25, 3.0); (0.25, 0.75, 3.0); (0.75, 0.25, 3.0); (0.75, 0.75, 3.0)

[safety]
mpe_w_per_m2 = {DEFAULT_MPE}
"""


@pytest.fixture
def fundamental_beam():
    """Single-mode 5 um / 850 nm beam."""
    return BeamSpec(w0=5e-6, wavelength=850e-9, modes=FUNDAMENTAL_MODE)


@pytest.fixture
def multimode_beam():
    """Default eight-mode beam at 5 um / 850 nm."""
    return BeamSpec(w0=5e-6, wavelength=850e-9)


@pytest.fixture
def table_lens():
    """Micro-lens at the reference focal length and stand-off."""
    return LensSpec(f=0.127e-3, d1=0.133e-3)


@pytest.fixture
def safety():
    return SafetySpec(mpe=DEFAULT_MPE)


@pytest.fixture
def scene_with_mpe():
    """Default four-AP scene with the exposure limit set."""
    scene = default_scene()
    return dataclasses.replace(scene, safety=SafetySpec(mpe=DEFAULT_MPE))


@pytest.fixture
def compact_scene():
    """Small-footprint scene where random placement is always zero-forceable."""
    return load_scene(COMPACT_CONFIG)

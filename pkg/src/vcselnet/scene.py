"""Scene description and config round-tripping.

A Scene is the immutable input to every evaluation: room geometry, ceiling
access points (each an N x N VCSEL array treated as one co-located source),
user terminals on the receive plane, electrical parameters and the
eye-safety inputs. Scenes load from a flat INI-style document (sections and
key = value lines, SI units annotated in each key name) and serialize back
losslessly.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .beam_optics import DEFAULT_MODES, BeamSpec, LensSpec
from .errors import ConfigError, InfeasibleError
from .eye_safety import SafetySpec, max_safe_power

_DEFAULT_AP_POSITIONS = ((3.0, 3.0, 3.0), (1.0, 3.0, 3.0), (3.0, 1.0, 3.0), (1.0, 1.0, 3.0))


@dataclass(frozen=True)
class Room:
    """Rectangular room; the receive plane is horizontal at rx_plane_height."""

    width: float = 5.0
    length: float = 5.0
    height: float = 3.0
    rx_plane_height: float = 1.0

    def __post_init__(self):
        for name in ("width", "length", "height", "rx_plane_height"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"room.{name} must be positive, got {getattr(self, name)!r}")
        if self.rx_plane_height >= self.height:
            raise ConfigError(
                f"room.rx_plane_height {self.rx_plane_height!r} must lie below the "
                f"ceiling height {self.height!r}"
            )


@dataclass(frozen=True)
class AccessPoint:
    """Ceiling transmitter: an N x N VCSEL array pointing straight down.

    The array is modeled as a single co-located source with one shared beam;
    its emitted power is array_n^2 * per_vcsel_power. per_vcsel_power = None
    means "resolve to the eye-safe cap at evaluation time".
    """

    position: tuple[float, float, float]
    beam: BeamSpec
    lens: LensSpec | None = None
    array_n: int = 5
    pitch: float = 10e-6
    per_vcsel_power: float | None = None

    def __post_init__(self):
        if len(self.position) != 3:
            raise ConfigError(f"access point position must be (x, y, z), got {self.position!r}")
        if self.array_n < 1:
            raise ConfigError(f"array_n must be >= 1, got {self.array_n!r}")
        if not self.pitch > 0:
            raise ConfigError(f"pitch must be positive, got {self.pitch!r}")
        if self.per_vcsel_power is not None and not self.per_vcsel_power > 0:
            raise ConfigError(
                f"per_vcsel_power must be positive, got {self.per_vcsel_power!r}"
            )


@dataclass(frozen=True)
class UserTerminal:
    """Receiver on the receive plane, photodiode facing the ceiling."""

    position: tuple[float, float]
    detector_area: float = 2e-4
    responsivity: float = 0.4
    fov_half_angle: float = math.pi / 2

    def __post_init__(self):
        if len(self.position) != 2:
            raise ConfigError(f"user position must be (x, y), got {self.position!r}")
        if not self.detector_area > 0:
            raise ConfigError(f"detector_area must be positive, got {self.detector_area!r}")
        if not 0.0 < self.responsivity <= 1.2:
            raise ConfigError(
                f"responsivity must lie in (0, 1.2] A/W, got {self.responsivity!r}"
            )
        if not 0.0 < self.fov_half_angle <= math.pi / 2:
            raise ConfigError(
                f"fov_half_angle must lie in (0, pi/2] rad, got {self.fov_half_angle!r}"
            )


@dataclass(frozen=True)
class ElectricalSpec:
    """Receiver/driver electrical parameters.

    rx_bandwidth            receiver electrical bandwidth B_e, Hz
    optical_bandwidth       source modulation bandwidth B_o, Hz (recorded;
                            the noise model does not consume it)
    load_resistance         receiver load, ohm
    noise_figure_db         receiver noise figure, dB
    rin_db_per_hz           relative intensity noise, dB/Hz (negative)
    preamp_noise_density    input-referred preamp noise, A^2/Hz
    temperature             K
    bias_current            per-VCSEL bias, A
    drive_voltage           per-VCSEL drive amplitude, V
    per_vcsel_consumption   optional wall-plug override, W per VCSEL; when
                            unset, consumption is bias_current * drive_voltage
    fec_limit               BER threshold for the hard-decision rate model
    """

    rx_bandwidth: float = 1.75e9
    optical_bandwidth: float = 5e9
    load_resistance: float = 50.0
    noise_figure_db: float = 5.0
    rin_db_per_hz: float = -155.0
    preamp_noise_density: float = (4.47e-12) ** 2
    temperature: float = 300.0
    bias_current: float = 9e-3
    drive_voltage: float = 0.9
    per_vcsel_consumption: float | None = None
    fec_limit: float = 1e-3

    def __post_init__(self):
        positive = (
            "rx_bandwidth",
            "optical_bandwidth",
            "load_resistance",
            "noise_figure_db",
            "preamp_noise_density",
            "temperature",
            "bias_current",
            "drive_voltage",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(
                    f"electrical.{name} must be positive, got {getattr(self, name)!r}"
                )
        if not self.rin_db_per_hz < 0:
            raise ConfigError(
                f"electrical.rin_db_per_hz must be negative, got {self.rin_db_per_hz!r}"
            )
        if self.per_vcsel_consumption is not None and not self.per_vcsel_consumption > 0:
            raise ConfigError(
                "electrical.per_vcsel_consumption must be positive, "
                f"got {self.per_vcsel_consumption!r}"
            )
        if not 0.0 < self.fec_limit < 1.0:
            raise ConfigError(f"electrical.fec_limit must lie in (0, 1), got {self.fec_limit!r}")


@dataclass(frozen=True)
class Scene:
    """Complete static description of one deployment."""

    room: Room
    aps: tuple[AccessPoint, ...]
    users: tuple[UserTerminal, ...]
    electrical: ElectricalSpec
    safety: SafetySpec
    lens_design: LensSpec
    seed: int = 0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.aps:
            raise ConfigError("scene needs at least one access point")
        if not self.users:
            raise ConfigError("scene needs at least one user")
        if len(self.users) > len(self.aps):
            raise ConfigError(
                f"{len(self.users)} users exceed {len(self.aps)} access points; "
                "zero-forcing needs users <= access points"
            )
        if self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        for i, ap in enumerate(self.aps):
            x, y, z = ap.position
            if not (0.0 <= x <= self.room.width and 0.0 <= y <= self.room.length):
                raise ConfigError(f"access point {i} at {ap.position!r} lies outside the room")
            if z != self.room.height:
                raise ConfigError(
                    f"access point {i} must sit at ceiling height {self.room.height!r}, "
                    f"got z = {z!r}"
                )
        for i, user in enumerate(self.users):
            x, y = user.position
            if not (0.0 <= x <= self.room.width and 0.0 <= y <= self.room.length):
                raise ConfigError(f"user {i} at {user.position!r} lies outside the room footprint")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _parse_tuples(text: str, arity: tuple[int, ...], key: str) -> list[tuple[float, ...]]:
    """Parse "(a, b); (c, d)" style position lists."""
    out = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        parts = [s for s in (p.strip() for p in chunk.split(",")) if s]
        if len(parts) not in arity:
            raise ConfigError(
                f"{key}: expected tuples of {'/'.join(map(str, arity))} numbers, got {chunk!r}"
            )
        try:
            out.append(tuple(float(s) for s in parts))
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from exc
    return out


def _parse_modes(text: str) -> tuple[tuple[int, int, float], ...]:
    """Parse "p,l:fraction; p,l:fraction" mode lists."""
    modes = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            indices, frac = chunk.split(":")
            p_s, l_s = indices.split(",")
            modes.append((int(p_s), int(l_s), float(frac)))
        except ValueError as exc:
            raise ConfigError(
                f"vcsel.mode_powers: expected 'p,l:fraction' entries, got {chunk!r}"
            ) from exc
    return tuple(modes)


class _Section:
    """Typed access to one config section with key-level error messages."""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self._name = name
        self._section = parser[name] if parser.has_section(name) else {}

    def get(self, key: str, default=None) -> str | None:
        raw = self._section.get(key)
        if raw is None or raw.strip() == "":
            return default
        return raw.strip()

    def _convert(self, key: str, conv, default, kind: str):
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{self._name}.{key}: expected {kind}, got {raw!r}") from exc

    def getfloat(self, key: str, default=None) -> float | None:
        return self._convert(key, float, default, "a number")

    def getint(self, key: str, default=None) -> int | None:
        return self._convert(key, int, default, "an integer")

    def getbool(self, key: str, default=None) -> bool | None:
        truthy = {"1": True, "yes": True, "true": True, "on": True,
                  "0": False, "no": False, "false": False, "off": False}
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return truthy[raw.lower()]
        except KeyError:
            raise ConfigError(f"{self._name}.{key}: expected a boolean, got {raw!r}") from None


def load_scene(text: str) -> Scene:
    """Build a Scene from config text; unset keys take the documented defaults.

    Raises ConfigError for unparseable input (with the offending line) or for
    any field violating its invariant. When the exposure limit is configured,
    explicit per-VCSEL powers above the eye-safe cap are clamped to it and a
    warning record is attached to the scene.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    room_s = _Section(parser, "room")
    room = Room(
        width=room_s.getfloat("width_m", 5.0),
        length=room_s.getfloat("length_m", 5.0),
        height=room_s.getfloat("height_m", 3.0),
        rx_plane_height=room_s.getfloat("rx_plane_height_m", 1.0),
    )

    vcsel_s = _Section(parser, "vcsel")
    modes_raw = vcsel_s.get("mode_powers")
    beam = BeamSpec(
        w0=vcsel_s.getfloat("beam_waist_m", 5e-6),
        wavelength=vcsel_s.getfloat("wavelength_m", 850e-9),
        modes=_parse_modes(modes_raw) if modes_raw else DEFAULT_MODES,
    )
    n_units = vcsel_s.getint("vcsels_per_transmitter", 25)
    array_n = math.isqrt(n_units)
    if array_n * array_n != n_units:
        raise ConfigError(
            f"vcsel.vcsels_per_transmitter must be a square number (N x N array), got {n_units}"
        )
    pitch = vcsel_s.getfloat("pitch_m", 10e-6)
    per_vcsel_power = vcsel_s.getfloat("per_vcsel_power_w")

    lens_s = _Section(parser, "lens")
    lens_design = LensSpec(
        f=lens_s.getfloat("focal_length_m", 0.127e-3),
        d1=lens_s.getfloat("vcsel_to_lens_m", 0.133e-3),
        n_refr=lens_s.getfloat("refractive_index", 1.5),
    )
    lens_enabled = lens_s.getbool("enabled", True)

    tx_s = _Section(parser, "transmitters")
    pos_raw = tx_s.get("positions_m")
    if pos_raw:
        ap_positions = [
            (p[0], p[1], p[2]) for p in _parse_tuples(pos_raw, (3,), "transmitters.positions_m")
        ]
    else:
        ap_positions = list(_DEFAULT_AP_POSITIONS)
    aps = tuple(
        AccessPoint(
            position=pos,
            beam=beam,
            lens=lens_design if lens_enabled else None,
            array_n=array_n,
            pitch=pitch,
            per_vcsel_power=per_vcsel_power,
        )
        for pos in ap_positions
    )

    rx_s = _Section(parser, "receiver")
    detector_area = rx_s.getfloat("detector_area_m2", 2e-4)
    responsivity = rx_s.getfloat("responsivity_a_per_w", 0.4)
    # _rad key (written by dump_scene) wins over the human-friendly degrees key
    # so serialization round-trips bit-identically.
    fov = rx_s.getfloat("fov_half_angle_rad")
    if fov is None:
        fov = math.radians(rx_s.getfloat("fov_half_angle_deg", 90.0))

    elec_s = _Section(parser, "electrical")
    preamp_density = elec_s.getfloat("preamp_noise_a2_per_hz")
    if preamp_density is None:
        preamp_density = elec_s.getfloat("preamp_noise_a_per_sqrt_hz", 4.47e-12) ** 2
    electrical = ElectricalSpec(
        rx_bandwidth=elec_s.getfloat("rx_bandwidth_hz", 1.75e9),
        optical_bandwidth=elec_s.getfloat("vcsel_bandwidth_hz", 5e9),
        load_resistance=elec_s.getfloat("load_resistance_ohm", 50.0),
        noise_figure_db=elec_s.getfloat("tia_noise_figure_db", 5.0),
        rin_db_per_hz=elec_s.getfloat("rin_db_per_hz", -155.0),
        preamp_noise_density=preamp_density,
        temperature=elec_s.getfloat("temperature_k", 300.0),
        bias_current=elec_s.getfloat("bias_current_a", 9e-3),
        drive_voltage=elec_s.getfloat("drive_voltage_v", 0.9),
        per_vcsel_consumption=elec_s.getfloat("per_vcsel_consumption_w"),
        fec_limit=elec_s.getfloat("fec_limit", 1e-3),
    )

    safety_s = _Section(parser, "safety")
    safety = SafetySpec(
        mpe=safety_s.getfloat("mpe_w_per_m2"),
        pupil_radius=safety_s.getfloat("pupil_radius_m", 3.5e-3),
        mhp_floor=safety_s.getfloat("mhp_floor_m", 0.1),
    )

    users_s = _Section(parser, "users")
    seed = users_s.getint("seed", 0)
    count = users_s.getint("count", len(aps))
    placement = users_s.get("placement", "on-axis")
    if placement not in ("on-axis", "random"):
        raise ConfigError(f"users.placement must be 'on-axis' or 'random', got {placement!r}")
    receiver_kwargs = dict(
        detector_area=detector_area, responsivity=responsivity, fov_half_angle=fov
    )
    user_pos_raw = users_s.get("positions_m")
    if user_pos_raw:
        users = []
        for tup in _parse_tuples(user_pos_raw, (2, 3), "users.positions_m"):
            if len(tup) == 3 and tup[2] != room.rx_plane_height:
                raise ConfigError(
                    f"users.positions_m: user height {tup[2]!r} differs from the receive "
                    f"plane at {room.rx_plane_height!r}"
                )
            users.append(UserTerminal(position=(tup[0], tup[1]), **receiver_kwargs))
        users = tuple(users)
    elif placement == "random":
        users = _random_positions(room, count, seed, receiver_kwargs)
    else:
        users = _on_axis_positions(aps, count, receiver_kwargs)

    warnings: list[str] = []
    if safety.mpe is not None:
        clamped_aps = []
        for i, ap in enumerate(aps):
            cap = max_safe_power(ap.beam, safety, ap.lens).p_max
            if ap.per_vcsel_power is not None and ap.per_vcsel_power > cap:
                warnings.append(
                    f"access point {i}: per_vcsel_power {ap.per_vcsel_power!r} W exceeds "
                    f"the eye-safe cap {cap!r} W; clamped"
                )
                ap = replace(ap, per_vcsel_power=cap)
            clamped_aps.append(ap)
        aps = tuple(clamped_aps)

    return Scene(
        room=room,
        aps=aps,
        users=users,
        electrical=electrical,
        safety=safety,
        lens_design=lens_design,
        seed=seed,
        warnings=tuple(warnings),
    )


def default_scene() -> Scene:
    """The all-defaults scene (an empty config)."""
    return load_scene("")


def _on_axis_positions(aps, count: int, receiver_kwargs) -> tuple[UserTerminal, ...]:
    if count < 1:
        raise ConfigError(f"user count must be >= 1, got {count}")
    if count > len(aps):
        raise InfeasibleError(
            f"cannot place {count} users under {len(aps)} access points"
        )
    return tuple(
        UserTerminal(position=(ap.position[0], ap.position[1]), **receiver_kwargs)
        for ap in aps[:count]
    )


def _random_positions(room: Room, count: int, seed: int, receiver_kwargs) -> tuple[UserTerminal, ...]:
    if count < 1:
        raise ConfigError(f"user count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, room.width, count)
    ys = rng.uniform(0.0, room.length, count)
    return tuple(
        UserTerminal(position=(float(x), float(y)), **receiver_kwargs)
        for x, y in zip(xs, ys)
    )


def place_users(scene: Scene, count: int, seed: int) -> Scene:
    """Scene copy with `count` users drawn uniformly over the room footprint.

    Deterministic in `seed`; receiver parameters are taken from the scene's
    first user. Raises InfeasibleError when count exceeds the AP count.
    """
    if count > len(scene.aps):
        raise InfeasibleError(
            f"cannot place {count} users with only {len(scene.aps)} access points"
        )
    template = scene.users[0]
    kwargs = dict(
        detector_area=template.detector_area,
        responsivity=template.responsivity,
        fov_half_angle=template.fov_half_angle,
    )
    users = _random_positions(scene.room, count, seed, kwargs)
    return replace(scene, users=users, seed=seed)


def place_users_on_axis(scene: Scene, count: int) -> Scene:
    """Scene copy with `count` users directly under the first `count` APs."""
    template = scene.users[0]
    kwargs = dict(
        detector_area=template.detector_area,
        responsivity=template.responsivity,
        fov_half_angle=template.fov_half_angle,
    )
    return replace(scene, users=_on_axis_positions(scene.aps, count, kwargs))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def dump_scene(scene: Scene) -> str:
    """Serialize a Scene to config text; load_scene(dump_scene(s)) == s.

    Floats are written with repr so every numeric field round-trips
    bit-identically. User positions are always written explicitly, making the
    dump independent of how the users were originally placed.
    """
    ap0 = scene.aps[0]
    beam = ap0.beam
    elec = scene.electrical
    lens_enabled = ap0.lens is not None
    lines = [
        "[room]",
        f"width_m = {scene.room.width!r}",
        f"length_m = {scene.room.length!r}",
        f"height_m = {scene.room.height!r}",
        f"rx_plane_height_m = {scene.room.rx_plane_height!r}",
        "",
        "[vcsel]",
        f"beam_waist_m = {beam.w0!r}",
        f"wavelength_m = {beam.wavelength!r}",
        f"pitch_m = {ap0.pitch!r}",
        f"vcsels_per_transmitter = {ap0.array_n ** 2}",
        "mode_powers = " + "; ".join(f"{p},{l}:{frac!r}" for p, l, frac in beam.modes),
    ]
    if ap0.per_vcsel_power is not None:
        lines.append(f"per_vcsel_power_w = {ap0.per_vcsel_power!r}")
    lines += [
        "",
        "[lens]",
        f"enabled = {'yes' if lens_enabled else 'no'}",
        f"focal_length_m = {scene.lens_design.f!r}",
        f"vcsel_to_lens_m = {scene.lens_design.d1!r}",
        f"refractive_index = {scene.lens_design.n_refr!r}",
        "",
        "[transmitters]",
        "positions_m = " + "; ".join(
            f"({ap.position[0]!r}, {ap.position[1]!r}, {ap.position[2]!r})" for ap in scene.aps
        ),
        "",
        "[receiver]",
        f"detector_area_m2 = {scene.users[0].detector_area!r}",
        f"responsivity_a_per_w = {scene.users[0].responsivity!r}",
        f"fov_half_angle_rad = {scene.users[0].fov_half_angle!r}",
        "",
        "[electrical]",
        f"rx_bandwidth_hz = {elec.rx_bandwidth!r}",
        f"vcsel_bandwidth_hz = {elec.optical_bandwidth!r}",
        f"load_resistance_ohm = {elec.load_resistance!r}",
        f"tia_noise_figure_db = {elec.noise_figure_db!r}",
        f"rin_db_per_hz = {elec.rin_db_per_hz!r}",
        f"preamp_noise_a2_per_hz = {elec.preamp_noise_density!r}",
        f"temperature_k = {elec.temperature!r}",
        f"bias_current_a = {elec.bias_current!r}",
        f"drive_voltage_v = {elec.drive_voltage!r}",
    ]
    if elec.per_vcsel_consumption is not None:
        lines.append(f"per_vcsel_consumption_w = {elec.per_vcsel_consumption!r}")
    lines.append(f"fec_limit = {elec.fec_limit!r}")
    lines += ["", "[safety]"]
    if scene.safety.mpe is not None:
        lines.append(f"mpe_w_per_m2 = {scene.safety.mpe!r}")
    lines += [
        f"pupil_radius_m = {scene.safety.pupil_radius!r}",
        f"mhp_floor_m = {scene.safety.mhp_floor!r}",
        "",
        "[users]",
        f"count = {len(scene.users)}",
        f"seed = {scene.seed}",
        "positions_m = " + "; ".join(
            f"({u.position[0]!r}, {u.position[1]!r})" for u in scene.users
        ),
        "",
    ]
    return "\n".join(lines)

"""Receiver noise, per-user SINR, achievable rates and energy efficiency.

Noise variances are one-sided power spectral densities integrated over the
receiver electrical bandwidth B_e, in A^2. The desired photocurrent for user
u is I_u = R * (H G)[u,u]; residual streams enter as interference powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants, special

from .channel import ChannelMatrix
from .errors import DomainError
from .precoding import Precoder
from .scene import ElectricalSpec, Scene

ELECTRON_CHARGE = constants.e  # C
BOLTZMANN = constants.k  # J/K


@dataclass(frozen=True)
class NoiseBreakdown:
    """Noise variances in A^2 over the receiver bandwidth."""

    shot: float
    thermal: float
    rin: float
    preamp: float
    total: float


def noise_variance(photocurrent: float, elec: ElectricalSpec) -> NoiseBreakdown:
    """Receiver noise for a given DC signal photocurrent, A^2.

    shot    = 2 q I B_e
    thermal = 4 k_B T F B_e / R_l     (F the linear noise figure)
    rin     = 10^(RIN/10) B_e I^2
    preamp  = N_pr B_e
    """
    if photocurrent < 0:
        raise DomainError(f"photocurrent must be >= 0, got {photocurrent!r}")
    be = elec.rx_bandwidth
    shot = 2.0 * ELECTRON_CHARGE * photocurrent * be
    nf_lin = 10.0 ** (elec.noise_figure_db / 10.0)
    thermal = 4.0 * BOLTZMANN * elec.temperature * nf_lin * be / elec.load_resistance
    rin = 10.0 ** (elec.rin_db_per_hz / 10.0) * be * photocurrent**2
    preamp = elec.preamp_noise_density * be
    return NoiseBreakdown(
        shot=shot, thermal=thermal, rin=rin, preamp=preamp,
        total=shot + thermal + rin + preamp,
    )


def snr_amplitude_ratio(photocurrent: float, elec: ElectricalSpec) -> float:
    """Diagnostic amplitude ratio I / sigma (not the power SINR)."""
    return photocurrent / math.sqrt(noise_variance(photocurrent, elec).total)


def user_sinr(u: int, scene: Scene, h: ChannelMatrix, precoder: Precoder) -> float:
    """Post-precoding SINR for user u.

    SINR_u = I_u^2 / (sigma_total^2(I_u) + sum_{n != u} (R (H G)[u,n])^2)
    with I_u = R (H G)[u,u].
    """
    received = np.asarray(h.gains) @ precoder.g
    responsivity = scene.users[u].responsivity
    i_sig = responsivity * received[u, u]
    if i_sig <= 0.0:
        return 0.0
    interference = responsivity * received[u, :]
    interference = np.delete(interference, u)
    noise = noise_variance(i_sig, scene.electrical).total
    return i_sig**2 / (noise + float(np.sum(interference**2)))


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt(2))."""
    return 0.5 * special.erfc(x / math.sqrt(2.0))


def user_rate(sinr: float, elec: ElectricalSpec, model: str = "shannon") -> float:
    """Achievable rate for one user, bit/s.

    shannon: B_e log2(1 + SINR).
    ook: hard-decision on-off keying; the full B_e when the bit error rate
    Q(sqrt(SINR)) meets the FEC threshold, zero otherwise.
    """
    if sinr < 0:
        raise DomainError(f"SINR must be >= 0, got {sinr!r}")
    if model == "shannon":
        return elec.rx_bandwidth * math.log2(1.0 + sinr)
    if model == "ook":
        return elec.rx_bandwidth if q_function(math.sqrt(sinr)) <= elec.fec_limit else 0.0
    raise DomainError(f"unknown rate model {model!r}; use 'shannon' or 'ook'")


def consumed_power(scene: Scene) -> float:
    """Electrical power drawn by all arrays, W.

    Per VCSEL: bias_current * drive_voltage, unless the per-VCSEL consumption
    override is configured.
    """
    elec = scene.electrical
    per_vcsel = (
        elec.per_vcsel_consumption
        if elec.per_vcsel_consumption is not None
        else elec.bias_current * elec.drive_voltage
    )
    total = sum(ap.array_n**2 * per_vcsel for ap in scene.aps)
    if not total > 0:
        raise DomainError(f"consumed power must be positive, got {total!r}")
    return total


def energy_efficiency(rates, scene: Scene) -> float:
    """Network energy efficiency: sum of user rates over consumed power, bit/J."""
    return float(sum(rates)) / consumed_power(scene)


@dataclass(frozen=True)
class UserLink:
    """Per-user link outcome."""

    snr: float
    rate: float
    photocurrent: float


@dataclass(frozen=True)
class LinkReport:
    """Network-level link budget summary."""

    per_user: tuple[UserLink, ...]
    sum_rate: float
    consumed_power: float
    energy_efficiency: float


def link_report(
    scene: Scene, h: ChannelMatrix, precoder: Precoder, rate_model: str = "shannon"
) -> LinkReport:
    """Evaluate every user and aggregate to network sum rate and efficiency."""
    received = np.asarray(h.gains) @ precoder.g
    users = []
    for u, user in enumerate(scene.users):
        i_sig = user.responsivity * received[u, u]
        if i_sig > 0.0:
            interference = user.responsivity * np.delete(received[u, :], u)
            noise = noise_variance(i_sig, scene.electrical).total
            sinr = i_sig**2 / (noise + float(np.sum(interference**2)))
        else:
            i_sig = max(i_sig, 0.0)
            sinr = 0.0
        rate = user_rate(sinr, scene.electrical, rate_model)
        users.append(UserLink(snr=sinr, rate=rate, photocurrent=i_sig))
    total_rate = sum(link.rate for link in users)
    consumed = consumed_power(scene)
    return LinkReport(
        per_user=tuple(users),
        sum_rate=total_rate,
        consumed_power=consumed,
        energy_efficiency=total_rate / consumed,
    )

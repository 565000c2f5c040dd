"""Beam-waist sweeps and their on-disk outputs.

A sweep re-evaluates the whole pipeline (eye-safe cap, channel, precoder,
link budget) on a waist grid, optionally for both lens modes and several
user-placement seeds. Transmit power at every point is the per-VCSEL
eye-safe cap, so the exposure limit must be configured. Output files are
deterministic byte-for-byte for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channel import ChannelMatrix, build_channel_matrix
from .errors import ConfigError, DomainError, SweepPointError, VcselNetError
from .eye_safety import max_safe_power
from .link_budget import LinkReport, link_report
from .precoding import Precoder, zf_precoder
from .scene import Scene, place_users, place_users_on_axis

SCHEMA_VERSION = "v1"

_CSV_COLUMNS = (
    "waist_m",
    "lens",
    "seed_count",
    "sum_rate_bps",
    "sum_rate_std",
    "ee_bpj",
    "ee_std",
    "min_user_snr_db",
    "p_max_w",
)


@dataclass(frozen=True)
class SweepSpec:
    """Sweep grid and replication plan.

    waist_start / waist_end   inclusive waist range, m
    steps                     number of grid points (linear spacing)
    lens_modes                subset of ("off", "on")
    seeds                     user-placement replicate seeds
    outputs                   directory for emit_outputs
    """

    waist_start: float = 1e-6
    waist_end: float = 8e-6
    steps: int = 8
    lens_modes: tuple[str, ...] = ("off", "on")
    seeds: tuple[int, ...] = (0,)
    outputs: Path = Path("sweep_out")

    def __post_init__(self):
        if not 0 < self.waist_start < self.waist_end:
            raise ConfigError(
                f"need 0 < waist_start < waist_end, got {self.waist_start!r}, {self.waist_end!r}"
            )
        if self.steps < 2:
            raise ConfigError(f"steps must be >= 2, got {self.steps!r}")
        if not self.lens_modes:
            raise ConfigError("at least one lens mode is required")
        for mode in self.lens_modes:
            if mode not in ("off", "on"):
                raise ConfigError(f"lens mode must be 'off' or 'on', got {mode!r}")
        if len(set(self.lens_modes)) != len(self.lens_modes):
            raise ConfigError(f"duplicate lens modes in {self.lens_modes!r}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for seed in self.seeds:
            if seed < 0:
                raise ConfigError(f"seeds must be non-negative, got {seed!r}")


@dataclass(frozen=True)
class SweepRow:
    """One (waist, lens mode) grid point aggregated over seeds."""

    waist: float
    lens_mode: str
    seed_count: int
    sum_rate: float
    sum_rate_std: float
    ee: float
    ee_std: float
    min_user_snr_db: float
    p_max: float


@dataclass(frozen=True)
class SweepResult:
    """Rows plus run metadata; artifacts maps (waist index, lens mode) to the
    first-seed (ChannelMatrix, Precoder) pair when collection was requested."""

    rows: tuple[SweepRow, ...]
    metadata: str
    artifacts: dict[tuple[int, str], tuple[ChannelMatrix, Precoder]]


def _configure(scene: Scene, waist: float, lens_mode: str) -> Scene:
    """Scene copy with every AP at the given waist and lens state, cap-powered."""
    aps = tuple(
        replace(
            ap,
            beam=replace(ap.beam, w0=waist),
            lens=scene.lens_design if lens_mode == "on" else None,
            per_vcsel_power=None,
        )
        for ap in scene.aps
    )
    return replace(scene, aps=aps)


def _evaluate(
    scene: Scene, rate_model: str
) -> tuple[ChannelMatrix, Precoder, LinkReport]:
    caps = np.array(
        [
            ap.array_n**2 * max_safe_power(ap.beam, scene.safety, ap.lens).p_max
            for ap in scene.aps
        ]
    )
    h = build_channel_matrix(scene)
    precoder = zf_precoder(h, caps)
    return h, precoder, link_report(scene, h, precoder, rate_model)


def _min_snr_db(report: LinkReport) -> float:
    snr = min(link.snr for link in report.per_user)
    return 10.0 * math.log10(snr) if snr > 0 else -math.inf


def run_sweep(
    scene: Scene,
    sweep: SweepSpec,
    placement: str = "on-axis",
    user_count: int | None = None,
    rate_model: str = "shannon",
    collect_artifacts: bool = False,
) -> SweepResult:
    """Evaluate the grid; rows ordered by (waist, lens mode).

    placement "on-axis" puts users directly under the first APs (seed
    independent, evaluated once); "random" redraws user positions for every
    seed and reports mean/std across seeds. Any module error is re-raised as
    SweepPointError carrying the (waist, lens, seed) coordinates.
    """
    if scene.safety.mpe is None:
        raise ConfigError(
            "sweeps transmit at the eye-safe cap; set mpe_w_per_m2 in the [safety] section"
        )
    if placement not in ("on-axis", "random"):
        raise ConfigError(f"placement must be 'on-axis' or 'random', got {placement!r}")
    count = user_count if user_count is not None else len(scene.users)

    waists = np.linspace(sweep.waist_start, sweep.waist_end, sweep.steps)
    modes = tuple(sorted(sweep.lens_modes))  # "off" before "on"
    rows: list[SweepRow] = []
    artifacts: dict[tuple[int, str], tuple[ChannelMatrix, Precoder]] = {}

    for w_idx, waist in enumerate(float(w) for w in waists):
        for mode in modes:
            seed = None
            try:
                scn = _configure(scene, waist, mode)
                p_max = min(
                    max_safe_power(ap.beam, scn.safety, ap.lens).p_max for ap in scn.aps
                )
                sum_rates, ees, min_snrs = [], [], []
                if placement == "on-axis":
                    scn_placed = place_users_on_axis(scn, count)
                    h, precoder, report = _evaluate(scn_placed, rate_model)
                    sum_rates = [report.sum_rate] * len(sweep.seeds)
                    ees = [report.energy_efficiency] * len(sweep.seeds)
                    min_snrs = [_min_snr_db(report)] * len(sweep.seeds)
                    if collect_artifacts:
                        artifacts[(w_idx, mode)] = (h, precoder)
                else:
                    for seed in sweep.seeds:
                        scn_placed = place_users(scn, count, seed)
                        h, precoder, report = _evaluate(scn_placed, rate_model)
                        sum_rates.append(report.sum_rate)
                        ees.append(report.energy_efficiency)
                        min_snrs.append(_min_snr_db(report))
                        if collect_artifacts and seed == sweep.seeds[0]:
                            artifacts[(w_idx, mode)] = (h, precoder)
                    seed = None
            except VcselNetError as exc:
                where = f"waist={waist!r} m, lens={mode}" + (
                    f", seed={seed}" if seed is not None else ""
                )
                raise SweepPointError(f"sweep point failed ({where}): {exc}", exc) from exc
            rows.append(
                SweepRow(
                    waist=waist,
                    lens_mode=mode,
                    seed_count=len(sweep.seeds),
                    sum_rate=float(np.mean(sum_rates)),
                    sum_rate_std=float(np.std(sum_rates)),
                    ee=float(np.mean(ees)),
                    ee_std=float(np.std(ees)),
                    min_user_snr_db=float(np.mean(min_snrs)),
                    p_max=p_max,
                )
            )

    metadata = (
        f"schema={SCHEMA_VERSION} placement={placement} rate_model={rate_model} "
        f"users={count} seeds={','.join(str(s) for s in sweep.seeds)} "
        f"lens_modes={','.join(modes)}"
    )
    return SweepResult(rows=tuple(rows), metadata=metadata, artifacts=artifacts)


def _fmt(value: float) -> str:
    return repr(float(value))


def emit_outputs(result: SweepResult, out_dir: Path) -> list[Path]:
    """Write results.csv plus per-figure two-column series files.

    results.csv: one comment line (schema version and run metadata), a header
    and one row per (waist, lens mode). Series files fig_sum_rate.lens_<mode>.csv
    and fig_energy_efficiency.lens_<mode>.csv carry (waist, metric) pairs for
    plotting. Refuses to write anything for an empty result.
    """
    if not result.rows:
        raise DomainError("sweep produced no rows; nothing to write")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    lines = [f"# {result.metadata}", ",".join(_CSV_COLUMNS)]
    for row in result.rows:
        lines.append(
            ",".join(
                (
                    _fmt(row.waist),
                    row.lens_mode,
                    str(row.seed_count),
                    _fmt(row.sum_rate),
                    _fmt(row.sum_rate_std),
                    _fmt(row.ee),
                    _fmt(row.ee_std),
                    _fmt(row.min_user_snr_db),
                    _fmt(row.p_max),
                )
            )
        )
    results_path = out_dir / "results.csv"
    results_path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    written.append(results_path)

    modes = sorted({row.lens_mode for row in result.rows})
    for metric, column in (("sum_rate", "sum_rate_bps"), ("energy_efficiency", "ee_bpj")):
        for mode in modes:
            series = [f"# schema={SCHEMA_VERSION} series={metric} lens={mode}",
                      f"waist_m,{column}"]
            for row in result.rows:
                if row.lens_mode != mode:
                    continue
                value = row.sum_rate if metric == "sum_rate" else row.ee
                series.append(f"{_fmt(row.waist)},{_fmt(value)}")
            path = out_dir / f"fig_{metric}.lens_{mode}.csv"
            path.write_text("\n".join(series) + "\n", encoding="utf-8", newline="\n")
            written.append(path)
    return written


def dump_channel_csv(h: ChannelMatrix, path: Path) -> None:
    """Channel gains as CSV: one row per user, one column per AP."""
    n_users, n_aps = h.gains.shape
    lines = [f"# schema={SCHEMA_VERSION} matrix=channel users={n_users} aps={n_aps}",
             "user," + ",".join(f"ap_{a}" for a in range(n_aps))]
    for u in range(n_users):
        lines.append(f"{u}," + ",".join(_fmt(v) for v in h.gains[u]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def dump_precoder_csv(precoder: Precoder, path: Path) -> None:
    """Precoder weights as CSV: one row per AP, one column per user stream."""
    n_aps, n_users = precoder.g.shape
    lines = [
        f"# schema={SCHEMA_VERSION} matrix=precoder aps={n_aps} users={n_users} "
        f"beta={_fmt(precoder.beta)}",
        "ap," + ",".join(f"user_{u}" for u in range(n_users)),
    ]
    for a in range(n_aps):
        lines.append(f"{a}," + ",".join(_fmt(v) for v in precoder.g[a]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

"""Relay-position sweeps: rates along a horizontal relay trajectory, CSV
output and curve-shape analysis.

The geometry is fixed per sweep (source at the origin, destination d_sd along
the axis, relay at perpendicular offset d_r); the relay's horizontal position
walks from axis_start to axis_end in axis_step increments with the final step
truncated to axis_end.  Positions co-located with the source or destination
are skipped and reported, never silently dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

from .capacity_bounds import (
    BindingTerm,
    af_beta_max,
    af_capacity,
    cutset_bound,
    direct_capacity,
    mrc_capacity,
)
from .errors import ParameterDomainError
from .link_model import LinkGains, NodeGeometry, PathLossParams, PowerBudget, gains_from_geometry

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "SweepReport",
    "CSV_HEADER",
    "evaluate_position",
    "run_sweep",
    "preset_scenarios",
    "analyze_sweep",
    "emit_csv",
]

CSV_HEADER = ("d_sr_m,gamma_sr,gamma_rd,gamma_sd,"
              "rate_direct,rate_mrc,rate_af,rate_cutset,rho_star,binding")

# Positions closer than this to a node count as co-located (relative to d_sd).
_COLOCATION_RTOL = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: geometry template, relay trajectory, budget and AF policy.

    beta=None lets every position use its largest admissible amplification;
    a number fixes the factor (capped at each position's power limit).
    """

    d_sd: float
    d_r: float
    axis_start: float
    axis_end: float
    axis_step: float
    budget: PowerBudget
    path: PathLossParams = PathLossParams()
    beta: float | None = None

    def __post_init__(self) -> None:
        if not (self.axis_step > 0.0):
            raise ParameterDomainError(f"axis_step must be > 0, got {self.axis_step!r}")
        if not (self.axis_start <= self.axis_end):
            raise ParameterDomainError(
                f"axis_start must be <= axis_end, got {self.axis_start!r} .. {self.axis_end!r}")
        if self.beta is not None and self.beta < 0.0:
            raise ParameterDomainError(f"beta must be >= 0 or None, got {self.beta!r}")
        # Validates d_sd / d_r domains.
        NodeGeometry(self.d_sd, self.axis_start, self.d_r)

    def positions(self) -> list[float]:
        span = self.axis_end - self.axis_start
        n_full = int(math.floor(span / self.axis_step + 1e-9))
        points = [self.axis_start + i * self.axis_step for i in range(n_full + 1)]
        tol = 1e-9 * max(1.0, abs(self.axis_end))
        if points[-1] > self.axis_end + tol:
            points[-1] = self.axis_end
        elif points[-1] < self.axis_end - tol:
            points.append(self.axis_end)
        elif points[-1] != self.axis_end:
            points[-1] = self.axis_end
        return points


@dataclass(frozen=True)
class SweepRow:
    d_sr_axis: float
    gains: LinkGains
    rate_direct: float
    rate_mrc: float
    rate_af: float
    rate_cutset: float
    rho_star: float
    binding: BindingTerm


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    skipped: tuple[float, ...]


@dataclass(frozen=True)
class SweepReport:
    """Shape summary of one sweep (argmax, orderings, binding-tag runs)."""

    af_argmax_position: float
    ordering_violations: tuple[tuple[float, str], ...]
    binding_runs: tuple[tuple[str, float, float], ...]
    collapsed_switches: tuple[tuple[float, str, str], ...]
    max_cutset_gain: float


def evaluate_position(d_sr_axis: float, d_sd: float, d_r: float,
                      budget: PowerBudget,
                      path: PathLossParams = PathLossParams(),
                      beta: float | None = None) -> SweepRow:
    """All rates for a single relay position."""
    geom = NodeGeometry(d_sd=d_sd, d_sr_axis=d_sr_axis, d_r=d_r)
    gains = gains_from_geometry(geom, path)
    limit = af_beta_max(gains, budget)
    beta_used = limit if beta is None else min(beta, limit)
    cut = cutset_bound(gains, budget)
    return SweepRow(
        d_sr_axis=d_sr_axis,
        gains=gains,
        rate_direct=direct_capacity(gains, budget),
        rate_mrc=mrc_capacity(gains, budget),
        rate_af=af_capacity(gains, budget, beta_used),
        rate_cutset=cut.rate,
        rho_star=cut.rho_star,
        binding=cut.binding,
    )


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every trajectory position; co-located ones land in `skipped`."""
    rows: list[SweepRow] = []
    skipped: list[float] = []
    tol = _COLOCATION_RTOL * spec.d_sd
    for pos in spec.positions():
        d_src = math.hypot(pos, spec.d_r)
        d_dst = math.hypot(spec.d_sd - pos, spec.d_r)
        if d_src <= tol or d_dst <= tol:
            skipped.append(pos)
            continue
        rows.append(evaluate_position(pos, spec.d_sd, spec.d_r,
                                      spec.budget, spec.path, spec.beta))
    return SweepResult(rows=tuple(rows), skipped=tuple(skipped))


def preset_scenarios() -> dict[str, SweepSpec]:
    """The two bundled case studies.

    Both use 100 mW per node and 1 uW receiver noise.  "high-snr" walks the
    relay across a 1 m link at 0.1 m offset; "low-snr" across a 500 m link at
    10 m offset.
    """
    budget = PowerBudget(p_s_max=0.1, p_r_max=0.1, noise=1e-6)
    return {
        "high-snr": SweepSpec(d_sd=1.0, d_r=0.1, axis_start=-0.5, axis_end=1.5,
                              axis_step=0.01, budget=budget),
        "low-snr": SweepSpec(d_sd=500.0, d_r=10.0, axis_start=-100.0, axis_end=600.0,
                             axis_step=1.0, budget=budget),
    }


def analyze_sweep(rows: list[SweepRow] | tuple[SweepRow, ...]) -> SweepReport:
    """Shape report: AF argmax, ordering violations, binding-tag structure.

    Ordering checks direct <= MRC <= cutset and AF <= cutset with a 1e-12
    bits allowance.  Binding transitions are reported twice: as raw runs of
    identical tags, and as MAC/BC switches with EQUAL rows collapsed (an
    EQUAL row marks the balance point between the two regimes).
    """
    if len(rows) < 3:
        raise ParameterDomainError(f"need at least 3 rows, got {len(rows)}")

    tol = 1e-12
    violations: list[tuple[float, str]] = []
    for row in rows:
        if row.rate_direct > row.rate_mrc + tol:
            violations.append((row.d_sr_axis, "direct > mrc"))
        if row.rate_mrc > row.rate_cutset + tol:
            violations.append((row.d_sr_axis, "mrc > cutset"))
        if row.rate_af > row.rate_cutset + tol:
            violations.append((row.d_sr_axis, "af > cutset"))

    af_argmax = max(rows, key=lambda r: r.rate_af).d_sr_axis

    runs: list[tuple[str, float, float]] = []
    for row in rows:
        tag = row.binding.value
        if runs and runs[-1][0] == tag:
            runs[-1] = (tag, runs[-1][1], row.d_sr_axis)
        else:
            runs.append((tag, row.d_sr_axis, row.d_sr_axis))

    switches: list[tuple[float, str, str]] = []
    previous: tuple[str, float] | None = None
    for row in rows:
        tag = row.binding.value
        if tag == BindingTerm.EQUAL.value:
            continue
        if previous is not None and previous[0] != tag:
            switches.append((row.d_sr_axis, previous[0], tag))
        previous = (tag, row.d_sr_axis)

    max_gain = max(row.rate_cutset - row.rate_direct for row in rows)

    return SweepReport(
        af_argmax_position=af_argmax,
        ordering_violations=tuple(violations),
        binding_runs=tuple(runs),
        collapsed_switches=tuple(switches),
        max_cutset_gain=max_gain,
    )


def format_csv_row(row: SweepRow) -> str:
    """One CSV line: scientific notation, 10 significant digits."""
    fields = [
        row.d_sr_axis,
        row.gains.gamma_sr,
        row.gains.gamma_rd,
        row.gains.gamma_sd,
        row.rate_direct,
        row.rate_mrc,
        row.rate_af,
        row.rate_cutset,
        row.rho_star,
    ]
    return ",".join(f"{value:.9e}" for value in fields) + "," + row.binding.value


def emit_csv(rows: list[SweepRow] | tuple[SweepRow, ...],
             destination: Union[str, Path, IO[str]]) -> int:
    """Write header plus one line per row; returns the byte count written.

    Output is byte-deterministic for identical rows ("\\n" newlines, fixed
    formatting).  Write failures surface as OSError naming the destination.
    """
    lines = [CSV_HEADER]
    lines.extend(format_csv_row(row) for row in rows)
    payload = "\n".join(lines) + "\n"
    data = payload.encode("ascii")

    if hasattr(destination, "write"):
        destination.write(payload)
        return len(data)
    path = Path(destination)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"could not write sweep CSV to {path}: {exc}") from exc
    return len(data)

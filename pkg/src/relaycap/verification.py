"""Seeded cross-check suites: every closed form is replayed against an
independent numeric route.

- mutual information from the assembled 4x4 covariance vs the two cutset
  term formulas,
- the closed-form optimizing correlation vs a derivative-free search,
- the two-hop allocation rule vs an exhaustive power lattice,
- the literal AF/MRC comparison predicate vs the actual rate comparison
  (reported, not asserted),
- AF rate sensitivity to halving the amplification in the low-SNR preset.

All randomness flows from one seed, so failures are reproducible and output
is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity_bounds import (
    af_beta_max,
    af_capacity,
    af_mrc_predicates,
    cutset_bound,
    cutset_terms,
    rho_numeric_search,
)
from .gaussian_stats import (
    XR,
    XS,
    YD,
    YR,
    JointGaussianSystem,
    assemble_covariance,
    gaussian_mutual_information,
)
from .link_model import LinkGains, PowerBudget, gains_from_geometry, NodeGeometry
from .power_alloc import two_hop_allocate, two_hop_brute_force
from .sweep import preset_scenarios

__all__ = [
    "CheckResult",
    "sample_system",
    "sample_gains",
    "sample_budget",
    "check_mi_closed_forms",
    "check_cutset_optimization",
    "check_two_hop_allocation",
    "check_predicate_agreement",
    "check_af_beta_insensitivity",
    "run_all",
    "format_check",
]

MI_TOL_BITS = 1e-9
RATE_TOL_BITS = 1e-9
CROSSING_TOL_BITS = 1e-9
BALANCE_RTOL = 1e-9
BETA_DELTA_LIMIT = 0.10
BRUTE_GRID = 501


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one suite; passed=None marks a report-only diagnostic."""

    name: str
    passed: bool | None
    detail: str


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def sample_gains(rng: np.random.Generator) -> LinkGains:
    """Link gains log-uniform over [1e-6, 1]."""
    return LinkGains(
        gamma_sr=_log_uniform(rng, 1e-6, 1.0),
        gamma_rd=_log_uniform(rng, 1e-6, 1.0),
        gamma_sd=_log_uniform(rng, 1e-6, 1.0),
    )


def sample_budget(rng: np.random.Generator) -> PowerBudget:
    """Powers log-uniform over (0, 1], noise over [1e-9, 1e-3]."""
    return PowerBudget(
        p_s_max=_log_uniform(rng, 1e-6, 1.0),
        p_r_max=_log_uniform(rng, 1e-6, 1.0),
        noise=_log_uniform(rng, 1e-9, 1e-3),
    )


def sample_system(rng: np.random.Generator) -> JointGaussianSystem:
    """A full random channel instance including the input correlation."""
    gains = sample_gains(rng)
    budget = sample_budget(rng)
    return JointGaussianSystem(
        gamma_sr=gains.gamma_sr,
        gamma_rd=gains.gamma_rd,
        gamma_sd=gains.gamma_sd,
        p_s=budget.p_s_max,
        p_r=budget.p_r_max,
        rho=float(rng.uniform(-0.99, 0.99)),
        noise=budget.noise,
    )


def check_mi_closed_forms(samples: int = 1000, seed: int = 0) -> CheckResult:
    """Determinant-ratio mutual information vs the two cutset term formulas."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_sys: JointGaussianSystem | None = None
    for _ in range(samples):
        sys = sample_system(rng)
        cov = assemble_covariance(sys)
        mi_bc = gaussian_mutual_information(cov, [XS], [YD, YR], [XR])
        mi_mac = gaussian_mutual_information(cov, [XS, XR], [YD])
        gains = LinkGains(sys.gamma_sr, sys.gamma_rd, sys.gamma_sd)
        bc, mac = cutset_terms(gains, sys.p_s, sys.p_r, sys.rho, sys.noise)
        err = max(abs(mi_bc - bc), abs(mi_mac - mac))
        if err > worst:
            worst, worst_sys = err, sys
    passed = worst <= MI_TOL_BITS
    detail = f"n={samples} max|err|={worst:.3e} bits (tol {MI_TOL_BITS:.0e})"
    if not passed and worst_sys is not None:
        detail += f" offending system: {worst_sys}"
    return CheckResult("mi-vs-closed-form", passed, detail)


def check_cutset_optimization(samples: int = 1000,
                              seed: int = 0) -> list[CheckResult]:
    """Closed-form cutset rate vs search, plus term equality at the crossing."""
    rng = np.random.default_rng(seed)
    worst_rate = 0.0
    worst_cross = 0.0
    interior = 0
    worst_case: tuple[LinkGains, PowerBudget] | None = None
    worst_cross_case: tuple[LinkGains, PowerBudget] | None = None
    for _ in range(samples):
        gains = sample_gains(rng)
        budget = sample_budget(rng)
        closed = cutset_bound(gains, budget)
        _, searched_rate = rho_numeric_search(gains, budget, tolerance=1e-7)
        err = abs(closed.rate - searched_rate)
        if err > worst_rate:
            worst_rate, worst_case = err, (gains, budget)
        if 0.0 < closed.rho_star < 1.0:
            interior += 1
            cross = abs(closed.bc_rate - closed.mac_rate)
            if cross > worst_cross:
                worst_cross, worst_cross_case = cross, (gains, budget)
    rate_ok = worst_rate <= RATE_TOL_BITS
    rate_detail = f"n={samples} max|rate diff|={worst_rate:.3e} bits (tol {RATE_TOL_BITS:.0e})"
    if not rate_ok and worst_case is not None:
        rate_detail += f" offending case: {worst_case}"
    cross_ok = worst_cross <= CROSSING_TOL_BITS
    cross_detail = (f"interior={interior}/{samples} max|bc-mac|={worst_cross:.3e} bits "
                    f"(tol {CROSSING_TOL_BITS:.0e})")
    if not cross_ok and worst_cross_case is not None:
        cross_detail += f" offending case: {worst_cross_case}"
    return [
        CheckResult("cutset-rate-vs-search", rate_ok, rate_detail),
        CheckResult("crossing-equality", cross_ok, cross_detail),
    ]


def check_two_hop_allocation(samples: int = 500, seed: int = 0,
                             grid: int = BRUTE_GRID) -> CheckResult:
    """Analytic max-flow allocation vs the exhaustive lattice oracle."""
    rng = np.random.default_rng(seed)
    worst_margin = float("inf")   # analytic flow minus (brute flow - slack)
    worst_residual = 0.0
    worst_case: tuple[LinkGains, PowerBudget] | None = None
    for _ in range(samples):
        gains = sample_gains(rng)
        budget = sample_budget(rng)
        analytic = two_hop_allocate(gains, budget)
        brute = two_hop_brute_force(gains, budget, grid=grid)
        step = max(budget.p_s_max, budget.p_r_max) / (grid - 1)
        slack = step * max(gains.gamma_sr, gains.gamma_rd)
        margin = analytic.flow - (brute.flow - slack)
        if margin < worst_margin:
            worst_margin, worst_case = margin, (gains, budget)
        residual = abs(gains.gamma_sr * analytic.p_s - gains.gamma_rd * analytic.p_r)
        if analytic.flow > 0.0:
            worst_residual = max(worst_residual, residual / analytic.flow)
        elif residual > 0.0:
            worst_residual = float("inf")
    passed = worst_margin >= 0.0 and worst_residual <= BALANCE_RTOL
    detail = (f"n={samples} grid={grid} worst optimality margin={worst_margin:.3e} "
              f"max balance residual={worst_residual:.3e} (tol {BALANCE_RTOL:.0e})")
    if not passed and worst_case is not None:
        detail += f" offending case: {worst_case}"
    return CheckResult("two-hop-vs-brute-force", passed, detail)


def check_predicate_agreement(samples: int = 1000, seed: int = 0) -> CheckResult:
    """How often the literal MRC-vs-AF inequality matches the rate comparison.

    Diagnostic only: the inequality's equivalence to the rate comparison is
    not established, so the agreement rate is reported without a threshold.
    """
    rng = np.random.default_rng(seed)
    agree = 0
    for _ in range(samples):
        gains = sample_gains(rng)
        budget = sample_budget(rng)
        beta = float(rng.uniform(0.0, 1.0)) * af_beta_max(gains, budget)
        flags = af_mrc_predicates(gains, budget, beta)
        if flags.paper_mrc_better == flags.actual_mrc_better:
            agree += 1
    detail = f"n={samples} agreement={100.0 * agree / samples:.1f}%"
    return CheckResult("af-mrc-predicate-agreement", None, detail)


def check_af_beta_insensitivity() -> CheckResult:
    """AF rate at half the maximum amplification, low-SNR sweep midpoint.

    The relative rate change must stay below 10%; the measured delta is
    always reported.
    """
    spec = preset_scenarios()["low-snr"]
    midpoint = 0.5 * (spec.axis_start + spec.axis_end)
    geom = NodeGeometry(d_sd=spec.d_sd, d_sr_axis=midpoint, d_r=spec.d_r)
    gains = gains_from_geometry(geom, spec.path)
    beta_full = af_beta_max(gains, spec.budget)
    rate_full = af_capacity(gains, spec.budget, beta_full)
    rate_half = af_capacity(gains, spec.budget, beta_full / 2.0)
    delta = abs(rate_full - rate_half) / rate_full if rate_full > 0.0 else 0.0
    passed = delta < BETA_DELTA_LIMIT
    detail = (f"midpoint d_sr={midpoint:.1f} m rate(beta_max)={rate_full:.6e} "
              f"rate(beta_max/2)={rate_half:.6e} delta={100.0 * delta:.2f}% "
              f"(limit {100.0 * BETA_DELTA_LIMIT:.0f}%)")
    return CheckResult("af-beta-insensitivity", passed, detail)


def run_all(samples: int = 1000, seed: int = 0) -> list[CheckResult]:
    """Every suite; allocation uses half the sample count (it is the slow one)."""
    results = [check_mi_closed_forms(samples, seed)]
    results.extend(check_cutset_optimization(samples, seed))
    results.append(check_two_hop_allocation(max(1, samples // 2), seed))
    results.append(check_predicate_agreement(samples, seed))
    results.append(check_af_beta_insensitivity())
    return results


def format_check(result: CheckResult) -> str:
    if result.passed is None:
        status = "INFO"
    else:
        status = "PASS" if result.passed else "FAIL"
    return f"{result.name}: {result.detail} {status}"

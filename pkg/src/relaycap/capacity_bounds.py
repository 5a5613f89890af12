"""Closed-form rate bounds for the one-relay channel with a direct link.

The cutset bound is the supremum over the input correlation rho in [0, 1] of
the minimum of two terms evaluated at maximum powers:

    bc(rho)  = C( (gamma_sd + gamma_sr) * p_s * (1 - rho^2) / noise )
    mac(rho) = C( (gamma_sd p_s + gamma_rd p_r
                   + 2 rho sqrt(gamma_sd p_s gamma_rd p_r)) / noise )

bc is nonincreasing and mac nondecreasing in rho, so the optimum sits either
at rho = 0 or at the crossing of the two terms, which has a closed form from
the crossing quadratic.  Negative rho only lowers both terms, hence the
search never leaves [0, 1].

Also provided: amplify-and-forward capacity under the relay power limit,
maximal-ratio-combining capacity, the direct-link baseline and the reported
(but never trusted) AF/MRC comparison predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateSourceError,
    ParameterDomainError,
    PowerLimitError,
)
from .link_model import LinkGains, PowerBudget, capacity_of_snr, snr

__all__ = [
    "BindingTerm",
    "CutsetResult",
    "AfResult",
    "AfMrcComparison",
    "cutset_terms",
    "rho_star",
    "cutset_bound",
    "rho_numeric_search",
    "af_beta_max",
    "af_capacity",
    "evaluate_af",
    "mrc_capacity",
    "af_mrc_predicates",
    "direct_capacity",
]

_LD = np.longdouble
_LN2_LD = np.log(_LD(2.0))
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
# Two rates within this many bits are reported as equal.
_BINDING_TOL = 1e-9


class BindingTerm(str, Enum):
    """Which cutset term limits the bound at the optimizing correlation."""

    BC = "BC"
    MAC = "MAC"
    EQUAL = "EQUAL"


@dataclass(frozen=True)
class CutsetResult:
    rate: float
    rho_star: float
    bc_rate: float
    mac_rate: float
    binding: BindingTerm

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho_star <= 1.0):
            raise ParameterDomainError(f"rho_star must lie in [0, 1], got {self.rho_star!r}")
        if abs(self.rate - min(self.bc_rate, self.mac_rate)) > 1e-12 * max(1.0, abs(self.rate)):
            raise ParameterDomainError("rate must equal min(bc_rate, mac_rate)")


@dataclass(frozen=True)
class AfResult:
    """An amplify-and-forward operating point: scale factor and rate."""

    beta: float
    rate: float

    def __post_init__(self) -> None:
        if self.beta < 0.0:
            raise ParameterDomainError(f"beta must be >= 0, got {self.beta!r}")


class AfMrcComparison(NamedTuple):
    """Literal comparison predicates, reported for diagnostics only."""

    paper_mrc_better: bool
    liu_af_wins: bool
    actual_mrc_better: bool


def _capacity_ld(s: np.longdouble) -> np.longdouble:
    return 0.5 * np.log1p(s) / _LN2_LD


def cutset_terms(gains: LinkGains, p_s: float, p_r: float, rho: float,
                 noise: float) -> tuple[float, float]:
    """Broadcast and multiple-access rates at a given correlation.

    Computed in extended precision so that the crossing of the two terms is
    resolved well below 1e-9 bits even at receiver SNRs around 1e9.
    """
    if not (-1.0 <= rho <= 1.0):
        raise ParameterDomainError(f"rho must lie in [-1, 1], got {rho!r}")
    if not (noise > 0.0):
        raise ParameterDomainError(f"noise must be > 0, got {noise!r}")
    if p_s < 0.0 or p_r < 0.0:
        raise ParameterDomainError("powers must be >= 0")

    g_sd = _LD(gains.gamma_sd)
    g_sr = _LD(gains.gamma_sr)
    g_rd = _LD(gains.gamma_rd)
    ps = _LD(p_s)
    pr = _LD(p_r)
    r = _LD(rho)
    n = _LD(noise)

    bc_snr = (g_sd + g_sr) * ps * (1.0 - r * r) / n
    mac_snr = (g_sd * ps + g_rd * pr + 2.0 * r * np.sqrt(g_sd * ps * g_rd * pr)) / n
    bc_snr = max(bc_snr, _LD(0.0))
    mac_snr = max(mac_snr, _LD(0.0))
    return float(_capacity_ld(bc_snr)), float(_capacity_ld(mac_snr))


def rho_star(gains: LinkGains, p_s: float, p_r: float) -> float:
    """Correlation maximizing min(bc, mac), from the crossing quadratic.

    For delta = (gamma_sd + gamma_sr) p_s - gamma_rd p_r <= 0 the broadcast
    term is the binding minimum throughout [0, 1] and is largest at rho = 0.
    For delta > 0 the crossing root is returned, clamped into [0, 1].
    """
    if not (p_s > 0.0):
        raise DegenerateSourceError(f"p_s must be > 0, got {p_s!r}")
    if p_r < 0.0:
        raise ParameterDomainError(f"p_r must be >= 0, got {p_r!r}")

    g_sd = _LD(gains.gamma_sd)
    g_sr = _LD(gains.gamma_sr)
    g_rd = _LD(gains.gamma_rd)
    ps = _LD(p_s)
    pr = _LD(p_r)

    delta = (g_sd + g_sr) * ps - g_rd * pr
    if not (float(delta) > 0.0):
        return 0.0
    raw = (-np.sqrt(g_sd * ps * g_rd * pr) + np.sqrt(g_sr * ps * delta)) / ((g_sd + g_sr) * ps)
    return float(min(max(raw, _LD(0.0)), _LD(1.0)))


def _binding_tag(bc: float, mac: float, snr_sr: float, snr_rd: float) -> BindingTerm:
    # At the crossing the two rates coincide by construction; the tag then
    # reports which term the optimizer rode: raising rho trades bc for mac,
    # which pays off exactly when the relay hears better than it delivers.
    if bc < mac - _BINDING_TOL:
        return BindingTerm.BC
    if mac < bc - _BINDING_TOL:
        return BindingTerm.MAC
    if snr_sr > snr_rd:
        return BindingTerm.MAC
    if snr_rd > snr_sr:
        return BindingTerm.BC
    return BindingTerm.EQUAL


def cutset_bound(gains: LinkGains, budget: PowerBudget) -> CutsetResult:
    """Cutset upper bound at maximum powers, optimized over rho in [0, 1]."""
    if budget.p_s_max > 0.0:
        rho = rho_star(gains, budget.p_s_max, budget.p_r_max)
        if not (0.0 <= rho <= 1.0) or math.isnan(rho):
            # Closed form assumes an interior crossing; the search is always valid.
            rho, _ = rho_numeric_search(gains, budget)
    else:
        rho = 0.0
    bc, mac = cutset_terms(gains, budget.p_s_max, budget.p_r_max, rho, budget.noise)
    tag = _binding_tag(
        bc, mac,
        snr(gains.gamma_sr, budget.p_s_max, budget.noise),
        snr(gains.gamma_rd, budget.p_r_max, budget.noise),
    )
    return CutsetResult(rate=min(bc, mac), rho_star=rho, bc_rate=bc, mac_rate=mac, binding=tag)


def rho_numeric_search(gains: LinkGains, budget: PowerBudget,
                       tolerance: float = 1e-7) -> tuple[float, float]:
    """Derivative-free maximization of min(bc, mac) over rho in [0, 1].

    Golden-section search narrows the bracket to the requested width; because
    the maximum sits on a kink where the terms cross, the bracket is then
    refined by bisecting the sign change of bc - mac, which pins the rate far
    tighter than the rho tolerance alone would.
    """
    if not (tolerance > 0.0):
        raise ParameterDomainError(f"tolerance must be > 0, got {tolerance!r}")

    p_s, p_r, noise = budget.p_s_max, budget.p_r_max, budget.noise

    def terms(r: float) -> tuple[float, float]:
        return cutset_terms(gains, p_s, p_r, r, noise)

    def g(r: float) -> float:
        bc, mac = terms(r)
        return min(bc, mac)

    a, b = 0.0, 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    while (b - a) > tolerance:
        if gc > gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)

    def h(r: float) -> float:
        bc, mac = terms(r)
        return bc - mac

    ha, hb = h(a), h(b)
    if ha >= 0.0 >= hb and (ha > 0.0 or hb < 0.0):
        lo, hi = a, b
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if not (lo < mid < hi):
                break
            if h(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        candidates = [lo, hi, 0.0, 1.0]
    else:
        candidates = [a, 0.5 * (a + b), b, 0.0, 1.0]

    best_rho, best_rate = candidates[0], g(candidates[0])
    for r in candidates[1:]:
        value = g(r)
        if value > best_rate:
            best_rho, best_rate = r, value
    return best_rho, best_rate


def af_beta_max(gains: LinkGains, budget: PowerBudget) -> float:
    """Largest amplification keeping the relay at or under its power limit."""
    return math.sqrt(budget.p_r_max / (budget.noise + gains.gamma_sr * budget.p_s_max))


def af_capacity(gains: LinkGains, budget: PowerBudget, beta: float) -> float:
    """Amplify-and-forward rate at a given amplification factor.

    The destination sees the direct path plus the relayed copy scaled by
    beta, with the relay's amplified noise raising the floor:

        snr = (gamma_sd + beta^2 gamma_sr gamma_rd) * p_s_max
              / ((1 + beta^2 gamma_rd) * noise)

    The relayed copy lags the direct one by a block, so the two paths add in
    power, not amplitude; amplitude-coherent combining would overstate the
    rate past the cutset bound for a relay behind the source.  At beta = 0
    the relay is silent and the rate reduces to the direct link.  beta beyond
    the power limit (with 1e-12 relative slack) is rejected.
    """
    if beta < 0.0 or math.isnan(beta):
        raise ParameterDomainError(f"beta must be >= 0, got {beta!r}")
    limit = af_beta_max(gains, budget)
    if beta > limit * (1.0 + 1e-12):
        raise PowerLimitError(
            f"beta {beta!r} exceeds the relay power limit {limit!r}")
    signal = (gains.gamma_sd + beta * beta * gains.gamma_sr * gains.gamma_rd) * budget.p_s_max
    s = signal / ((1.0 + beta * beta * gains.gamma_rd) * budget.noise)
    return capacity_of_snr(s)


def evaluate_af(gains: LinkGains, budget: PowerBudget,
                beta: float | None = None) -> AfResult:
    """AF operating point; beta=None selects the largest admissible factor."""
    if beta is None:
        beta = af_beta_max(gains, budget)
    return AfResult(beta=beta, rate=af_capacity(gains, budget, beta))


def mrc_capacity(gains: LinkGains, budget: PowerBudget) -> float:
    """Maximal-ratio-combining rate at maximum powers.

    The effective SNR adds the direct SNR and the harmonic combination of the
    two hop SNRs (zero when both hops are dead).
    """
    s_sd = snr(gains.gamma_sd, budget.p_s_max, budget.noise)
    s_sr = snr(gains.gamma_sr, budget.p_s_max, budget.noise)
    s_rd = snr(gains.gamma_rd, budget.p_r_max, budget.noise)
    harmonic = s_sr * s_rd / (s_sr + s_rd) if (s_sr + s_rd) > 0.0 else 0.0
    return capacity_of_snr(s_sd + harmonic)


def af_mrc_predicates(gains: LinkGains, budget: PowerBudget,
                      beta: float) -> AfMrcComparison:
    """Literal MRC-vs-AF comparison predicates plus the direct rate comparison.

    The first flag evaluates the harmonic-mean inequality exactly as stated
    (note it combines the two source SNRs, not the relay hops); the second the
    amplitude-vs-SNR threshold; the third compares the two rates directly.
    None of these is used to pick a strategy.
    """
    s_sd = snr(gains.gamma_sd, budget.p_s_max, budget.noise)
    s_sr = snr(gains.gamma_sr, budget.p_s_max, budget.noise)
    lhs = s_sr * s_sd / (s_sr + s_sd) if (s_sr + s_sd) > 0.0 else 0.0
    paper_mrc_better = lhs < beta * beta * gains.gamma_rd
    liu_af_wins = beta <= s_sr
    actual_mrc_better = mrc_capacity(gains, budget) > af_capacity(gains, budget, beta)
    return AfMrcComparison(paper_mrc_better, liu_af_wins, actual_mrc_better)


def direct_capacity(gains: LinkGains, budget: PowerBudget) -> float:
    """Source-to-destination rate with the relay ignored."""
    return capacity_of_snr(snr(gains.gamma_sd, budget.p_s_max, budget.noise))

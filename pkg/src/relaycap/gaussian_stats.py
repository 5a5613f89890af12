"""Joint Gaussian statistics of the four relay-channel variables.

The channel couples two inputs and two observations:

    Yr = sqrt(gamma_sr) * Xs + Zr
    Yd = sqrt(gamma_sd) * Xs + sqrt(gamma_rd) * Xr + Zd

with E[Xs^2] = p_s, E[Xr^2] = p_r, E[Xs Xr] = rho * sqrt(p_s p_r) and
independent N(0, noise) receiver noises.  This module assembles the 4x4
covariance of (Xs, Xr, Yr, Yd), conditions it on arbitrary label subsets and
evaluates Gaussian mutual information as a determinant ratio,

    I(A; B | C) = 0.5 * log2( det Cov[A|C] / det Cov[A|B,C] ).

All linear algebra runs in extended precision (80-bit on x86) with a pivoted
symmetric elimination: conditioning the observations on the inputs cancels the
signal part down to the noise floor, and at SNRs around 1e9 double precision
would leave ~1e-7 bits of error where the tests budget 1e-9.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateConditioningError, ParameterDomainError, UsageError

__all__ = [
    "XS",
    "XR",
    "YR",
    "YD",
    "JointGaussianSystem",
    "LabeledCovariance",
    "assemble_covariance",
    "conditional_covariance",
    "gaussian_mutual_information",
]

XS = "Xs"
XR = "Xr"
YR = "Yr"
YD = "Yd"

# Pivots below max_pivot / _COND_LIMIT are treated as exact degeneracies.
_COND_LIMIT = 1e12
# Relative tolerance for cross-covariance mass sitting in a degenerate direction.
_CONSISTENCY_RTOL = 1e-8

_LD = np.longdouble
_LN2_LD = np.log(_LD(2.0))


@dataclass(frozen=True)
class JointGaussianSystem:
    """Gains, powers, input correlation and noise of one channel instance."""

    gamma_sr: float
    gamma_rd: float
    gamma_sd: float
    p_s: float
    p_r: float
    rho: float
    noise: float

    def __post_init__(self) -> None:
        for name in ("gamma_sr", "gamma_rd", "gamma_sd", "p_s", "p_r"):
            value = getattr(self, name)
            if value < 0.0 or not math.isfinite(value):
                raise ParameterDomainError(f"{name} must be >= 0, got {value!r}")
        if not (self.noise > 0.0) or not math.isfinite(self.noise):
            raise ParameterDomainError(f"noise must be > 0, got {self.noise!r}")
        if not (-1.0 <= self.rho <= 1.0):
            raise ParameterDomainError(f"rho must lie in [-1, 1], got {self.rho!r}")

    @classmethod
    def from_links(cls, gains, p_s: float, p_r: float, rho: float,
                   noise: float) -> "JointGaussianSystem":
        """Build a system from a LinkGains-like object plus powers."""
        return cls(gamma_sr=gains.gamma_sr, gamma_rd=gains.gamma_rd,
                   gamma_sd=gains.gamma_sd, p_s=p_s, p_r=p_r, rho=rho, noise=noise)


@dataclass(frozen=True)
class LabeledCovariance:
    """A symmetric positive-semidefinite covariance with named variables.

    The matrix is stored in extended precision and frozen after validation.
    """

    labels: tuple[str, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        mat = np.array(self.matrix, dtype=_LD, copy=True)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise UsageError(f"covariance matrix must be square, got shape {mat.shape}")
        if len(labels) != mat.shape[0]:
            raise UsageError(
                f"{len(labels)} labels for a {mat.shape[0]}x{mat.shape[1]} matrix")
        if len(set(labels)) != len(labels):
            raise UsageError(f"duplicate labels: {labels}")
        scale = float(np.max(np.abs(mat))) if mat.size else 0.0
        asym = float(np.max(np.abs(mat - mat.T))) if mat.size else 0.0
        if asym > 1e-12 * max(scale, 1e-300):
            raise ParameterDomainError(
                f"matrix is not symmetric (max asymmetry {asym:.3e} vs scale {scale:.3e})")
        if mat.size:
            eigs = np.linalg.eigvalsh(mat.astype(np.float64))
            trace = float(np.trace(mat.astype(np.float64)))
            if eigs[0] < -1e-9 * max(trace, 0.0):
                raise ParameterDomainError(
                    f"matrix is not positive semidefinite (min eigenvalue {eigs[0]:.3e})")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UsageError(f"unknown label {label!r}; have {self.labels}") from None

    def variance(self, label: str) -> float:
        i = self.index_of(label)
        return float(self.matrix[i, i])

    def covariance(self, a: str, b: str) -> float:
        return float(self.matrix[self.index_of(a), self.index_of(b)])


def assemble_covariance(sys: JointGaussianSystem) -> LabeledCovariance:
    """Covariance of (Xs, Xr, Yr, Yd) implied by the signal equations.

    Both triangles are filled from the same expressions, so the result is
    symmetric bit for bit.
    """
    g_sr = _LD(sys.gamma_sr)
    g_rd = _LD(sys.gamma_rd)
    g_sd = _LD(sys.gamma_sd)
    p_s = _LD(sys.p_s)
    p_r = _LD(sys.p_r)
    rho = _LD(sys.rho)
    n = _LD(sys.noise)

    cross = rho * np.sqrt(p_s * p_r)      # E[Xs Xr]
    h_sr = np.sqrt(g_sr)
    h_rd = np.sqrt(g_rd)
    h_sd = np.sqrt(g_sd)

    cov_xs_yd = h_sd * p_s + h_rd * cross
    cov_xr_yd = h_sd * cross + h_rd * p_r

    mat = np.zeros((4, 4), dtype=_LD)
    mat[0, 0] = p_s
    mat[1, 1] = p_r
    mat[2, 2] = g_sr * p_s + n
    mat[3, 3] = g_sd * p_s + g_rd * p_r + 2.0 * rho * np.sqrt(g_sd * p_s * g_rd * p_r) + n
    mat[0, 1] = mat[1, 0] = cross
    mat[0, 2] = mat[2, 0] = h_sr * p_s
    mat[1, 2] = mat[2, 1] = h_sr * cross
    mat[0, 3] = mat[3, 0] = cov_xs_yd
    mat[1, 3] = mat[3, 1] = cov_xr_yd
    mat[2, 3] = mat[3, 2] = h_sr * cov_xs_yd

    return LabeledCovariance(labels=(XS, XR, YR, YD), matrix=mat)


def _resolve(cov: LabeledCovariance, labels: Iterable[str], role: str) -> list[int]:
    """Map a label collection onto matrix indices in canonical (matrix) order."""
    wanted = list(labels)
    if len(set(wanted)) != len(wanted):
        raise UsageError(f"duplicate labels in {role}: {wanted}")
    idx = sorted(cov.index_of(name) for name in wanted)
    return idx


def _condition_block(mat: np.ndarray, a_idx: list[int], b_idx: list[int]) -> np.ndarray:
    """Schur complement Cov[A] - Cov[A,B] Cov[B]^-1 Cov[B,A] in extended precision.

    Implemented as a symmetric Gaussian elimination of the B block inside the
    bordered matrix [[BB, BA], [AB, AA]], taking the largest remaining
    diagonal entry as the next pivot.  Pivots smaller than max_pivot / 1e12
    are treated as exact degeneracies: they are skipped when the remaining
    cross terms to A are negligible (a perfectly correlated input pair
    conditions cleanly this way) and rejected otherwise, because then the
    conditional covariance is not determined by the inputs.
    """
    order = list(b_idx) + list(a_idx)
    work = mat[np.ix_(order, order)].astype(_LD, copy=True)
    nb = len(b_idx)
    na = len(a_idx)
    a_pos = list(range(nb, nb + na))
    if nb == 0:
        return work

    diag_a0 = [float(work[j, j]) for j in a_pos]
    scale = max((float(work[k, k]) for k in range(nb)), default=0.0)
    remaining = list(range(nb))
    for _ in range(nb):
        pivot = max(remaining, key=lambda j: work[j, j])
        d = work[pivot, pivot]
        if not (float(d) > max(scale, 0.0) / _COND_LIMIT):
            break
        remaining.remove(pivot)
        others = remaining + a_pos
        if others:
            v = work[others, pivot].copy()
            work[np.ix_(others, others)] -= np.outer(v, v) / d
            work[others, pivot] = 0.0
            work[pivot, others] = 0.0
        work[pivot, pivot] = 0.0
    else:
        remaining = []

    if remaining:
        # Degenerate directions left over; conditioning is well defined only
        # if they carry no covariance with the targets.
        for j, var0 in zip(a_pos, diag_a0):
            tol = _CONSISTENCY_RTOL * math.sqrt(max(scale, 0.0) * max(var0, 0.0))
            residual = max(abs(float(work[r, j])) for r in remaining)
            if residual > tol:
                raise DegenerateConditioningError(
                    "conditioning block is singular (condition number above "
                    f"{_COND_LIMIT:.0e}) and still correlated with the targets "
                    f"(residual {residual:.3e} > {tol:.3e})")

    return work[np.ix_(a_pos, a_pos)].copy()


def conditional_covariance(cov: LabeledCovariance,
                           targets: Iterable[str],
                           given: Iterable[str]) -> LabeledCovariance:
    """Covariance of the target variables conditioned on the given ones.

    With an empty conditioning set this is just the target block.  Targets
    and conditioning labels must be disjoint.
    """
    a_idx = _resolve(cov, targets, "targets")
    b_idx = _resolve(cov, given, "given")
    if set(a_idx) & set(b_idx):
        raise UsageError("targets and given label sets overlap")
    if not a_idx:
        raise UsageError("targets must not be empty")
    block = _condition_block(cov.matrix, a_idx, b_idx)
    labels = tuple(cov.labels[i] for i in a_idx)
    return LabeledCovariance(labels=labels, matrix=block)


def _det_sym(mat: np.ndarray) -> np.longdouble:
    """Determinant of a small symmetric matrix by pivoted elimination."""
    n = mat.shape[0]
    if n == 1:
        return _LD(mat[0, 0])
    if n == 2:
        return _LD(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0])
    work = mat.astype(_LD, copy=True)
    det = _LD(1.0)
    remaining = list(range(n))
    for _ in range(n):
        pivot = max(remaining, key=lambda j: abs(work[j, j]))
        d = work[pivot, pivot]
        det *= d
        if d == 0.0:
            return _LD(0.0)
        remaining.remove(pivot)
        if remaining:
            v = work[remaining, pivot].copy()
            work[np.ix_(remaining, remaining)] -= np.outer(v, v) / d
    return det


def gaussian_mutual_information(cov: LabeledCovariance,
                                a: Iterable[str],
                                b: Iterable[str],
                                given: Iterable[str] = ()) -> float:
    """Mutual information I(A; B | C) in bits per channel use.

    Evaluated as the log determinant ratio of Cov[A|C] to Cov[A|B,C]; the
    result is symmetric in (a, b) up to floating point noise and clamped at
    zero from below.
    """
    a_idx = _resolve(cov, a, "a")
    b_idx = _resolve(cov, b, "b")
    c_idx = _resolve(cov, given, "given")
    groups = (set(a_idx), set(b_idx), set(c_idx))
    if groups[0] & groups[1] or groups[0] & groups[2] or groups[1] & groups[2]:
        raise UsageError("a, b and given label sets must be pairwise disjoint")
    if not a_idx or not b_idx:
        raise UsageError("a and b must not be empty")

    num = _det_sym(_condition_block(cov.matrix, a_idx, c_idx))
    den = _det_sym(_condition_block(cov.matrix, a_idx, sorted(b_idx + c_idx)))
    if not (float(den) > 0.0) or not (float(num) > 0.0):
        raise DegenerateConditioningError(
            f"conditional covariance is singular (det {float(num):.3e} / {float(den):.3e})")
    mi = float(0.5 * (np.log(num) - np.log(den)) / _LN2_LD)
    return max(mi, 0.0)

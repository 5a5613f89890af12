"""Physical-layer arithmetic: far-field path gain, node geometry, SNR and
the Shannon capacity function.

The propagation model is the free-space inverse-power law
``gain = base_gain * tx_gain * rx_gain * (wavelength / 4 pi)^2 * d^-exponent``
with omnidirectional unit antenna gains, a 0.12 m carrier wavelength and
exponent 2 by default.  The model is a far-field approximation: co-located
nodes are a domain error, not a saturated gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterDomainError

__all__ = [
    "PathLossParams",
    "NodeGeometry",
    "LinkGains",
    "PowerBudget",
    "path_gain",
    "gains_from_geometry",
    "snr",
    "capacity_of_snr",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PathLossParams:
    """Far-field propagation parameters; all fields strictly positive."""

    tx_gain: float = 1.0
    rx_gain: float = 1.0
    wavelength: float = 0.12
    exponent: float = 2.0
    base_gain: float = 1.0

    def __post_init__(self) -> None:
        for name in ("tx_gain", "rx_gain", "wavelength", "exponent", "base_gain"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise ParameterDomainError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class NodeGeometry:
    """Relay placement relative to a source at the origin and a destination
    on the positive axis.

    d_sr_axis is the relay's horizontal coordinate (may be negative or
    beyond the destination); d_r its perpendicular offset.
    """

    d_sd: float
    d_sr_axis: float
    d_r: float = 0.0

    def __post_init__(self) -> None:
        if not (self.d_sd > 0.0) or not math.isfinite(self.d_sd):
            raise ParameterDomainError(f"d_sd must be > 0, got {self.d_sd!r}")
        if self.d_r < 0.0 or not math.isfinite(self.d_r):
            raise ParameterDomainError(f"d_r must be >= 0, got {self.d_r!r}")
        if not math.isfinite(self.d_sr_axis):
            raise ParameterDomainError(f"d_sr_axis must be finite, got {self.d_sr_axis!r}")


@dataclass(frozen=True)
class LinkGains:
    """Dimensionless power gains of the three links."""

    gamma_sr: float
    gamma_rd: float
    gamma_sd: float

    def __post_init__(self) -> None:
        for name in ("gamma_sr", "gamma_rd", "gamma_sd"):
            value = getattr(self, name)
            if value < 0.0 or math.isnan(value):
                raise ParameterDomainError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class PowerBudget:
    """Per-node maximum transmit powers and receiver noise power, in watts.

    Powers may be zero (a silenced node); noise must be strictly positive.
    """

    p_s_max: float
    p_r_max: float
    noise: float

    def __post_init__(self) -> None:
        for name in ("p_s_max", "p_r_max"):
            value = getattr(self, name)
            if value < 0.0 or not math.isfinite(value):
                raise ParameterDomainError(f"{name} must be >= 0, got {value!r}")
        if not (self.noise > 0.0) or not math.isfinite(self.noise):
            raise ParameterDomainError(f"noise must be > 0, got {self.noise!r}")


def path_gain(distance: float, params: PathLossParams = PathLossParams()) -> float:
    """Power gain of a link of the given length in meters.

    Strictly decreasing in distance; distance <= 0 is a domain error.
    """
    if not (distance > 0.0):
        raise ParameterDomainError(
            f"path gain needs a positive distance, got {distance!r} (co-located nodes unsupported)")
    scale = params.base_gain * params.tx_gain * params.rx_gain
    return scale * (params.wavelength / (4.0 * math.pi)) ** 2 * distance ** (-params.exponent)


def gains_from_geometry(geom: NodeGeometry,
                        params: PathLossParams = PathLossParams()) -> LinkGains:
    """Map the three node positions onto the three link gains."""
    d_sr = math.hypot(geom.d_sr_axis, geom.d_r)
    d_rd = math.hypot(geom.d_sd - geom.d_sr_axis, geom.d_r)
    return LinkGains(
        gamma_sr=path_gain(d_sr, params),
        gamma_rd=path_gain(d_rd, params),
        gamma_sd=path_gain(geom.d_sd, params),
    )


def snr(gain: float, power: float, noise: float) -> float:
    """Received signal-to-noise ratio gain*power/noise."""
    if not (noise > 0.0):
        raise ParameterDomainError(f"noise must be > 0, got {noise!r}")
    if gain < 0.0 or power < 0.0:
        raise ParameterDomainError("gain and power must be >= 0")
    return gain * power / noise


def capacity_of_snr(s: float) -> float:
    """Shannon capacity 0.5*log2(1+s) in bits per channel use."""
    if s < 0.0 or math.isnan(s):
        raise ParameterDomainError(f"SNR must be >= 0, got {s!r}")
    return 0.5 * math.log1p(s) / _LN2

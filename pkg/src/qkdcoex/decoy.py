"""Asymptotic secure key rates for vacuum+weak decoy-state BB84.

The analysis is the standard three-intensity (signal mu, decoy nu, vacuum)
GLLP-style bound: the decoy gains pin a lower bound on the single-photon
yield Y1 and an upper bound on the single-photon error e1, and the secure
fraction per pulse is

    R = q * ( -Qmu * f * H2(Emu) + Q1 * (1 - H2(e1U)) ),  Q1 = Y1L * mu * e^-mu,

converted to bits/s with the pulse clock and the signal-emission
probability. Everything is asymptotic (infinite key); finite-size
statistics are out of scope. All probabilities and bounds are clamped to
their physical ranges and clamp events are counted in the returned
diagnostics, because the decoy bounds go negative in degenerate regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ._backend import impl
from .errors import (ConfigError, DomainError, NoSecureDistanceError,
                     UndefinedBoundError)

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DecoyIntensities:
    """Signal/decoy/vacuum mean photon numbers and emission probabilities."""

    mu: float = 0.4
    nu: float = 0.2
    omega: float = 0.0
    p_mu: float = 6.0 / 8.0
    p_nu: float = 1.0 / 8.0
    p_omega: float = 1.0 / 8.0

    def __post_init__(self):
        if not (self.mu > self.nu > self.omega):
            raise ConfigError(
                f"intensities must satisfy mu > nu > omega, got "
                f"{self.mu}/{self.nu}/{self.omega}"
            )
        if self.omega != 0.0:
            raise ConfigError(f"vacuum intensity must be 0, got {self.omega}")
        if self.nu <= 0.0:
            raise ConfigError(f"decoy intensity must be > 0, got {self.nu}")
        probs = (self.p_mu, self.p_nu, self.p_omega)
        if any(p <= 0.0 for p in probs):
            raise ConfigError(f"emission probabilities must be > 0, got {probs}")
        if abs(sum(probs) - 1.0) > _PROB_SUM_TOL:
            raise ConfigError(
                f"emission probabilities must sum to 1, got {sum(probs)!r}"
            )


@dataclass(frozen=True)
class DetectorSpec:
    """Gated single-photon detector bank at the receiver."""

    efficiency: float = 0.10
    gate_hz: float = 1.25e9
    dark_count_per_gate: float = 3.0e-7
    num_detectors: int = 4

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ConfigError(f"efficiency must be in (0, 1], got {self.efficiency}")
        if not 0.0 <= self.dark_count_per_gate < 1.0:
            raise ConfigError(
                f"dark count per gate must be in [0, 1), got "
                f"{self.dark_count_per_gate}"
            )
        if self.gate_hz <= 0.0:
            raise ConfigError(f"gate frequency must be > 0, got {self.gate_hz}")
        if self.num_detectors < 1:
            raise ConfigError(f"need >= 1 detector, got {self.num_detectors}")


@dataclass(frozen=True)
class ProtocolParams:
    """Protocol-level constants of the BB84 system.

    q (basis sifting) and the signal emission probability are kept as
    separate factors; only their product enters the output rate.
    block_size_bits is post-processing metadata and never used in the
    asymptotic computation.
    """

    clock_hz: float = 625e6
    misalignment_error: float = 0.033
    background_error: float = 0.5
    ec_efficiency: float = 1.16
    sifting_factor: float = 0.5
    block_size_bits: int = 500_000

    def __post_init__(self):
        if self.clock_hz <= 0.0:
            raise ConfigError(f"clock must be > 0 Hz, got {self.clock_hz}")
        if not 0.0 <= self.misalignment_error < 0.5:
            raise ConfigError(
                f"misalignment error must be in [0, 0.5), got "
                f"{self.misalignment_error}"
            )
        if self.background_error != 0.5:
            raise ConfigError(
                f"background error must be exactly 0.5, got {self.background_error}"
            )
        if self.ec_efficiency < 1.0:
            raise ConfigError(
                f"error-correction efficiency must be >= 1, got {self.ec_efficiency}"
            )
        if not 0.0 < self.sifting_factor <= 1.0:
            raise ConfigError(
                f"sifting factor must be in (0, 1], got {self.sifting_factor}"
            )


@dataclass(frozen=True)
class ChannelPoint:
    """Overall single-photon transmittance-and-detection probability eta and
    background yield Y0 per pulse."""

    eta: float
    y0: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError(f"eta must be in [0, 1], got {self.eta}")
        if not 0.0 <= self.y0 < 1.0:
            raise ConfigError(f"Y0 must be in [0, 1), got {self.y0}")


@dataclass(frozen=True)
class KeyRateBreakdown:
    """Per-point diagnostics of the key-rate evaluation."""

    q_mu: float
    e_mu: float
    q_nu: float
    e_nu: float
    y1_lower: float
    e1_upper: float
    rate_per_pulse: float
    rate_bps: float
    clamp_events: int


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a maximum-distance search."""

    distance_km: float
    at_upper_boundary: bool = False


def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2 (1-x), with H2(0) = H2(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument must be in [0, 1], got {x}")
    return impl.h2(x)


def gain_and_qber(intensity: float, ch: ChannelPoint,
                  params: ProtocolParams) -> tuple[float, float]:
    """Gain Q and QBER E for one Poissonian intensity on this channel."""
    if intensity < 0.0:
        raise DomainError(f"intensity must be >= 0, got {intensity}")
    return impl.gain_qber(intensity, ch.eta, ch.y0,
                          params.background_error, params.misalignment_error)


def y1_lower_bound(q_mu: float, q_nu: float, intensities: DecoyIntensities,
                   y0: float) -> float:
    """Lower bound on the single-photon yield from the signal and decoy
    gains, clamped to [0, 1]."""
    mu, nu = intensities.mu, intensities.nu
    if mu * nu - nu * nu == 0.0:
        raise DomainError("degenerate intensities: mu*nu - nu^2 is zero")
    value, _ = impl.y1_lower(q_mu, q_nu, mu, nu, y0)
    return value


def e1_upper_bound(q_nu: float, e_nu: float, nu: float, y1_lower: float,
                   y0: float, e0: float = 0.5) -> float:
    """Upper bound on the single-photon error rate, clamped to [0, 0.5]."""
    if y1_lower <= 0.0:
        raise UndefinedBoundError(
            "single-photon yield bound is zero; key rate is zero"
        )
    value, _ = impl.e1_upper(e_nu, q_nu, nu, y1_lower, y0, e0)
    return value


def key_rate_details(ch: ChannelPoint, intensities: DecoyIntensities,
                     params: ProtocolParams) -> KeyRateBreakdown:
    """Full evaluation of the secure key rate with diagnostics."""
    mu, nu = intensities.mu, intensities.nu
    if mu * nu - nu * nu == 0.0:
        raise DomainError("degenerate intensities: mu*nu - nu^2 is zero")
    rpp, qmu, emu, qnu, enu, y1, e1, clamps = impl.key_point(
        ch.eta, ch.y0, mu, nu,
        params.background_error, params.misalignment_error,
        params.ec_efficiency, params.sifting_factor,
    )
    return KeyRateBreakdown(
        q_mu=qmu, e_mu=emu, q_nu=qnu, e_nu=enu,
        y1_lower=y1, e1_upper=e1,
        rate_per_pulse=rpp,
        rate_bps=rpp * params.clock_hz * intensities.p_mu,
        clamp_events=clamps,
    )


def secure_key_rate_bps(ch: ChannelPoint, intensities: DecoyIntensities,
                        params: ProtocolParams) -> float:
    """Asymptotic secure key rate in bits/s (never negative)."""
    return key_rate_details(ch, intensities, params).rate_bps


def find_rate_cliff(rate_fn: Callable[[float], float], from_km: float,
                    to_km: float, coarse_step_km: float = 1.0,
                    resolution_km: float = 0.01) -> DistanceResult:
    """Largest distance with rate_fn > 0: coarse grid scan, then bisection.

    Returns the range upper bound with `at_upper_boundary` set when the rate
    is still positive there. Raises NoSecureDistanceError when the rate is
    non-positive over the whole range. On a normal return d, the bracket
    rate_fn(d) > 0 and rate_fn(d + resolution) <= 0 holds.
    """
    if to_km < from_km:
        raise DomainError(f"empty search range [{from_km}, {to_km}]")
    if coarse_step_km <= 0.0 or resolution_km <= 0.0:
        raise DomainError("steps must be > 0")

    grid = [from_km]
    d = from_km
    while d < to_km:
        d = min(d + coarse_step_km, to_km)
        grid.append(d)

    positive = [rate_fn(d) > 0.0 for d in grid]
    if not any(positive):
        raise NoSecureDistanceError(
            f"key rate is non-positive over [{from_km}, {to_km}] km"
        )
    last = max(i for i, p in enumerate(positive) if p)
    if last == len(grid) - 1:
        return DistanceResult(grid[last], at_upper_boundary=True)

    lo, hi = grid[last], grid[last + 1]
    while hi - lo > resolution_km:
        mid = 0.5 * (lo + hi)
        if rate_fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return DistanceResult(lo, at_upper_boundary=False)


def max_secure_distance_km(evaluator: Callable[[float], ChannelPoint],
                           intensities: DecoyIntensities,
                           params: ProtocolParams,
                           search_range_km: tuple[float, float],
                           coarse_step_km: float = 1.0,
                           resolution_km: float = 0.01) -> DistanceResult:
    """Largest distance at which the secure key rate stays positive.

    `evaluator` maps a distance to the channel point at that distance and
    must be pure; the search is a 1 km coarse scan refined by bisection to
    0.01 km.
    """

    def rate(d: float) -> float:
        return secure_key_rate_bps(evaluator(d), intensities, params)

    return find_rate_cliff(rate, search_range_km[0], search_range_km[1],
                           coarse_step_km, resolution_km)


def background_yield(detector: DetectorSpec, params: ProtocolParams,
                     noise_rate_cps: float,
                     per_pulse_divisor_hz: float | None = None) -> float:
    """Background yield Y0 per pulse: dark counts plus channel noise.

    Dark counts contribute num_detectors * dark_per_gate * gates-per-pulse.
    The noise rate is converted per pulse with the pulse clock unless an
    explicit divisor (e.g. the detector gate rate) is supplied. The noise
    rate must already be a detected rate; no efficiency scaling is applied
    here.
    """
    if noise_rate_cps < 0.0:
        raise DomainError(f"noise rate must be >= 0, got {noise_rate_cps}")
    gates_per_pulse = detector.gate_hz / params.clock_hz
    dark = detector.num_detectors * detector.dark_count_per_gate * gates_per_pulse
    divisor = per_pulse_divisor_hz if per_pulse_divisor_hz else params.clock_hz
    if divisor <= 0.0:
        raise DomainError(f"divisor must be > 0 Hz, got {divisor}")
    noise = min(1.0, noise_rate_cps / divisor)
    return min(1.0, dark + noise)


def dbm_to_mw(dbm: float) -> float:
    """Power conversion: dBm to milliwatts."""
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    """Power conversion: milliwatts to dBm."""
    if mw <= 0.0:
        raise DomainError(f"power must be > 0 mW, got {mw}")
    return 10.0 * math.log10(mw)

"""Spontaneous Raman scattering noise seen by the quantum receiver.

The model is forward (co-propagating) scattering only: the detected rate is
proportional to the classical fiber-input power and to the scattering
length, attenuated at the rate of the quantum path over which the noise
photons travel,

    rate = P_mw * rho * L * 10^(-alpha*L / 10)   [counts/s].

`rho` is a lumped detected coefficient in cps/(mW km): it already contains
detector efficiency, filter bandwidth and modal isolation, so no further
efficiency scaling is applied downstream.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ._backend import impl
from .errors import ConfigError, DegenerateFitError, DomainError
from .link import SchemeName


@dataclass(frozen=True)
class RamanCoefficient:
    """Lumped detected-noise coefficient in counts/s per mW per km."""

    rho_cps_per_mw_km: float
    scheme: SchemeName | None = None

    def __post_init__(self):
        if self.rho_cps_per_mw_km <= 0.0:
            raise ConfigError(
                f"Raman coefficient must be > 0, got {self.rho_cps_per_mw_km}"
            )


@dataclass(frozen=True)
class NoiseMeasurement:
    """One measured noise point: distance, launch power and detected rate."""

    distance_km: float
    fiber_input_power_mw: float
    measured_rate_cps: float

    def __post_init__(self):
        for name in ("distance_km", "fiber_input_power_mw", "measured_rate_cps"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")


def srs_noise_rate_cps(power_mw: float, rho: RamanCoefficient,
                       distance_km: float, alpha_db_per_km: float) -> float:
    """Detected Raman noise count rate at the given distance.

    `alpha_db_per_km` is the attenuation of the path the noise photons are
    detected on (the quantum mode at the quantum band, by default).
    """
    if power_mw < 0.0 or distance_km < 0.0 or alpha_db_per_km < 0.0:
        raise DomainError("power, distance and attenuation must be >= 0")
    return impl.srs_rate(power_mw, rho.rho_cps_per_mw_km, distance_km,
                         alpha_db_per_km)


def noise_prob_per_pulse(rate_cps: float, clock_hz: float) -> float:
    """Probability of a noise count per pulse slot, clamped to [0, 1]."""
    if clock_hz <= 0.0:
        raise DomainError(f"clock must be > 0 Hz, got {clock_hz}")
    if rate_cps < 0.0:
        raise DomainError(f"rate must be >= 0 cps, got {rate_cps}")
    return min(1.0, rate_cps / clock_hz)


def peak_noise_distance_km(alpha_db_per_km: float) -> float:
    """Distance of the interior maximum of the noise curve, 10/(alpha ln 10)."""
    if alpha_db_per_km <= 0.0:
        raise DomainError("attenuation must be > 0")
    return 10.0 / (alpha_db_per_km * math.log(10.0))


def fit_raman_coefficient(measurements: Sequence[NoiseMeasurement],
                          alpha_db_per_km: float,
                          scheme: SchemeName | None = None) -> RamanCoefficient:
    """Closed-form least-squares estimate of the lumped coefficient.

    With model values m_i = P_i * L_i * 10^(-alpha*L_i/10), the minimizer of
    sum((r_i - rho*m_i)^2) is rho = sum(r_i*m_i) / sum(m_i^2).
    """
    usable = [m for m in measurements
              if m.distance_km > 0.0 and m.fiber_input_power_mw > 0.0]
    if not usable:
        raise DomainError(
            "need at least one measurement with positive distance and power"
        )
    num = 0.0
    den = 0.0
    for m in usable:
        model = impl.srs_rate(m.fiber_input_power_mw, 1.0, m.distance_km,
                              alpha_db_per_km)
        num += m.measured_rate_cps * model
        den += model * model
    if den == 0.0:
        raise DegenerateFitError("all model values are zero; cannot fit")
    return RamanCoefficient(num / den, scheme)


def read_measurements_csv(path: str | Path) -> tuple[NoiseMeasurement, ...]:
    """Load measurements from delimited text with header
    distance_km,power_mw,rate_cps."""
    expected = ["distance_km", "power_mw", "rate_cps"]
    out: list[NoiseMeasurement] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != expected:
            raise ConfigError(
                f"{path}: expected header {','.join(expected)}, "
                f"got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                values = [float(row[k]) for k in expected]
            except (TypeError, ValueError):
                raise ConfigError(f"{path}:{lineno}: non-numeric field") from None
            out.append(NoiseMeasurement(*values))
    return tuple(out)


def coefficient_suppression(rho_smf: float, rho_fmf: Iterable[float]) -> float:
    """Noise reduction implied by the coefficients alone, before attenuation
    differences: 1 - mean(fmf coefficients) / smf coefficient."""
    fmf = list(rho_fmf)
    if rho_smf <= 0.0 or not fmf:
        raise DomainError("need a positive SMF coefficient and FMF coefficients")
    return 1.0 - (sum(fmf) / len(fmf)) / rho_smf


def detected_count_suppression(smf: tuple[float, float],
                               fmf: Sequence[tuple[float, float]],
                               distances_km: Sequence[float]) -> float:
    """Distance-averaged reduction of detected noise counts at equal
    fiber-input power.

    `smf` and each `fmf` entry are (rho, alpha_db_per_km) pairs for the
    path the noise is detected on. At each distance the FMF schemes are
    averaged and compared against SMF; the per-distance reductions are then
    averaged over the grid. The launch power cancels.
    """
    rho_smf, alpha_smf = smf
    if not distances_km:
        raise DomainError("need at least one distance")
    total = 0.0
    for d in distances_km:
        ref = impl.srs_rate(1.0, rho_smf, d, alpha_smf)
        if ref <= 0.0:
            raise DomainError(f"SMF reference rate is zero at {d} km")
        mean_fmf = sum(impl.srs_rate(1.0, rho, d, alpha)
                       for rho, alpha in fmf) / len(fmf)
        total += 1.0 - mean_fmf / ref
    return total / len(distances_km)

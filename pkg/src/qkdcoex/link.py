"""Fiber, mode and component model: per-channel loss, transmittance,
modal isolation and the classical power budget.

All losses are stored and summed in dB; conversion to a linear
transmittance happens only at the `transmittance` boundary. Types are
frozen dataclasses and every operation is a pure function, so everything
here is safe to share across threads.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ._backend import impl
from .errors import ConfigError, DomainError


class Mode(enum.Enum):
    """Spatial mode carrying a channel."""

    FUNDAMENTAL = "fundamental"   # the single guided mode of SMF
    LP01 = "lp01"
    LP02 = "lp02"


class Band(enum.Enum):
    """Coarse wavelength band label; also selects the channel in loss queries.

    quantum ~ 1550.12 nm, classical ~ 1546.92 nm.
    """

    QUANTUM = "quantum"
    CLASSICAL = "classical"


class FiberKind(enum.Enum):
    SMF = "smf"
    FMF = "fmf"


class Side(enum.Enum):
    TRANSMITTER = "transmitter-side"
    RECEIVER = "receiver-side"


class SchemeName(enum.Enum):
    SMF = "smf"
    LP01_IN = "lp01in"   # classical light launched into LP01
    LP02_IN = "lp02in"   # classical light launched into LP02


_SMF_MODES = (Mode.FUNDAMENTAL,)
_FMF_MODES = (Mode.LP01, Mode.LP02)


@dataclass(frozen=True)
class FiberSpec:
    """Per-mode, per-band attenuation of a fiber.

    Attenuation values must be positive and below 1 dB/km. An SMF spec
    carries the fundamental mode at both bands; an FMF spec carries LP01
    and LP02 at both bands.
    """

    kind: FiberKind
    attenuation_db_per_km: Mapping[tuple[Mode, Band], float]

    def __post_init__(self):
        modes = _SMF_MODES if self.kind is FiberKind.SMF else _FMF_MODES
        for mode in modes:
            for band in Band:
                key = (mode, band)
                if key not in self.attenuation_db_per_km:
                    raise ConfigError(
                        f"fiber attenuation missing entry for "
                        f"({mode.value}, {band.value})"
                    )
        for (mode, band), value in self.attenuation_db_per_km.items():
            if not 0.0 < value < 1.0:
                raise ConfigError(
                    f"fiber attenuation for ({mode.value}, {band.value}) must "
                    f"be in (0, 1) dB/km, got {value}"
                )

    @classmethod
    def smf(cls, quantum_db_per_km: float = 0.190,
            classical_db_per_km: float = 0.192) -> "FiberSpec":
        return cls(FiberKind.SMF, {
            (Mode.FUNDAMENTAL, Band.QUANTUM): quantum_db_per_km,
            (Mode.FUNDAMENTAL, Band.CLASSICAL): classical_db_per_km,
        })

    @classmethod
    def fmf(cls, lp01_db_per_km: float = 0.226,
            lp02_db_per_km: float = 0.257) -> "FiberSpec":
        # One measured attenuation per LP mode; reused for both bands
        # (no band-resolved characterization is available).
        return cls(FiberKind.FMF, {
            (Mode.LP01, Band.QUANTUM): lp01_db_per_km,
            (Mode.LP01, Band.CLASSICAL): lp01_db_per_km,
            (Mode.LP02, Band.QUANTUM): lp02_db_per_km,
            (Mode.LP02, Band.CLASSICAL): lp02_db_per_km,
        })

    def attenuation(self, mode: Mode, band: Band) -> float:
        try:
            return self.attenuation_db_per_km[(mode, band)]
        except KeyError:
            raise ConfigError(
                f"no attenuation entry for ({mode.value}, {band.value})"
            ) from None


@dataclass(frozen=True)
class ComponentSpec:
    """Inline component with a per-mode insertion loss."""

    name: str
    insertion_loss_db: Mapping[Mode, float]
    position: Side

    def __post_init__(self):
        for mode, value in self.insertion_loss_db.items():
            if value < 0.0:
                raise ConfigError(
                    f"component {self.name!r}: insertion loss for mode "
                    f"{mode.value} must be >= 0, got {value}"
                )

    def loss_for(self, mode: Mode) -> float:
        try:
            return self.insertion_loss_db[mode]
        except KeyError:
            raise ConfigError(
                f"component {self.name!r} has no insertion loss entry for "
                f"mode {mode.value}"
            ) from None


@dataclass(frozen=True)
class MultiplexScheme:
    """Assignment of the quantum and classical channels to spatial modes."""

    name: SchemeName
    quantum_mode: Mode
    classical_mode: Mode

    _EXPECTED = {
        SchemeName.SMF: (Mode.FUNDAMENTAL, Mode.FUNDAMENTAL),
        SchemeName.LP01_IN: (Mode.LP02, Mode.LP01),
        SchemeName.LP02_IN: (Mode.LP01, Mode.LP02),
    }

    def __post_init__(self):
        expected = self._EXPECTED[self.name]
        if (self.quantum_mode, self.classical_mode) != expected:
            raise ConfigError(
                f"scheme {self.name.value}: quantum/classical modes must be "
                f"{expected[0].value}/{expected[1].value}"
            )

    @classmethod
    def named(cls, name: SchemeName | str) -> "MultiplexScheme":
        if isinstance(name, str):
            name = SchemeName(name.replace("-", "").lower())
        q, c = cls._EXPECTED[name]
        return cls(name, q, c)

    def mode_for(self, channel: Band) -> Mode:
        return self.quantum_mode if channel is Band.QUANTUM else self.classical_mode


@dataclass(frozen=True)
class IsolationTable:
    """Measured modal isolation (dB) of fiber plus mode MUX/DEMUX versus
    distance, one row list per launch direction.

    Characterization data only: it does not enter the noise model (mode
    leakage is already folded into the measured Raman coefficients).
    """

    lp01_in: Sequence[tuple[float, float]]
    lp02_in: Sequence[tuple[float, float]]

    def __post_init__(self):
        for label, rows in (("lp01in", self.lp01_in), ("lp02in", self.lp02_in)):
            if not rows:
                raise ConfigError(f"isolation table {label}: no rows")
            prev_d, prev_iso = None, None
            for d, iso in rows:
                if iso <= 0.0:
                    raise ConfigError(
                        f"isolation table {label}: isolation at {d} km must "
                        f"be > 0 dB, got {iso}"
                    )
                if prev_d is not None and d <= prev_d:
                    raise ConfigError(
                        f"isolation table {label}: distances must be strictly "
                        f"increasing ({prev_d} then {d})"
                    )
                if prev_iso is not None and iso > prev_iso:
                    raise ConfigError(
                        f"isolation table {label}: isolation must be "
                        f"non-increasing with distance ({prev_iso} then {iso})"
                    )
                prev_d, prev_iso = d, iso

    def rows_for(self, direction: SchemeName) -> Sequence[tuple[float, float]]:
        if direction is SchemeName.LP01_IN:
            return self.lp01_in
        if direction is SchemeName.LP02_IN:
            return self.lp02_in
        raise DomainError("isolation is tabulated for lp01in/lp02in only")


@dataclass(frozen=True)
class LinkPlan:
    """A span of fiber with the inline components on each channel's path."""

    fiber: FiberSpec
    length_km: float
    scheme: MultiplexScheme
    quantum_path_components: tuple[ComponentSpec, ...] = field(default=())
    classical_path_components: tuple[ComponentSpec, ...] = field(default=())

    def __post_init__(self):
        if self.length_km < 0.0:
            raise ConfigError(f"link length must be >= 0 km, got {self.length_km}")
        if self.fiber.kind is FiberKind.SMF and self.scheme.name is not SchemeName.SMF:
            raise ConfigError(
                f"scheme {self.scheme.name.value} requires an FMF link"
            )
        if self.fiber.kind is FiberKind.FMF and self.scheme.name is SchemeName.SMF:
            raise ConfigError("scheme smf requires an SMF link")
        # Fail fast if a component lacks the mode its path uses.
        for channel in Band:
            mode = self.scheme.mode_for(channel)
            self.fiber.attenuation(mode, channel)
            for comp in self._components(channel):
                comp.loss_for(mode)

    def _components(self, channel: Band) -> tuple[ComponentSpec, ...]:
        return (self.quantum_path_components if channel is Band.QUANTUM
                else self.classical_path_components)


def total_loss_db(plan: LinkPlan, channel: Band) -> float:
    """End-to-end loss of one channel: fiber attenuation times length plus
    the insertion losses along that channel's path."""
    mode = plan.scheme.mode_for(channel)
    loss = plan.fiber.attenuation(mode, channel) * plan.length_km
    for comp in plan._components(channel):
        loss += comp.loss_for(mode)
    return loss


def transmittance(loss_db: float) -> float:
    """Linear power transmittance of a dB loss: 10^(-loss/10)."""
    if loss_db < 0.0:
        raise DomainError(f"loss must be >= 0 dB, got {loss_db}")
    return impl.db_loss_to_transmittance(loss_db)


def modal_isolation_at(table: IsolationTable, direction: SchemeName,
                       distance_km: float) -> float:
    """Piecewise-linear interpolation of the isolation table in dB over
    distance; exact at tabulated points, no extrapolation."""
    rows = table.rows_for(direction)
    distances = [d for d, _ in rows]
    if distance_km < distances[0] or distance_km > distances[-1]:
        raise DomainError(
            f"distance {distance_km} km outside tabulated range "
            f"[{distances[0]}, {distances[-1]}] km"
        )
    i = bisect.bisect_left(distances, distance_km)
    if distances[i] == distance_km:
        return rows[i][1]
    d0, v0 = rows[i - 1]
    d1, v1 = rows[i]
    t = (distance_km - d0) / (d1 - d0)
    return v0 + t * (v1 - v0)


def classical_min_launch_power_dbm(plan: LinkPlan,
                                   receiver_sensitivity_dbm: float) -> float:
    """Minimum launch power that still closes the classical link: the
    channel loss plus the receiver sensitivity."""
    return total_loss_db(plan, Band.CLASSICAL) + receiver_sensitivity_dbm

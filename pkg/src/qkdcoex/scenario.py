"""Scenario engine: wires the link, noise and key-rate models together,
runs distance sweeps, calibrates free parameters against reference
operating points, and emits result tables.

Scenarios are immutable; every evaluation is a pure function of
(scenario, distance), so rows may be computed in any order. Sweeps are
evaluated in ascending distance and are deterministic: identical inputs
produce byte-identical output files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from ._backend import impl
from .decoy import (ChannelPoint, DecoyIntensities, DetectorSpec,
                    DistanceResult, ProtocolParams, background_yield,
                    dbm_to_mw, find_rate_cliff, key_rate_details)
from .errors import CalibrationError, ComputationError, ConfigError
from .link import (Band, IsolationTable, LinkPlan,
                   classical_min_launch_power_dbm, total_loss_db,
                   transmittance)
from .raman import RamanCoefficient, srs_noise_rate_cps

RESULT_FIELDS = (
    "distance_km", "launch_power_dbm", "quantum_loss_db", "classical_loss_db",
    "srs_rate_cps", "y0", "q_mu", "e_mu", "y1_lower", "e1_upper",
    "key_rate_bps", "classical_feasible",
)

_FEASIBILITY_TOL_DB = 1e-9


@dataclass(frozen=True)
class Scenario:
    """Complete description of one coexistence configuration.

    With `adaptive_power` set, the classical launch power at each distance
    is the minimum power that closes the classical link, capped at the
    fixed `classical_launch_power_dbm` reference.
    """

    name: str
    link: LinkPlan
    raman: RamanCoefficient
    detector: DetectorSpec
    protocol: ProtocolParams
    intensities: DecoyIntensities
    classical_launch_power_dbm: float = -2.60
    adaptive_power: bool = False
    receiver_sensitivity_dbm: float = -33.0
    # Which path's attenuation governs the decay of detected noise photons:
    # the quantum path (default) or the classical pump path.
    raman_alpha_basis: Band = Band.QUANTUM
    # Divisor converting the noise rate to a per-pulse probability: the
    # pulse clock (default) or the detector gate rate.
    noise_divisor: str = "clock"
    # Characterization metadata; not used by the noise model.
    isolation: IsolationTable | None = None

    def __post_init__(self):
        if self.noise_divisor not in ("clock", "gate"):
            raise ConfigError(
                f"noise divisor must be 'clock' or 'gate', got "
                f"{self.noise_divisor!r}"
            )


@dataclass(frozen=True)
class SweepSpec:
    """Inclusive distance grid for a sweep."""

    from_km: float
    to_km: float
    step_km: float

    def __post_init__(self):
        if self.from_km > self.to_km:
            raise ConfigError(
                f"sweep range is empty: from {self.from_km} to {self.to_km}"
            )
        if self.step_km <= 0.0:
            raise ConfigError(f"sweep step must be > 0, got {self.step_km}")
        if self.from_km < 0.0:
            raise ConfigError(f"sweep start must be >= 0, got {self.from_km}")

    def distances(self) -> list[float]:
        n = int(math.floor((self.to_km - self.from_km) / self.step_km + 1e-9)) + 1
        return [self.from_km + i * self.step_km for i in range(n)]


@dataclass(frozen=True)
class ResultRow:
    """One sweep point; field order matches the CSV schema."""

    distance_km: float
    launch_power_dbm: float
    quantum_loss_db: float
    classical_loss_db: float
    srs_rate_cps: float
    y0: float
    q_mu: float
    e_mu: float
    y1_lower: float
    e1_upper: float
    key_rate_bps: float
    classical_feasible: bool


@dataclass(frozen=True)
class ChannelState:
    """Intermediate quantities of one (scenario, distance) evaluation."""

    distance_km: float
    quantum_loss_db: float
    classical_loss_db: float
    min_launch_power_dbm: float
    launch_power_dbm: float
    srs_rate_cps: float
    y0: float
    eta: float
    classical_feasible: bool

    def channel_point(self) -> ChannelPoint:
        return ChannelPoint(self.eta, self.y0)


def _plan_at(scenario: Scenario, distance_km: float) -> LinkPlan:
    return replace(scenario.link, length_km=distance_km)


def launch_power_dbm(scenario: Scenario, distance_km: float) -> float:
    """Classical launch power used at this distance (fixed or adaptive)."""
    if not scenario.adaptive_power:
        return scenario.classical_launch_power_dbm
    needed = classical_min_launch_power_dbm(
        _plan_at(scenario, distance_km), scenario.receiver_sensitivity_dbm)
    return min(needed, scenario.classical_launch_power_dbm)


def channel_state(scenario: Scenario, distance_km: float) -> ChannelState:
    """Evaluate the link budget and background yield at one distance."""
    plan = _plan_at(scenario, distance_km)
    quantum_loss = total_loss_db(plan, Band.QUANTUM)
    classical_loss = total_loss_db(plan, Band.CLASSICAL)
    needed = classical_loss + scenario.receiver_sensitivity_dbm
    launch = (min(needed, scenario.classical_launch_power_dbm)
              if scenario.adaptive_power
              else scenario.classical_launch_power_dbm)

    alpha_band = scenario.raman_alpha_basis
    alpha = plan.fiber.attenuation(plan.scheme.mode_for(alpha_band), alpha_band)
    srs = srs_noise_rate_cps(dbm_to_mw(launch), scenario.raman,
                             distance_km, alpha)

    divisor = (scenario.detector.gate_hz if scenario.noise_divisor == "gate"
               else None)
    y0 = background_yield(scenario.detector, scenario.protocol, srs,
                          per_pulse_divisor_hz=divisor)
    eta = transmittance(quantum_loss) * scenario.detector.efficiency
    return ChannelState(
        distance_km=distance_km,
        quantum_loss_db=quantum_loss,
        classical_loss_db=classical_loss,
        min_launch_power_dbm=needed,
        launch_power_dbm=launch,
        srs_rate_cps=srs,
        y0=min(y0, math.nextafter(1.0, 0.0)),
        eta=eta,
        classical_feasible=launch + _FEASIBILITY_TOL_DB >= needed,
    )


def evaluate_at(scenario: Scenario, distance_km: float) -> ResultRow:
    """One full sweep point: link budget, noise, decoy bounds, key rate."""
    state = channel_state(scenario, distance_km)
    detail = key_rate_details(state.channel_point(), scenario.intensities,
                              scenario.protocol)
    return ResultRow(
        distance_km=distance_km,
        launch_power_dbm=state.launch_power_dbm,
        quantum_loss_db=state.quantum_loss_db,
        classical_loss_db=state.classical_loss_db,
        srs_rate_cps=state.srs_rate_cps,
        y0=state.y0,
        q_mu=detail.q_mu,
        e_mu=detail.e_mu,
        y1_lower=detail.y1_lower,
        e1_upper=detail.e1_upper,
        key_rate_bps=detail.rate_bps,
        classical_feasible=state.classical_feasible,
    )


def run_sweep(scenario: Scenario, sweep: SweepSpec) -> list[ResultRow]:
    """Evaluate the scenario on the sweep grid, in ascending distance."""
    rows = []
    for d in sweep.distances():
        try:
            rows.append(evaluate_at(scenario, d))
        except ConfigError:
            raise
        except Exception as exc:
            raise ComputationError(
                f"sweep of {scenario.name!r} failed at {d} km: {exc}"
            ) from exc
    return rows


# ---------------------------------------------------------------------------
# result emission

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return np.format_float_scientific(value, unique=True)


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    lines = [",".join(RESULT_FIELDS)]
    for row in rows:
        lines.append(",".join(_fmt(getattr(row, f)) for f in RESULT_FIELDS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: Sequence[ResultRow]) -> str:
    payload = [{f: getattr(row, f) for f in RESULT_FIELDS} for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def emit_results(rows: Sequence[ResultRow], format: str,
                 path: str | Path) -> None:
    """Write rows as CSV or JSON; numbers keep full round-trip precision."""
    if format == "csv":
        text = rows_to_csv(rows)
    elif format == "json":
        text = rows_to_json(rows)
    else:
        raise ConfigError(f"unknown output format {format!r}")
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ComputationError(f"cannot write results to {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# maximum secure distance

def max_secure_distance(scenario: Scenario, from_km: float = 0.0,
                        to_km: float = 300.0, *,
                        require_classical_feasible: bool = True,
                        coarse_step_km: float = 1.0,
                        resolution_km: float = 0.01) -> DistanceResult:
    """Largest distance with a positive secure key rate.

    By default a distance only counts when the classical channel closes at
    the launch power in use (launch >= loss + receiver sensitivity); beyond
    that point the coexistence link as a whole is not operable. Pass
    require_classical_feasible=False for the rate-only cliff.
    """

    def rate(d: float) -> float:
        state = channel_state(scenario, d)
        if require_classical_feasible and not state.classical_feasible:
            return 0.0
        return key_rate_details(state.channel_point(), scenario.intensities,
                                scenario.protocol).rate_bps

    return find_rate_cliff(rate, from_km, to_km, coarse_step_km, resolution_km)


# ---------------------------------------------------------------------------
# calibration

def _log_rate(rate_bps: float) -> float:
    return math.log(rate_bps) if rate_bps > 0.0 else -math.inf


@dataclass(frozen=True)
class CalibrationTarget:
    """Reference operating point: distance, secure key rate and QBER."""

    distance_km: float
    key_rate_bps: float
    qber: float

    def __post_init__(self):
        if self.distance_km < 0.0:
            raise ConfigError(f"target distance must be >= 0, got {self.distance_km}")
        if self.key_rate_bps <= 0.0:
            raise ConfigError(f"target rate must be > 0, got {self.key_rate_bps}")
        if not 0.0 <= self.qber <= 1.0:
            raise ConfigError(f"target QBER must be in [0, 1], got {self.qber}")


@dataclass(frozen=True)
class TargetResidual:
    """Simulated versus target values at one calibration point."""

    scenario: str
    distance_km: float
    key_rate_bps: float
    target_rate_bps: float
    qber: float
    target_qber: float

    @property
    def rate_ratio(self) -> float:
        return self.key_rate_bps / self.target_rate_bps

    @property
    def qber_delta(self) -> float:
        return self.qber - self.target_qber


ED_BOUNDS = (0.0, 0.05)
F_BOUNDS = (1.0, 1.5)
ED_STEP = 0.001
F_STEP = 0.01


@dataclass(frozen=True)
class CalibrationReport:
    """Fitted shared (misalignment error, EC efficiency) and residuals."""

    misalignment_error: float
    ec_efficiency: float
    residuals: tuple[TargetResidual, ...] = field(default=())
    objective: float = math.inf

    def __post_init__(self):
        if not ED_BOUNDS[0] <= self.misalignment_error <= ED_BOUNDS[1]:
            raise ConfigError(
                f"misalignment error {self.misalignment_error} outside "
                f"{ED_BOUNDS}"
            )
        if not F_BOUNDS[0] <= self.ec_efficiency <= F_BOUNDS[1]:
            raise ConfigError(
                f"EC efficiency {self.ec_efficiency} outside {F_BOUNDS}"
            )


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-6) -> float:
    """Deterministic golden-section minimizer on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def calibrate(scenarios: Sequence[Scenario],
              targets: Sequence[CalibrationTarget]) -> CalibrationReport:
    """Fit the shared free parameters (misalignment error e_d, EC
    efficiency f) to the reference operating points.

    Deterministic grid search (e_d step 0.001 over [0, 0.05], f step 0.01
    over [1.0, 1.5]) minimizing

        sum_i (ln R_i - ln R_target_i)^2 + ((E_i - E_target_i) / 0.005)^2,

    followed by alternating golden-section refinement of each coordinate
    within one grid cell of the best point.
    """
    if not targets:
        raise ConfigError("calibration needs at least one target")
    if len(scenarios) != len(targets):
        raise ConfigError(
            f"got {len(scenarios)} scenarios for {len(targets)} targets"
        )

    states = [channel_state(s, t.distance_km)
              for s, t in zip(scenarios, targets)]

    def objective(ed: float, f: float) -> float:
        total = 0.0
        for scen, st, tgt in zip(scenarios, states, targets):
            p = scen.protocol
            rpp, _, emu, _, _, _, _, _ = impl.key_point(
                st.eta, st.y0, scen.intensities.mu, scen.intensities.nu,
                p.background_error, ed, f, p.sifting_factor)
            rate = rpp * p.clock_hz * scen.intensities.p_mu
            if rate <= 0.0:
                return math.inf
            total += ((math.log(rate) - _log_rate(tgt.key_rate_bps)) ** 2
                      + ((emu - tgt.qber) / 0.005) ** 2)
        return total

    n_ed = int(round((ED_BOUNDS[1] - ED_BOUNDS[0]) / ED_STEP)) + 1
    n_f = int(round((F_BOUNDS[1] - F_BOUNDS[0]) / F_STEP)) + 1
    best = (math.inf, ED_BOUNDS[0], F_BOUNDS[0])
    for i in range(n_ed):
        ed = ED_BOUNDS[0] + i * ED_STEP
        for j in range(n_f):
            f = F_BOUNDS[0] + j * F_STEP
            value = objective(ed, f)
            if value < best[0]:
                best = (value, ed, f)
    if not math.isfinite(best[0]):
        raise CalibrationError(
            f"objective non-finite over the whole grid "
            f"({n_ed}x{n_f} points); the key rate is zero at every target"
        )

    _, ed, f = best
    for _ in range(3):
        ed = _golden_min(lambda x: objective(x, f),
                         max(ED_BOUNDS[0], ed - ED_STEP),
                         min(ED_BOUNDS[1], ed + ED_STEP))
        f = _golden_min(lambda x: objective(ed, x),
                        max(F_BOUNDS[0], f - F_STEP),
                        min(F_BOUNDS[1], f + F_STEP))
    refined = objective(ed, f)
    if refined > best[0]:
        _, ed, f = best
        refined = best[0]

    residuals = []
    for scen, tgt in zip(scenarios, targets):
        calibrated = apply_calibration(scen, ed, f)
        row = evaluate_at(calibrated, tgt.distance_km)
        residuals.append(TargetResidual(
            scenario=scen.name,
            distance_km=tgt.distance_km,
            key_rate_bps=row.key_rate_bps,
            target_rate_bps=tgt.key_rate_bps,
            qber=row.e_mu,
            target_qber=tgt.qber,
        ))
    return CalibrationReport(
        misalignment_error=ed,
        ec_efficiency=f,
        residuals=tuple(residuals),
        objective=refined,
    )


def apply_calibration(scenario: Scenario, misalignment_error: float,
                      ec_efficiency: float) -> Scenario:
    """Scenario copy with the calibrated free parameters applied."""
    protocol = replace(scenario.protocol,
                       misalignment_error=misalignment_error,
                       ec_efficiency=ec_efficiency)
    return replace(scenario, protocol=protocol)

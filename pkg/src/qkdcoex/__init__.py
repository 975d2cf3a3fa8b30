"""qkdcoex: decoy-state BB84 key rates coexisting with classical channels
over single-mode and few-mode fiber.

Four layers: `link` (loss/transmittance/isolation budgets), `raman`
(spontaneous Raman scattering noise and coefficient fitting), `decoy`
(vacuum+weak decoy-state bounds and secure key rates) and `scenario`
(presets, sweeps, calibration, result emission, CLI).
"""

from ._backend import backend_name
from .decoy import (ChannelPoint, DecoyIntensities, DetectorSpec,
                    DistanceResult, KeyRateBreakdown, ProtocolParams,
                    background_yield, binary_entropy, dbm_to_mw,
                    e1_upper_bound, gain_and_qber, key_rate_details,
                    max_secure_distance_km, mw_to_dbm, secure_key_rate_bps,
                    y1_lower_bound)
from .errors import (CalibrationError, ComputationError, ConfigError,
                     DegenerateFitError, DomainError, NoSecureDistanceError,
                     QkdCoexError, UndefinedBoundError)
from .link import (Band, ComponentSpec, FiberKind, FiberSpec, IsolationTable,
                   LinkPlan, Mode, MultiplexScheme, SchemeName, Side,
                   classical_min_launch_power_dbm, modal_isolation_at,
                   total_loss_db, transmittance)
from .presets import (FMF_MODAL_ISOLATION, RAMAN_CPS_PER_MW_KM,
                      REFERENCE_TARGETS, get_preset, preset_names)
from .raman import (NoiseMeasurement, RamanCoefficient,
                    coefficient_suppression, detected_count_suppression,
                    fit_raman_coefficient, noise_prob_per_pulse,
                    peak_noise_distance_km, read_measurements_csv,
                    srs_noise_rate_cps)
from .config import load_scenario
from .scenario import (CalibrationReport, CalibrationTarget, ChannelState,
                       ResultRow, Scenario, SweepSpec, TargetResidual,
                       apply_calibration, calibrate, channel_state,
                       emit_results, evaluate_at, launch_power_dbm,
                       max_secure_distance, rows_to_csv, rows_to_json,
                       run_sweep)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

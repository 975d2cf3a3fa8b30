"""Built-in scenarios for the characterized SMF / two-mode FMF testbed and
its projected upgrades.

All presets share the 625 MHz polarization-encoding decoy-state BB84
transmitter (mu/nu/vacuum = 0.4/0.2/0 at 6:1:1), a bank of four gated
InGaAs detectors, a 100 Gbps classical data channel launched at -2.60 dBm
and a -33 dBm pre-amplified classical receiver.

The fig4-* family projects upgrades onto the lp02in scheme: adaptive
(minimum) classical launch power, then ultra-low-loss fiber and couplers,
then better detectors.
"""

from __future__ import annotations

from dataclasses import replace

from .decoy import DecoyIntensities, DetectorSpec, ProtocolParams
from .errors import ConfigError
from .link import (ComponentSpec, FiberSpec, IsolationTable, LinkPlan, Mode,
                   MultiplexScheme, SchemeName, Side)
from .raman import RamanCoefficient
from .scenario import CalibrationTarget, Scenario

# Measured modal isolation (dB) of the FMF plus mode MUX/DEMUX chain;
# back-to-back is recorded as 0 km.
FMF_MODAL_ISOLATION = IsolationTable(
    lp01_in=((0.0, 23.58), (25.0, 21.73), (50.0, 19.96), (75.0, 17.17),
             (100.0, 15.75)),
    lp02_in=((0.0, 23.20), (25.0, 19.25), (50.0, 14.75), (75.0, 12.59),
             (100.0, 10.35)),
)

# Lumped detected Raman coefficients per multiplexing scheme, cps/(mW km).
RAMAN_CPS_PER_MW_KM = {
    SchemeName.SMF: 12076.0,
    SchemeName.LP01_IN: 2637.0,
    SchemeName.LP02_IN: 2655.0,
}

LAUNCH_POWER_DBM = -2.60
RECEIVER_SENSITIVITY_DBM = -33.0

# Projected upgrades: midpoints of the quoted ranges 0.16-0.17 dB/km and
# 0.36-0.49 dB, and the improved detector bank.
ULL_ATTENUATION_DB_PER_KM = 0.165
ULL_COUPLER_IL_DB = 0.425
IMPROVED_DETECTOR_EFFICIENCY = 0.20
IMPROVED_DARK_RATE_CPS = 230.0


def _smf_link(length_km: float = 0.0) -> LinkPlan:
    mux = ComponentSpec("dwdm-mux", {Mode.FUNDAMENTAL: 0.49}, Side.TRANSMITTER)
    demux = ComponentSpec("dwdm-demux", {Mode.FUNDAMENTAL: 0.36}, Side.RECEIVER)
    return LinkPlan(
        fiber=FiberSpec.smf(0.190, 0.192),
        length_km=length_km,
        scheme=MultiplexScheme.named(SchemeName.SMF),
        quantum_path_components=(mux, demux),
        classical_path_components=(mux, demux),
    )


def _fmf_link(scheme: SchemeName, length_km: float = 0.0,
              attenuation: tuple[float, float] = (0.226, 0.257),
              coupler_il: tuple[float, float, float, float] = (2.60, 3.70, 2.30, 3.20),
              ) -> LinkPlan:
    mux_lp01, mux_lp02, demux_lp01, demux_lp02 = coupler_il
    mux = ComponentSpec("mode-mux", {Mode.LP01: mux_lp01, Mode.LP02: mux_lp02},
                        Side.TRANSMITTER)
    demux = ComponentSpec("mode-demux", {Mode.LP01: demux_lp01, Mode.LP02: demux_lp02},
                          Side.RECEIVER)
    return LinkPlan(
        fiber=FiberSpec.fmf(*attenuation),
        length_km=length_km,
        scheme=MultiplexScheme.named(scheme),
        quantum_path_components=(mux, demux),
        classical_path_components=(mux, demux),
    )


def _baseline(name: str, link: LinkPlan, scheme: SchemeName) -> Scenario:
    return Scenario(
        name=name,
        link=link,
        raman=RamanCoefficient(RAMAN_CPS_PER_MW_KM[scheme], scheme),
        detector=DetectorSpec(),
        protocol=ProtocolParams(),
        intensities=DecoyIntensities(),
        classical_launch_power_dbm=LAUNCH_POWER_DBM,
        adaptive_power=False,
        receiver_sensitivity_dbm=RECEIVER_SENSITIVITY_DBM,
        isolation=None if scheme is SchemeName.SMF else FMF_MODAL_ISOLATION,
    )


def _preset_smf() -> Scenario:
    return _baseline("smf", _smf_link(), SchemeName.SMF)


def _preset_lp01in() -> Scenario:
    return _baseline("lp01in", _fmf_link(SchemeName.LP01_IN), SchemeName.LP01_IN)


def _preset_lp02in() -> Scenario:
    return _baseline("lp02in", _fmf_link(SchemeName.LP02_IN), SchemeName.LP02_IN)


def _preset_fig4_power() -> Scenario:
    base = _preset_lp02in()
    return replace(base, name="fig4-power", adaptive_power=True)


def _preset_fig4_power_fmf() -> Scenario:
    base = _preset_fig4_power()
    a = ULL_ATTENUATION_DB_PER_KM
    il = ULL_COUPLER_IL_DB
    link = _fmf_link(SchemeName.LP02_IN, attenuation=(a, a),
                     coupler_il=(il, il, il, il))
    return replace(base, name="fig4-power-fmf", link=link)


def _preset_fig4_full() -> Scenario:
    base = _preset_fig4_power_fmf()
    detector = DetectorSpec(
        efficiency=IMPROVED_DETECTOR_EFFICIENCY,
        gate_hz=base.detector.gate_hz,
        dark_count_per_gate=IMPROVED_DARK_RATE_CPS / base.detector.gate_hz,
        num_detectors=base.detector.num_detectors,
    )
    return replace(base, name="fig4-full", detector=detector)


_PRESETS = {
    "smf": _preset_smf,
    "lp01in": _preset_lp01in,
    "lp02in": _preset_lp02in,
    "fig4-power": _preset_fig4_power,
    "fig4-power-fmf": _preset_fig4_power_fmf,
    "fig4-full": _preset_fig4_full,
}

PRESET_SUMMARIES = {
    "smf": "single-mode baseline; quantum and classical share the fundamental "
           "mode through 1546.92 nm DWDMs (0.49/0.36 dB)",
    "lp01in": "two-mode FMF; classical on LP01, quantum on LP02 through mode "
              "couplers",
    "lp02in": "two-mode FMF; classical on LP02, quantum on LP01 through mode "
              "couplers",
    "fig4-power": "lp02in with adaptive minimum classical launch power",
    "fig4-power-fmf": "fig4-power plus 0.165 dB/km fiber and 0.425 dB couplers",
    "fig4-full": "fig4-power-fmf plus 20% efficiency / 230 cps dark detectors",
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def get_preset(name: str) -> Scenario:
    """Build a named preset scenario."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(_PRESETS)}"
        ) from None
    return factory()


# Reference operating points (distance, real-time secure key rate, QBER)
# used as calibration targets for the shared free parameters (misalignment
# error, error-correction efficiency).
REFERENCE_TARGETS: tuple[tuple[str, CalibrationTarget], ...] = (
    ("smf", CalibrationTarget(63.0, 2300.0, 0.040)),
    ("lp01in", CalibrationTarget(65.0, 1200.0, 0.038)),
    ("lp02in", CalibrationTarget(86.0, 1300.0, 0.037)),
)

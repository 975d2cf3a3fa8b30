"""Scenario configuration files.

Flat INI-style sections (fiber, components, classical, quantum, detector,
raman, sweep) with units embedded in the key names. Only the link geometry
and the Raman coefficient are mandatory; protocol, detector and classical
defaults match the baseline system. Unknown sections or keys are rejected
so typos fail loudly.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .decoy import DecoyIntensities, DetectorSpec, ProtocolParams
from .errors import ConfigError
from .link import (Band, ComponentSpec, FiberKind, FiberSpec, LinkPlan, Mode,
                   MultiplexScheme, Side)
from .raman import RamanCoefficient
from .scenario import Scenario, SweepSpec

_SECTIONS = ("fiber", "components", "classical", "quantum", "detector",
             "raman", "sweep")


class _Section:
    """Typed reader for one INI section that tracks key consumption."""

    def __init__(self, name: str, values: dict[str, str]):
        self.name = name
        self._values = dict(values)
        self._seen: set[str] = set()

    def _raw(self, key: str, default=None, required: bool = False):
        self._seen.add(key)
        if key in self._values:
            return self._values[key]
        if required:
            raise ConfigError(f"[{self.name}] missing required key {key!r}")
        return default

    def get_float(self, key: str, default: float | None = None,
                  required: bool = False) -> float | None:
        raw = self._raw(key, default, required)
        if raw is None or isinstance(raw, float):
            return raw
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(
                f"[{self.name}] {key} = {raw!r} is not a number"
            ) from None

    def get_int(self, key: str, default: int | None = None) -> int | None:
        raw = self._raw(key, default)
        if raw is None or isinstance(raw, int):
            return raw
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(
                f"[{self.name}] {key} = {raw!r} is not an integer"
            ) from None

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self._raw(key, default)
        if isinstance(raw, bool):
            return raw
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{self.name}] {key} = {raw!r} is not a boolean")

    def get_str(self, key: str, default: str | None = None,
                required: bool = False) -> str | None:
        return self._raw(key, default, required)

    def has(self, key: str) -> bool:
        return key in self._values

    def check_consumed(self):
        extra = set(self._values) - self._seen
        if extra:
            raise ConfigError(
                f"[{self.name}] unknown key(s): {', '.join(sorted(extra))}"
            )


def _read_ini(path: str | Path) -> dict[str, _Section]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse scenario file: {exc}") from exc
    unknown = set(parser.sections()) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    return {name: _Section(name, dict(parser[name]) if parser.has_section(name) else {})
            for name in _SECTIONS}


def _build_link(fiber: _Section, components: _Section) -> LinkPlan:
    kind_raw = fiber.get_str("kind", required=True).strip().lower()
    try:
        kind = FiberKind(kind_raw)
    except ValueError:
        raise ConfigError(f"[fiber] kind must be smf or fmf, got {kind_raw!r}") from None
    scheme_raw = fiber.get_str("scheme", required=True).strip().lower()
    try:
        scheme = MultiplexScheme.named(scheme_raw)
    except (ValueError, KeyError):
        raise ConfigError(
            f"[fiber] scheme must be smf, lp01in or lp02in, got {scheme_raw!r}"
        ) from None

    if kind is FiberKind.SMF:
        spec = FiberSpec.smf(
            fiber.get_float("attenuation_quantum_db_per_km", required=True),
            fiber.get_float("attenuation_classical_db_per_km", required=True),
        )
        mux = ComponentSpec(
            "mux", {Mode.FUNDAMENTAL: components.get_float("mux_il_db", required=True)},
            Side.TRANSMITTER)
        demux = ComponentSpec(
            "demux", {Mode.FUNDAMENTAL: components.get_float("demux_il_db", required=True)},
            Side.RECEIVER)
    else:
        spec = FiberSpec.fmf(
            fiber.get_float("attenuation_lp01_db_per_km", required=True),
            fiber.get_float("attenuation_lp02_db_per_km", required=True),
        )
        mux = ComponentSpec("mux", {
            Mode.LP01: components.get_float("mux_il_lp01_db", required=True),
            Mode.LP02: components.get_float("mux_il_lp02_db", required=True),
        }, Side.TRANSMITTER)
        demux = ComponentSpec("demux", {
            Mode.LP01: components.get_float("demux_il_lp01_db", required=True),
            Mode.LP02: components.get_float("demux_il_lp02_db", required=True),
        }, Side.RECEIVER)

    quantum_path: list[ComponentSpec] = [mux, demux]
    classical_path: list[ComponentSpec] = [mux, demux]
    q_extra = components.get_float("quantum_extra_il_db", 0.0)
    if q_extra:
        quantum_path.append(ComponentSpec(
            "quantum-extra", {scheme.quantum_mode: q_extra}, Side.TRANSMITTER))
    c_extra = components.get_float("classical_extra_il_db", 0.0)
    if c_extra:
        classical_path.append(ComponentSpec(
            "classical-extra", {scheme.classical_mode: c_extra}, Side.TRANSMITTER))

    return LinkPlan(fiber=spec, length_km=0.0, scheme=scheme,
                    quantum_path_components=tuple(quantum_path),
                    classical_path_components=tuple(classical_path))


def load_scenario(path: str | Path) -> Scenario:
    """Load and fully validate a scenario from an INI file."""
    sections = _read_ini(path)
    fiber, components = sections["fiber"], sections["components"]
    classical, quantum = sections["classical"], sections["quantum"]
    detector, raman = sections["detector"], sections["raman"]

    link = _build_link(fiber, components)

    intensities = DecoyIntensities(
        mu=quantum.get_float("mu", 0.4),
        nu=quantum.get_float("nu", 0.2),
        omega=quantum.get_float("omega", 0.0),
        p_mu=quantum.get_float("p_mu", 6.0 / 8.0),
        p_nu=quantum.get_float("p_nu", 1.0 / 8.0),
        p_omega=quantum.get_float("p_omega", 1.0 / 8.0),
    )
    protocol = ProtocolParams(
        clock_hz=quantum.get_float("clock_hz", 625e6),
        misalignment_error=quantum.get_float("misalignment_error", 0.033),
        background_error=quantum.get_float("background_error", 0.5),
        ec_efficiency=quantum.get_float("error_correction_efficiency", 1.16),
        sifting_factor=quantum.get_float("sifting_factor", 0.5),
        block_size_bits=quantum.get_int("block_size_bits", 500_000),
    )
    det = DetectorSpec(
        efficiency=detector.get_float("efficiency", 0.10),
        gate_hz=detector.get_float("gate_hz", 1.25e9),
        dark_count_per_gate=detector.get_float("dark_count_per_gate", 3.0e-7),
        num_detectors=detector.get_int("num_detectors", 4),
    )
    rho = RamanCoefficient(
        raman.get_float("coefficient_cps_per_mw_km", required=True),
        link.scheme.name,
    )
    alpha_basis_raw = raman.get_str("alpha_basis", "quantum").strip().lower()
    try:
        alpha_basis = Band(alpha_basis_raw)
    except ValueError:
        raise ConfigError(
            f"[raman] alpha_basis must be quantum or classical, got "
            f"{alpha_basis_raw!r}"
        ) from None
    noise_divisor = raman.get_str("noise_divisor", "clock").strip().lower()

    scenario = Scenario(
        name=Path(path).stem,
        link=link,
        raman=rho,
        detector=det,
        protocol=protocol,
        intensities=intensities,
        classical_launch_power_dbm=classical.get_float("launch_power_dbm", -2.60),
        adaptive_power=classical.get_bool("adaptive_power", False),
        receiver_sensitivity_dbm=classical.get_float("receiver_sensitivity_dbm", -33.0),
        raman_alpha_basis=alpha_basis,
        noise_divisor=noise_divisor,
    )

    for section in (fiber, components, classical, quantum, detector, raman):
        section.check_consumed()
    return scenario


def load_sweep(path: str | Path) -> SweepSpec | None:
    """Read the optional [sweep] section of a scenario file."""
    sweep = _read_ini(path)["sweep"]
    if not (sweep.has("from_km") or sweep.has("to_km") or sweep.has("step_km")):
        return None
    spec = SweepSpec(
        from_km=sweep.get_float("from_km", required=True),
        to_km=sweep.get_float("to_km", required=True),
        step_km=sweep.get_float("step_km", required=True),
    )
    sweep.check_consumed()
    return spec

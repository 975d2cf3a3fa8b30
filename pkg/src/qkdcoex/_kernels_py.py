"""Pure-Python scalar kernels.

These are the hot functions evaluated once per sweep point, per calibration
grid cell and per bisection step. `qkdcoex._kernels` is the compiled twin
with identical signatures and identical operation order; keep the two files
in sync (the backend equivalence tests compare them).

All functions assume arguments already validated by the public wrappers in
`qkdcoex.decoy` / `qkdcoex.raman`.
"""

from __future__ import annotations

import math

BACKEND = "python"


def h2(x: float) -> float:
    """Binary entropy in bits; 0 at both endpoints by continuity."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def db_loss_to_transmittance(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


def srs_rate(power_mw: float, rho: float, length_km: float,
             alpha_db_per_km: float) -> float:
    """Forward-scattered Raman count rate: power * rho * L, attenuated over L."""
    return power_mw * rho * length_km * 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def gain_qber(intensity: float, eta: float, y0: float,
              e0: float, ed: float) -> tuple[float, float]:
    """Gain Q and QBER E for one Poissonian intensity.

    Q = Y0 + 1 - exp(-eta*intensity); E*Q = e0*Y0 + ed*(1 - exp(-eta*intensity)).
    A dead channel (Q == 0) reports the background error e0.
    """
    signal = -math.expm1(-eta * intensity)
    q = y0 + signal
    if q > 0.0:
        e = (e0 * y0 + ed * signal) / q
    else:
        e = e0
    return q, e


def y1_lower(qmu: float, qnu: float, mu: float, nu: float,
             y0: float) -> tuple[float, int]:
    """Vacuum+weak-decoy lower bound on the single-photon yield, clamped to
    [0, 1]. Returns (value, 1 if clamping occurred else 0)."""
    denom = mu * nu - nu * nu
    raw = (mu / denom) * (
        qnu * math.exp(nu)
        - qmu * math.exp(mu) * (nu * nu) / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * y0
    )
    clamped = 0
    if raw < 0.0:
        raw = 0.0
        clamped = 1
    elif raw > 1.0:
        raw = 1.0
        clamped = 1
    return raw, clamped


def e1_upper(enu: float, qnu: float, nu: float, y1: float,
             y0: float, e0: float) -> tuple[float, int]:
    """Vacuum+weak-decoy upper bound on the single-photon error rate,
    clamped to [0, 0.5]. Returns (value, 1 if clamping occurred else 0)."""
    raw = (enu * qnu * math.exp(nu) - e0 * y0) / (y1 * nu)
    clamped = 0
    if raw < 0.0:
        raw = 0.0
        clamped = 1
    elif raw > 0.5:
        raw = 0.5
        clamped = 1
    return raw, clamped


def key_point(eta: float, y0: float, mu: float, nu: float, e0: float,
              ed: float, f_ec: float, q_sift: float):
    """Fused per-point evaluation of the asymptotic secure fraction.

    Returns (r_per_pulse, q_mu, e_mu, q_nu, e_nu, y1_lower, e1_upper, clamps)
    where r_per_pulse = max(0, q_sift * (-Qmu*f*H2(Emu) + Q1*(1 - H2(e1)))),
    before the clock and signal-emission multipliers. A vanishing yield
    bound makes the rate zero with e1 pinned at 0.5.
    """
    s_mu = -math.expm1(-eta * mu)
    qmu = y0 + s_mu
    emu = (e0 * y0 + ed * s_mu) / qmu if qmu > 0.0 else e0

    s_nu = -math.expm1(-eta * nu)
    qnu = y0 + s_nu
    enu = (e0 * y0 + ed * s_nu) / qnu if qnu > 0.0 else e0

    y1, clamps = y1_lower(qmu, qnu, mu, nu, y0)
    if y1 <= 0.0:
        return 0.0, qmu, emu, qnu, enu, y1, 0.5, clamps + 1

    e1, c = e1_upper(enu, qnu, nu, y1, y0, e0)
    clamps += c

    q1 = y1 * mu * math.exp(-mu)
    r = q_sift * (-qmu * f_ec * h2(emu) + q1 * (1.0 - h2(e1)))
    if r < 0.0:
        r = 0.0
    return r, qmu, emu, qnu, enu, y1, e1, clamps

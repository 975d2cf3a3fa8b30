# cython: language_level=3, cdivision=True
"""Compiled scalar kernels; mirror of qkdcoex._kernels_py.

Signatures, semantics and operation order are identical to the pure-Python
twin so the two backends agree to the last ulp (the extension is compiled
with -ffp-contract=off to forbid FMA fusion).
"""

from libc.math cimport exp, expm1, log2, pow

BACKEND = "compiled"


cpdef double h2(double x):
    """Binary entropy in bits; 0 at both endpoints by continuity."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * log2(x) - (1.0 - x) * log2(1.0 - x)


cpdef double db_loss_to_transmittance(double loss_db):
    return pow(10.0, -loss_db / 10.0)


cpdef double srs_rate(double power_mw, double rho, double length_km,
                      double alpha_db_per_km):
    """Forward-scattered Raman count rate: power * rho * L, attenuated over L."""
    return power_mw * rho * length_km * pow(10.0, -alpha_db_per_km * length_km / 10.0)


cpdef tuple gain_qber(double intensity, double eta, double y0,
                      double e0, double ed):
    """Gain Q and QBER E for one Poissonian intensity."""
    cdef double signal = -expm1(-eta * intensity)
    cdef double q = y0 + signal
    cdef double e
    if q > 0.0:
        e = (e0 * y0 + ed * signal) / q
    else:
        e = e0
    return q, e


cpdef tuple y1_lower(double qmu, double qnu, double mu, double nu, double y0):
    """Vacuum+weak-decoy lower bound on the single-photon yield, clamped to
    [0, 1]. Returns (value, 1 if clamping occurred else 0)."""
    cdef double denom = mu * nu - nu * nu
    cdef double raw = (mu / denom) * (
        qnu * exp(nu)
        - qmu * exp(mu) * (nu * nu) / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * y0
    )
    cdef int clamped = 0
    if raw < 0.0:
        raw = 0.0
        clamped = 1
    elif raw > 1.0:
        raw = 1.0
        clamped = 1
    return raw, clamped


cpdef tuple e1_upper(double enu, double qnu, double nu, double y1,
                     double y0, double e0):
    """Vacuum+weak-decoy upper bound on the single-photon error rate,
    clamped to [0, 0.5]. Returns (value, 1 if clamping occurred else 0)."""
    cdef double raw = (enu * qnu * exp(nu) - e0 * y0) / (y1 * nu)
    cdef int clamped = 0
    if raw < 0.0:
        raw = 0.0
        clamped = 1
    elif raw > 0.5:
        raw = 0.5
        clamped = 1
    return raw, clamped


cpdef tuple key_point(double eta, double y0, double mu, double nu, double e0,
                      double ed, double f_ec, double q_sift):
    """Fused per-point evaluation of the asymptotic secure fraction.

    Returns (r_per_pulse, q_mu, e_mu, q_nu, e_nu, y1_lower, e1_upper, clamps);
    see the pure-Python twin for the definition.
    """
    cdef double s_mu = -expm1(-eta * mu)
    cdef double qmu = y0 + s_mu
    cdef double emu = (e0 * y0 + ed * s_mu) / qmu if qmu > 0.0 else e0

    cdef double s_nu = -expm1(-eta * nu)
    cdef double qnu = y0 + s_nu
    cdef double enu = (e0 * y0 + ed * s_nu) / qnu if qnu > 0.0 else e0

    cdef double y1
    cdef int clamps, c
    y1, clamps = y1_lower(qmu, qnu, mu, nu, y0)
    if y1 <= 0.0:
        return 0.0, qmu, emu, qnu, enu, y1, 0.5, clamps + 1

    cdef double e1
    e1, c = e1_upper(enu, qnu, nu, y1, y0, e0)
    clamps += c

    cdef double q1 = y1 * mu * exp(-mu)
    cdef double r = q_sift * (-qmu * f_ec * h2(emu) + q1 * (1.0 - h2(e1)))
    if r < 0.0:
        r = 0.0
    return r, qmu, emu, qnu, enu, y1, e1, clamps

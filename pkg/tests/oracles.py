"""Independent brute-force oracles for the decoy-state analysis.

Channel model: an n-photon pulse produces a click with yield
Yn = Y0 + 1 - (1-eta)^n and contributes errors e_n*Yn = e0*Y0 +
ed*(1 - (1-eta)^n). Gains and QBERs are computed as explicit Poisson
mixtures, term by term, with no closed forms, so they check the package's
closed-form expressions from a different direction. The yields are
additive in Y0 on purpose (matching the gain model under test); they may
exceed 1 for extreme (eta, Y0), which is harmless for bound comparisons.
"""

from __future__ import annotations

import math

_FACTORIALS = [math.factorial(n) for n in range(81)]


def poisson_pmf(n: int, mean: float) -> float:
    return math.exp(-mean) * mean**n / _FACTORIALS[n]


def yield_n(n: int, eta: float, y0: float) -> float:
    return y0 + 1.0 - (1.0 - eta) ** n


def error_yield_n(n: int, eta: float, y0: float, e0: float, ed: float) -> float:
    return e0 * y0 + ed * (1.0 - (1.0 - eta) ** n)


def gain_qber(intensity: float, eta: float, y0: float, e0: float, ed: float,
              nmax: int = 60) -> tuple[float, float]:
    """Poisson-mixture gain and QBER, truncated where the tail is < 1e-18."""
    q = sum(poisson_pmf(n, intensity) * yield_n(n, eta, y0)
            for n in range(nmax))
    eq = sum(poisson_pmf(n, intensity) * error_yield_n(n, eta, y0, e0, ed)
             for n in range(nmax))
    return q, (eq / q if q > 0.0 else e0)


def true_y1(eta: float, y0: float) -> float:
    return yield_n(1, eta, y0)


def true_e1(eta: float, y0: float, e0: float, ed: float) -> float:
    y1 = true_y1(eta, y0)
    if y1 == 0.0:
        return e0
    return error_yield_n(1, eta, y0, e0, ed) / y1

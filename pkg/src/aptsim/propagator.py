"""Closed-form nonunitary propagators exp(-i H t) in all three regimes,
plus the two-qubit tensor propagator.

H^2 = gamma^2 (a^2 - 1) * I for the APT family, so the exponential closes
over {I, H} with trig, hyperbolic, or linear coefficients depending on the
regime. The PT family goes through the series oracle instead.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import expm_series, kron
from .model import AptParams, Family, Regime, classify, hamiltonian


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Real coefficients of the single-qubit propagator [[A-iB, C], [C, A+iB]].

    A^2 + B^2 - C^2 = 1 identically in every regime.
    """
    A: float
    B: float
    C: float
    regime: Regime


def coefficients(p, t):
    """(A, B, C) at time t; gamma != 1 enters as a pure time rescale."""
    if p.family is not Family.APT:
        raise ValueError("closed-form coefficients exist for the APT family only")
    tau = p.gamma * t
    regime = classify(p)
    if regime is Regime.UNBROKEN:
        w = np.sqrt(p.a * p.a - 1.0)
        return PropagatorCoefficients(
            float(np.cos(w * tau)),
            float(p.a * np.sin(w * tau) / w),
            float(np.sin(w * tau) / w),
            regime,
        )
    if regime is Regime.BROKEN:
        w = np.sqrt(1.0 - p.a * p.a)
        return PropagatorCoefficients(
            float(np.cosh(w * tau)),
            float(p.a * np.sinh(w * tau) / w),
            float(np.sinh(w * tau) / w),
            regime,
        )
    return PropagatorCoefficients(1.0, float(tau), float(tau), regime)


def coefficient_arrays(p, times):
    """Vectorized (A, B, C) over a time grid; same contract as coefficients()."""
    if p.family is not Family.APT:
        raise ValueError("closed-form coefficients exist for the APT family only")
    tau = p.gamma * np.asarray(times, dtype=float)
    regime = classify(p)
    if regime is Regime.UNBROKEN:
        w = np.sqrt(p.a * p.a - 1.0)
        return np.cos(w * tau), p.a * np.sin(w * tau) / w, np.sin(w * tau) / w
    if regime is Regime.BROKEN:
        w = np.sqrt(1.0 - p.a * p.a)
        return np.cosh(w * tau), p.a * np.sinh(w * tau) / w, np.sinh(w * tau) / w
    return np.ones_like(tau), tau, tau.copy()


def closed_form(p, t):
    """Single-qubit propagator exp(-i H t).

    APT uses the closed form; PT falls back to the series exponential.
    Agrees with expm_series of the same Hamiltonian to < 1e-10.
    """
    if p.family is Family.APT:
        co = coefficients(p, t)
        return np.array([[co.A - 1j * co.B, co.C],
                         [co.C, co.A + 1j * co.B]])
    return expm_series(hamiltonian(p), t)


def two_qubit(p1, p2, t):
    """Two-qubit propagator U1(t) (x) U2(t)."""
    return kron(closed_form(p1, t), closed_form(p2, t))

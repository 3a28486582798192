"""Concurrence of two-qubit states, plus the closed forms (value, minimum,
period) for the Bell-initial identical-evolution trajectories."""

from dataclasses import dataclass

import numpy as np

from .dynamics import InvalidStateError, validate_density_matrix
from .linalg import SIGMA_Y, kron
from .model import Family

_YY = kron(SIGMA_Y, SIGMA_Y)
_PURITY_TOL = 1e-12
_EIG_CLAMP = -1e-10


@dataclass(frozen=True)
class ConcurrenceReport:
    """Concurrence value and the spin-flip eigenvalues it came from,
    sorted descending."""
    value: float
    r_eigenvalues: tuple


def concurrence(rho, validate=True):
    """max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) over the
    eigenvalues of rho (sy x sy) rho* (sy x sy), clamped to [0, 1].

    Pure states take the 2|c0 c3 - c1 c2| shortcut: the general
    eigensolver leaves O(sqrt(eps)) noise in the square roots of the
    zero eigenvalues, which would swamp 1e-10 trajectory tolerances.
    Eigenvalues below -1e-10 mean the input was not a state, and raise.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        validate_density_matrix(rho)

    purity = float(np.real(np.trace(rho @ rho)))
    if purity >= 1.0 - _PURITY_TOL:
        _, vecs = np.linalg.eigh(rho)
        psi = vecs[:, -1]
        value = 2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2])
        value = min(max(float(value), 0.0), 1.0)
        return ConcurrenceReport(value, (value * value, 0.0, 0.0, 0.0))

    flipped = rho @ _YY @ rho.conj() @ _YY
    lams = np.sort(np.real(np.linalg.eigvals(flipped)))[::-1]
    if float(lams[-1]) < _EIG_CLAMP:
        raise InvalidStateError(
            f"spin-flip eigenvalue {lams[-1]:.3e} below the -1e-10 clamp")
    lams = np.clip(lams, 0.0, None)
    roots = np.sqrt(lams)
    value = float(roots[0] - roots[1] - roots[2] - roots[3])
    value = min(max(value, 0.0), 1.0)
    return ConcurrenceReport(value, tuple(float(x) for x in lams))


def analytic_concurrence_identical(a, t):
    """Concurrence at time t for the Bell state under identical evolution
    with a > 1: w^2 / (w^2 + 8 w s + 8 s^2), where w = a^2 - 1 and
    s = sin^2(sqrt(w) t)."""
    if a <= 1:
        raise ValueError(f"requires a > 1, got {a}")
    w = a * a - 1.0
    s = float(np.sin(np.sqrt(w) * t)) ** 2
    return w * w / (w * w + 8.0 * w * s + 8.0 * s * s)


def concurrence_period(a, family=Family.APT):
    """Oscillation period of the concurrence: pi / sqrt(a^2 - 1) for the
    APT family (a > 1), pi / sqrt(1 - a^2) for PT (0 < a < 1)."""
    if family is Family.APT:
        if a <= 1:
            raise ValueError(f"APT period requires a > 1, got {a}")
        return float(np.pi / np.sqrt(a * a - 1.0))
    if not 0 < a < 1:
        raise ValueError(f"PT period requires 0 < a < 1, got {a}")
    return float(np.pi / np.sqrt(1.0 - a * a))


def concurrence_minimum_identical(a):
    """Minimum of the identical-evolution concurrence, attained where
    sin^2 = 1: w^2 / (w^2 + 8 w + 8) with w = a^2 - 1."""
    if a <= 1:
        raise ValueError(f"requires a > 1, got {a}")
    w = a * a - 1.0
    return w * w / (w * w + 8.0 * w + 8.0)


def ep_concurrence(t):
    """Identical evolution exactly at the exceptional point:
    1 / (1 + 8 t^2 + 8 t^4). Decays polynomially and never revives."""
    if t < 0:
        raise ValueError(f"requires t >= 0, got {t}")
    t2 = float(t) * float(t)
    return 1.0 / (1.0 + 8.0 * t2 + 8.0 * t2 * t2)

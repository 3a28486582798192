"""Wave-plate operator algebra, decomposition of the nonunitary propagator
into plate strings around a loss element, and a path-level simulation of
the paired-beam-displacer circuit that realizes the loss element.

Angle conventions: all public setting angles are degrees. With the Jones
matrices below, QWP(45) HWP(theta) QWP(45) = -i * diag(-e^{-2i theta},
e^{2i theta}); the two sandwiches in a full string therefore contribute a
global factor of -1, which decompose() absorbs by adding 45 degrees to
both theta angles. The branch integer k is not assumed: candidates are
tried and the reconstruction round-trip decides.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import Family
from .propagator import closed_form, coefficients

_ROUNDTRIP_TOL = 1e-10
_BRANCH_CANDIDATES = (0, 1, -1, 2)


class PlateKind(Enum):
    HWP = "hwp"
    QWP = "qwp"


@dataclass(frozen=True)
class WavePlate:
    """A wave plate and its setting angle, normalized to [0, 180)."""
    kind: PlateKind
    angle_deg: float

    def __post_init__(self):
        object.__setattr__(self, "angle_deg", float(self.angle_deg) % 180.0)


def waveplate_matrix(plate):
    """Jones matrix of the plate at its setting angle."""
    ang = np.deg2rad(plate.angle_deg)
    if plate.kind is PlateKind.HWP:
        c2, s2 = np.cos(2.0 * ang), np.sin(2.0 * ang)
        return np.array([[c2, s2], [s2, -c2]], dtype=complex)
    c, s = np.cos(ang), np.sin(ang)
    return np.array([[c * c + 1j * s * s, s * c * (1.0 - 1j)],
                     [s * c * (1.0 - 1j), s * s + 1j * c * c]])


def hwp(angle_deg):
    return waveplate_matrix(WavePlate(PlateKind.HWP, angle_deg))


def qwp(angle_deg):
    return waveplate_matrix(WavePlate(PlateKind.QWP, angle_deg))


def loss_matrix(xi1_deg, xi2_deg):
    """Loss-dependent element [[0, sin 2 xi1], [sin 2 xi2, 0]]."""
    return np.array([[0.0, np.sin(2.0 * np.deg2rad(xi1_deg))],
                     [np.sin(2.0 * np.deg2rad(xi2_deg)), 0.0]], dtype=complex)


class DecompositionError(ArithmeticError):
    """The propagator could not be matched by any plate-string branch."""


@dataclass(frozen=True)
class DecompositionParams:
    """Plate angles, loss angles, branch, and scale realizing a propagator.

    c * reconstruct(params) equals the propagator elementwise, with
    sin(2 xi1) = lambda1 / c and sin(2 xi2) = lambda2 / c in [0, 1].
    """
    theta1_deg: float
    theta2_deg: float
    xi1_deg: float
    xi2_deg: float
    k: int
    c: float
    lambda1: float
    lambda2: float


def _first_string(theta1_deg):
    return (hwp(0.0) @ hwp(22.5) @ qwp(45.0) @ hwp(theta1_deg) @ qwp(45.0))


def _second_string(theta2_deg):
    return (qwp(45.0) @ hwp(theta2_deg) @ qwp(45.0) @ hwp(67.5))


def reconstruct(d):
    """Plate-string product: second(theta2) @ loss(xi1, xi2) @ first(theta1)."""
    return _second_string(d.theta2_deg) @ loss_matrix(d.xi1_deg, d.xi2_deg) \
        @ _first_string(d.theta1_deg)


def decompose(p, t):
    """Wave-plate and loss parameters realizing closed_form(p, t) / c.

    lambda1,2 = sqrt(A^2 + B^2) -+ C are both nonnegative because
    A^2 + B^2 = 1 + C^2; c = max(lambda1, lambda2) keeps both loss angles
    real. The smallest-|k| branch whose reconstruction reproduces the
    propagator wins.
    """
    if p.family is not Family.APT:
        raise ValueError("decomposition is defined for the APT family only")
    co = coefficients(p, t)
    mag = float(np.hypot(co.A, co.B))
    if mag + abs(co.C) == 0.0:
        raise DecompositionError("degenerate propagator: |A + iB| + |C| = 0")
    lam1 = max(mag - co.C, 0.0)
    lam2 = max(mag + co.C, 0.0)
    c = max(lam1, lam2)
    xi1 = float(np.rad2deg(0.5 * np.arcsin(min(lam1 / c, 1.0))))
    xi2 = float(np.rad2deg(0.5 * np.arcsin(min(lam2 / c, 1.0))))
    phi = float(np.arctan2(co.B, co.A))

    target = closed_form(p, t)
    best_err, best = np.inf, None
    for k in _BRANCH_CANDIDATES:
        theta1 = float(np.rad2deg((phi + k * np.pi) / 4.0 + np.pi / 4.0)) % 180.0
        theta2 = float(np.rad2deg((phi - k * np.pi) / 4.0 + np.pi / 4.0)) % 180.0
        d = DecompositionParams(theta1, theta2, xi1, xi2, k, c, lam1, lam2)
        err = float(np.max(np.abs(c * reconstruct(d) - target)))
        if err < _ROUNDTRIP_TOL:
            return d
        if err < best_err:
            best_err, best = err, d
    raise DecompositionError(
        f"no branch reproduced the propagator (best error {best_err:.3e} at k={best.k})")


@dataclass(frozen=True)
class BeamPaths:
    """Amplitudes after the second displacer. Path 2 carries the surviving
    Jones vector; the path-1 V and path-3 H components are blocked."""
    path2: np.ndarray
    lost_path1_v: complex
    lost_path3_h: complex

    @property
    def survival_probability(self):
        return float(np.real(np.vdot(self.path2, self.path2)))


def bd_circuit(state, xi1_deg, xi2_deg):
    """Send a Jones vector through displacer / per-path HWPs / displacer.

    The first displacer routes H to the lower path and V to the upper one.
    HWP(xi2) sits in the lower path, HWP(xi1) in the upper. The second
    displacer recombines the upper-path H and lower-path V components into
    path 2, so the surviving amplitude is loss_matrix(xi1, xi2) @ state.
    """
    state = np.asarray(state, dtype=complex)
    lower = state[0] * hwp(xi2_deg)[:, 0]   # H component enters the lower arm
    upper = state[1] * hwp(xi1_deg)[:, 1]   # V component enters the upper arm
    path2 = np.array([upper[0], lower[1]])
    return BeamPaths(path2=path2,
                     lost_path1_v=complex(upper[1]),
                     lost_path3_h=complex(lower[0]))

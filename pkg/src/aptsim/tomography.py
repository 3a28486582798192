"""Measurement chain: projection onto the 16 two-photon bases with Poisson
count statistics, and maximum-likelihood reconstruction of the density
matrix from the counts.

The estimate is parameterized as rho = T+ T / tr(T+ T) with T lower
triangular (16 real parameters), so positivity and unit trace hold by
construction. The fit maximizes the Poisson log-likelihood
sum_b [n_b log mu_b - mu_b], mu_b = total * <b|rho|b>, starting from
linear inversion projected onto physical states.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .dynamics import validate_density_matrix
from .linalg import kron

BASIS_LABELS = ("HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
                "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL")

_SINGLE_KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "R": np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
    "L": np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
}

# (QWP, HWP) setting angles, degrees, for each single-photon projection
_SETTINGS = {
    "H": (0.0, 0.0),
    "V": (0.0, 45.0),
    "D": (45.0, 22.5),
    "R": (0.0, 22.5),
    "L": (45.0, 0.0),
}

DEFAULT_TOTAL = 10000
DEFAULT_MAX_ITER = 100000


@dataclass(frozen=True)
class ProjectionBasis:
    label: str
    ket: np.ndarray
    settings: tuple  # ((qwp1, hwp1), (qwp2, hwp2)) in degrees


@dataclass(frozen=True)
class CountRecord:
    basis: str
    expected: float
    observed: int
    total_per_basis: int


class MleConvergenceError(ArithmeticError):
    """The likelihood optimization hit its iteration cap."""


@dataclass
class MleResult:
    rho_hat: np.ndarray
    log_likelihood: float
    iterations: int
    fidelity_vs_truth: Optional[float] = None


def basis_set():
    """The 16 projection bases in canonical order."""
    out = []
    for label in BASIS_LABELS:
        first, second = label[0], label[1]
        ket = kron(_SINGLE_KETS[first].reshape(2, 1),
                   _SINGLE_KETS[second].reshape(2, 1)).ravel()
        out.append(ProjectionBasis(label, ket,
                                   (_SETTINGS[first], _SETTINGS[second])))
    return out


def simulate_counts(rho, total=DEFAULT_TOTAL, seed=0, noiseless=False):
    """Per-basis expected and observed counts for the state rho.

    observed ~ Poisson(expected) from a generator seeded with `seed`
    (deterministic), or round(expected) in noiseless mode.
    """
    if total <= 0:
        raise ValueError(f"total must be > 0, got {total}")
    validate_density_matrix(rho)
    rng = np.random.default_rng(seed)
    records = []
    for basis in basis_set():
        expected = float(np.real(np.vdot(basis.ket, rho @ basis.ket))) * total
        expected = float(np.clip(expected, 0.0, total))
        if noiseless:
            observed = int(round(expected))
        else:
            observed = int(rng.poisson(expected))
        records.append(CountRecord(basis.label, expected, observed, int(total)))
    return records


_DIAG = np.diag_indices(4)
_TRIL = np.tril_indices(4, k=-1)


def _params_to_t(x):
    t = np.zeros((4, 4), dtype=complex)
    t[_DIAG] = x[:4]
    t[_TRIL] = x[4:10] + 1j * x[10:16]
    return t


def _t_to_params(t):
    x = np.empty(16)
    x[:4] = np.real(t[_DIAG])
    x[4:10] = np.real(t[_TRIL])
    x[10:16] = np.imag(t[_TRIL])
    return x


def _neg_log_likelihood(x, kets, observed, totals):
    t = _params_to_t(x)
    amps = t @ kets.T                      # column b is T |b>
    q = np.sum(np.abs(amps) ** 2, axis=0)  # <b| T+T |b>
    tau = float(np.sum(np.abs(t) ** 2))
    probs = np.clip(q / tau, 1e-14, None)
    mus = totals * probs
    value = -float(np.sum(observed * np.log(mus) - mus))

    coeff = observed / probs - totals      # dLL/dp_b
    weighted = (kets.T * coeff) @ kets.conj()
    grad_matrix = t @ (weighted / tau - (np.sum(coeff * q) / tau ** 2) * np.eye(4))
    grad = np.empty(16)
    grad[:4] = -2.0 * np.real(grad_matrix[_DIAG])
    grad[4:10] = -2.0 * np.real(grad_matrix[_TRIL])
    grad[10:16] = -2.0 * np.imag(grad_matrix[_TRIL])
    return value, grad


def _linear_inversion(kets, frequencies):
    """Least-squares state from frequencies, projected onto physical states."""
    design = np.einsum("bi,bj->bij", kets.conj(), kets).reshape(len(kets), 16)
    solution, *_ = np.linalg.lstsq(design, frequencies.astype(complex), rcond=None)
    rho = solution.reshape(4, 4)
    rho = (rho + rho.conj().T) / 2.0
    evals, evecs = np.linalg.eigh(rho)
    evals = np.clip(evals, 0.0, None)
    if evals.sum() <= 0.0:
        return np.eye(4, dtype=complex) / 4.0
    return (evecs * evals) @ evecs.conj().T / evals.sum()


def _t_from_state(rho, jitter=1e-6):
    # reverse Cholesky: rho = T+ T with T lower triangular
    rho = (rho + jitter * np.eye(4)) / (1.0 + 4.0 * jitter)
    flip = np.eye(4)[::-1]
    lower = np.linalg.cholesky(flip @ rho @ flip)
    return (flip @ lower @ flip).conj().T


def mle_reconstruct(counts, truth=None, improvement_tol=1e-10, patience=3,
                    max_iter=DEFAULT_MAX_ITER):
    """Maximum-likelihood state estimate from count records.

    Converged when the log-likelihood improves by less than
    improvement_tol over `patience` successive optimizer passes; raises
    MleConvergenceError if max_iter optimizer iterations pass first.
    When `truth` is given, the result carries the fidelity against it.
    """
    present = {record.basis for record in counts}
    missing = set(BASIS_LABELS) - present
    if missing:
        raise ValueError(
            f"count set is not informationally complete, missing {sorted(missing)}")
    by_label = {basis.label: basis for basis in basis_set()}
    kets = np.array([by_label[record.basis].ket for record in counts])
    observed = np.array([record.observed for record in counts], dtype=float)
    totals = np.array([record.total_per_basis for record in counts], dtype=float)
    if np.any(totals <= 0):
        raise ValueError("total_per_basis must be > 0 for every record")

    x = _t_to_params(_t_from_state(_linear_inversion(kets, observed / totals)))
    previous = -np.inf
    streak = 0
    iterations = 0
    while iterations < max_iter:
        result = minimize(
            _neg_log_likelihood, x, args=(kets, observed, totals),
            jac=True, method="L-BFGS-B",
            options={"maxiter": min(5000, max_iter - iterations),
                     "ftol": 1e-15, "gtol": 1e-12},
        )
        x = result.x
        iterations += max(int(result.nit), 1)
        log_likelihood = -float(result.fun)
        if log_likelihood - previous < improvement_tol:
            streak += 1
        else:
            streak = 0
        previous = log_likelihood
        if streak >= patience:
            break
    else:
        raise MleConvergenceError(f"no convergence within {max_iter} iterations")

    t = _params_to_t(x)
    s = t.conj().T @ t
    rho_hat = s / float(np.real(np.trace(s)))
    rho_hat = (rho_hat + rho_hat.conj().T) / 2.0
    out = MleResult(rho_hat=rho_hat, log_likelihood=previous, iterations=iterations)
    if truth is not None:
        out.fidelity_vs_truth = fidelity(truth, rho_hat)
    return out


def _psd_sqrt(m):
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


def fidelity(a, b):
    """Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1]."""
    root = _psd_sqrt(np.asarray(a, dtype=complex))
    inner = root @ np.asarray(b, dtype=complex) @ root
    evals = np.clip(np.linalg.eigvalsh((inner + inner.conj().T) / 2.0), 0.0, None)
    value = float(np.sum(np.sqrt(evals)) ** 2)
    return min(max(value, 0.0), 1.0)


def counts_to_csv(records):
    """Serialize count records as `basis,observed,total` CSV text."""
    lines = ["basis,observed,total"]
    for record in records:
        lines.append(f"{record.basis},{record.observed},{record.total_per_basis}")
    return "\n".join(lines) + "\n"


def counts_from_csv(text):
    """Parse `basis,observed,total` CSV. Expected counts are not stored in
    the file; parsed records carry NaN there."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["basis", "observed", "total"]:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    records = []
    for row in reader:
        label = row["basis"].strip()
        if label not in BASIS_LABELS:
            raise ValueError(f"unknown basis label {label!r}")
        records.append(CountRecord(label, float("nan"),
                                   int(row["observed"]), int(row["total"])))
    return records


def mle_result_to_json(result):
    """Serialize an MLE result: 16 row-major {re, im} entries plus the
    log-likelihood and iteration count."""
    entries = [{"re": float(z.real), "im": float(z.imag)}
               for z in result.rho_hat.ravel()]
    payload = {
        "rho_hat": entries,
        "log_likelihood": float(result.log_likelihood),
        "iterations": int(result.iterations),
    }
    if result.fidelity_vs_truth is not None:
        payload["fidelity_vs_truth"] = float(result.fidelity_vs_truth)
    return json.dumps(payload, indent=2, sort_keys=True)


def mle_result_from_json(text):
    payload = json.loads(text)
    entries = payload["rho_hat"]
    if len(entries) != 16:
        raise ValueError(f"expected 16 entries, got {len(entries)}")
    rho = np.array([complex(e["re"], e["im"]) for e in entries]).reshape(4, 4)
    return MleResult(rho_hat=rho,
                     log_likelihood=float(payload["log_likelihood"]),
                     iterations=int(payload["iterations"]),
                     fidelity_vs_truth=payload.get("fidelity_vs_truth"))

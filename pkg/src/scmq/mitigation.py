"""Synthetic readout noise and calibration-matrix correction.

Confusion matrices are column-stochastic: entry (m, p) is the probability
of reading basis state m after preparing basis state p. Qubit 1 is the most
significant bit of a basis-state index.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.optimize import nnls

from .errors import MitigationError, SizeError

MAX_CONDITION = 1e8


@dataclass(frozen=True)
class ReadoutNoiseModel:
    """Independent per-qubit flips: p01 = P(read 1 | 0), p10 = P(read 0 | 1)."""

    p01: tuple[float, ...]
    p10: tuple[float, ...]

    def __post_init__(self):
        if len(self.p01) != len(self.p10):
            raise SizeError("p01 and p10 must have one entry per qubit")
        for p in (*self.p01, *self.p10):
            if not 0.0 <= p < 0.5:
                raise ValueError(f"flip probability {p} outside [0, 0.5)")

    @classmethod
    def symmetric(cls, n_qubits: int, p: float) -> "ReadoutNoiseModel":
        return cls((p,) * n_qubits, (p,) * n_qubits)

    @classmethod
    def noiseless(cls, n_qubits: int) -> "ReadoutNoiseModel":
        return cls.symmetric(n_qubits, 0.0)

    @property
    def n_qubits(self) -> int:
        return len(self.p01)

    @property
    def is_noiseless(self) -> bool:
        return not any(self.p01) and not any(self.p10)

    def qubit_matrix(self, q: int) -> np.ndarray:
        a, b = self.p01[q], self.p10[q]
        return np.array([[1 - a, b], [a, 1 - b]])

    def confusion_matrix(self) -> np.ndarray:
        """Exact tensor-product confusion matrix."""
        if self.n_qubits == 0:
            return np.ones((1, 1))
        return reduce(np.kron, (self.qubit_matrix(q) for q in range(self.n_qubits)))

    def apply(self, probs: np.ndarray) -> np.ndarray:
        """Outcome distribution after readout noise, computed qubit by qubit."""
        q = self.n_qubits
        t = np.asarray(probs, dtype=float).reshape((2,) * q) if q else np.asarray(probs, dtype=float)
        for k in range(q):
            t = np.moveaxis(np.tensordot(self.qubit_matrix(k), t, axes=([1], [k])), 0, k)
        return t.reshape(-1)


def build_calibration(model: ReadoutNoiseModel, shots: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Empirical confusion matrix from ``shots`` noisy readouts per basis state."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(rng)
    dim = 1 << model.n_qubits
    if model.is_noiseless:
        return np.eye(dim)
    exact = model.confusion_matrix()
    cal = np.empty((dim, dim))
    for p in range(dim):
        col = np.clip(exact[:, p], 0.0, None)
        cal[:, p] = rng.multinomial(shots, col / col.sum()) / shots
    return cal


def check_confusion(cal: np.ndarray, tol: float = 1e-9) -> None:
    cal = np.asarray(cal)
    if cal.ndim != 2 or cal.shape[0] != cal.shape[1]:
        raise SizeError(f"confusion matrix must be square, got {cal.shape}")
    if np.any(cal < -tol) or np.any(cal > 1 + tol):
        raise ValueError("confusion matrix entries must lie in [0, 1]")
    if np.max(np.abs(cal.sum(axis=0) - 1.0)) > tol:
        raise ValueError("confusion matrix columns must sum to 1")


def correct(
    measured: np.ndarray,
    cal: np.ndarray,
    method: str = "clip",
    strict: bool = False,
) -> np.ndarray:
    """Undo readout noise: solve cal @ x = measured, then project onto probabilities.

    ``method="clip"`` clips the raw solution to [0, 1] and renormalizes;
    ``method="nnls"`` solves the non-negative least-squares problem instead.
    An ill-conditioned calibration raises :class:`MitigationError` when
    ``strict``, otherwise warns and returns the measured vector unchanged.
    """
    measured = np.asarray(measured, dtype=float)
    cal = np.asarray(cal, dtype=float)
    if cal.shape != (measured.size, measured.size):
        raise SizeError(f"calibration {cal.shape} does not match {measured.size} outcomes")
    if abs(measured.sum() - 1.0) > 1e-6:
        raise ValueError(f"measured probabilities sum to {measured.sum()}, not 1")
    cond = np.linalg.cond(cal)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        msg = f"calibration matrix condition number {cond:.3g} exceeds {MAX_CONDITION:g}"
        if strict:
            raise MitigationError(msg)
        warnings.warn(msg + "; returning uncorrected probabilities", RuntimeWarning, stacklevel=2)
        return measured.copy()
    if method == "clip":
        x = np.linalg.solve(cal, measured)
        x = np.clip(x, 0.0, 1.0)
    elif method == "nnls":
        x, _ = nnls(cal, measured)
    else:
        raise ValueError(f"unknown correction method {method!r}")
    total = x.sum()
    if total <= 0:
        return measured.copy()
    return x / total


def calibration_to_csv(cal: np.ndarray) -> str:
    dim = cal.shape[0]
    q = dim.bit_length() - 1
    buf = io.StringIO()
    buf.write("measured\\prepared," + ",".join(format(p, f"0{q}b") for p in range(dim)) + "\n")
    for m in range(dim):
        buf.write(format(m, f"0{q}b") + "," + ",".join(f"{v:.10g}" for v in cal[m]) + "\n")
    return buf.getvalue()


def calibration_from_csv(text: str) -> np.ndarray:
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    return np.array([[float(v) for v in r[1:]] for r in rows])

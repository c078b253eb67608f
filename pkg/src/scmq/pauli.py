"""Pauli-string expansion of Hermitian matrices and qubit-wise grouping.

Labels are written qubit 1 leftmost (``"ZZIX"``); qubit 1 is the leftmost
Kronecker factor, i.e. the most significant bit of a basis-state index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator

import numpy as np

from .errors import ParseError, SizeError

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
LETTERS = "IXYZ"

# Row r of _SINGLE maps the flattened 2x2 block (m00, m01, m10, m11) to
# Tr(P_r M) / 2 for P_r in I, X, Y, Z.
_SINGLE = 0.5 * np.array([
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1j, -1j, 0],
    [1, 0, 0, -1],
])

DEFAULT_CUTOFF = 1e-12


@dataclass
class PauliSum:
    """Weighted Pauli strings on ``n_qubits`` qubits, label -> real coefficient."""

    n_qubits: int
    terms: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for label in self.terms:
            _check_label(label, self.n_qubits)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.terms.items())

    @property
    def identity_label(self) -> str:
        return "I" * self.n_qubits

    @property
    def identity_coefficient(self) -> float:
        return self.terms.get(self.identity_label, 0.0)

    def to_matrix(self) -> np.ndarray:
        return reconstruct(self)

    def dumps(self) -> str:
        return "".join(f"{c:+.16e} {label}\n" for label, c in self.terms.items())

    @classmethod
    def loads(cls, text: str) -> "PauliSum":
        terms: dict[str, float] = {}
        n = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected '<coeff> <label>'")
            try:
                coeff = float(parts[0])
            except ValueError:
                raise ParseError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
            label = parts[1].upper()
            if n is None:
                n = len(label)
            if len(label) != n or set(label) - set(LETTERS):
                raise ParseError(f"line {lineno}: bad Pauli label {parts[1]!r}")
            if label in terms:
                raise ParseError(f"line {lineno}: duplicate label {label}")
            terms[label] = coeff
        if n is None:
            raise ParseError("no Pauli terms found")
        return cls(n, terms)


def _check_label(label: str, n_qubits: int) -> None:
    if len(label) != n_qubits or set(label) - set(LETTERS):
        raise ParseError(f"invalid Pauli label {label!r} for {n_qubits} qubits")


def pauli_matrix(label: str) -> np.ndarray:
    if not label:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, (PAULI[c] for c in label))


def count_y(label: str) -> int:
    return label.count("Y")


def n_qubits_for(dim: int) -> int:
    q = dim.bit_length() - 1
    if dim < 1 or 1 << q != dim:
        raise SizeError(f"matrix dimension {dim} is not a power of two")
    return q


def pauli_coefficients(H: np.ndarray) -> np.ndarray:
    """All 4**Q coefficients Tr(P H) / 2**Q as a complex array of shape (4,)*Q.

    Each qubit's (row, column) index pair is contracted with the 4x4 single
    qubit map in turn, costing O(Q 4**Q) instead of 4**Q full traces.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise SizeError(f"expected a square matrix, got shape {H.shape}")
    q = n_qubits_for(H.shape[0])
    if q == 0:
        return np.asarray(H[0, 0], dtype=complex).reshape(())
    t = H.astype(complex).reshape((2,) * (2 * q))
    # interleave to (r1, c1, r2, c2, ...) then merge each pair into one axis of 4
    t = t.transpose([a for k in range(q) for a in (k, q + k)]).reshape((4,) * q)
    for axis in range(q):
        t = np.moveaxis(np.tensordot(_SINGLE, t, axes=([1], [axis])), 0, axis)
    return t


def decompose(H: np.ndarray, cutoff: float = DEFAULT_CUTOFF) -> PauliSum:
    """Pauli expansion of a Hermitian matrix; terms with |c| <= cutoff dropped."""
    coeffs = pauli_coefficients(H)
    q = coeffs.ndim
    if np.max(np.abs(coeffs.imag), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(coeffs))):
        raise ValueError("matrix is not Hermitian: Pauli coefficients have imaginary parts")
    real = coeffs.real
    terms = {}
    for idx in itertools.product(range(4), repeat=q):
        c = float(real[idx]) if q else float(real)
        if abs(c) > cutoff:
            terms["".join(LETTERS[i] for i in idx)] = c
    return PauliSum(q, terms)


def reconstruct(psum: PauliSum) -> np.ndarray:
    dim = 1 << psum.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for label, c in psum:
        out += c * pauli_matrix(label)
    return out


@dataclass
class MeasurementGroup:
    """Terms measurable together in one tensor-product basis (X/Y/Z per qubit)."""

    members: list[str]
    basis: str

    def __len__(self) -> int:
        return len(self.members)


def qubitwise_commute(a: str, b: str) -> bool:
    return all(x == "I" or y == "I" or x == y for x, y in zip(a, b))


def group_qubitwise(psum: PauliSum) -> list[MeasurementGroup]:
    """Greedy first-fit grouping over terms sorted by descending |coefficient|.

    The all-identity term goes into the first group; estimators add its
    coefficient without measuring.
    """
    ident = psum.identity_label
    ordered = sorted(
        (label for label in psum.terms if label != ident),
        key=lambda label: (-abs(psum.terms[label]), label),
    )
    groups: list[tuple[list[str], list[str]]] = []  # (members, partial basis)
    for label in ordered:
        for members, basis in groups:
            if qubitwise_commute(label, "".join(basis)):
                members.append(label)
                for i, c in enumerate(label):
                    if c != "I":
                        basis[i] = c
                break
        else:
            groups.append(([label], list(label)))
    out = [MeasurementGroup(m, "".join(b).replace("I", "Z")) for m, b in groups]
    if ident in psum.terms:
        if out:
            out[0].members.insert(0, ident)
        else:
            out.append(MeasurementGroup([ident], "Z" * psum.n_qubits))
    return out


def grouping_is_sound(groups: Iterable[MeasurementGroup]) -> bool:
    """Exhaustive pairwise check that members share their group's basis."""
    for g in groups:
        for label in g.members:
            if any(c != "I" and c != b for c, b in zip(label, g.basis)):
                return False
        for a, b in itertools.combinations(g.members, 2):
            if not qubitwise_commute(a, b):
                return False
    return True

"""Symmetry configuration bases, qubit counts and block Hamiltonians.

A symmetry configuration fixes any subset of particle number N, spin
projection Sz and spatial irrep. The determinants carrying those quantum
numbers span one invariant block of the Hamiltonian; basis state l (0-based,
canonical order) is mapped onto the computational basis state |bin(l)>.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, DomainError, SizeError
from .fock import (
    Determinant,
    IntegralSet,
    SpinOrbitalBasis,
    build_matrix,
    build_s2_matrix,
    determinant_quantum_numbers,
)
from .pointgroup import Irrep

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetryConfiguration:
    n: int | None = None
    sz: float | None = None
    irrep: Irrep | None = None
    s: float | None = None

    def __post_init__(self):
        if self.sz is not None and (2 * self.sz) != int(2 * self.sz):
            raise ConfigurationError(f"Sz={self.sz} is not a half-integer")
        if self.s is not None:
            if self.s < 0 or (2 * self.s) != int(2 * self.s):
                raise ConfigurationError(f"S={self.s} is not a non-negative half-integer")
            if self.sz is None:
                raise ConfigurationError("S requires Sz to be set")
            if abs(self.sz) > self.s:
                raise ConfigurationError(f"|Sz|={abs(self.sz)} exceeds S={self.s}")
        if self.n is not None and self.n < 0:
            raise ConfigurationError(f"negative particle number {self.n}")

    @property
    def is_unconstrained(self) -> bool:
        return self.n is None and self.sz is None and self.irrep is None

    def describe(self) -> str:
        parts = []
        if self.n is not None:
            parts.append(f"N={self.n}")
        if self.s is not None:
            parts.append(f"S={self.s:g}")
        if self.sz is not None:
            parts.append(f"Sz={self.sz:g}")
        if self.irrep is not None:
            parts.append(f"Gamma={self.irrep.name}")
        return ", ".join(parts) or "None"

    def as_dict(self) -> dict:
        return {
            "N": self.n,
            "Sz": self.sz,
            "irrep": None if self.irrep is None else self.irrep.name,
            "S": self.s,
        }


@dataclass(frozen=True)
class ConfigurationBasis:
    config: SymmetryConfiguration
    dets: tuple[Determinant, ...]

    @property
    def rank(self) -> int:
        return len(self.dets)

    @property
    def unsatisfiable(self) -> bool:
        return not self.dets

    def __len__(self) -> int:
        return len(self.dets)

    def __iter__(self) -> Iterator[Determinant]:
        return iter(self.dets)

    def index(self, det: Determinant) -> int:
        return self.dets.index(det)


def fock_space_dimension(norb: int) -> int:
    """Number of determinants with no constraints at all (4**norb)."""
    return 4**norb


def _masks_by_popcount(norb: int) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {k: [] for k in range(norb + 1)}
    for m in range(1 << norb):
        out[m.bit_count()].append(m)
    return out


def enumerate_basis(basis: SpinOrbitalBasis, config: SymmetryConfiguration) -> ConfigurationBasis:
    """All determinants satisfying the set constraints, ascending (alpha, beta).

    S is not used for filtering; see :func:`count_spin_adapted`.
    """
    norb = basis.norb
    if config.is_unconstrained:
        raise ConfigurationError(
            f"refusing to enumerate {fock_space_dimension(norb)} determinants; "
            "use fock_space_dimension() for the unconstrained count"
        )
    if config.irrep is not None and config.irrep.group != basis.group.name:
        raise ConfigurationError(f"irrep {config.irrep.name} is not in group {basis.group.name}")

    splits: list[tuple[int, int]] = []
    for na, nb in itertools.product(range(norb + 1), repeat=2):
        if config.n is not None and na + nb != config.n:
            continue
        if config.sz is not None and na - nb != round(2 * config.sz):
            continue
        splits.append((na, nb))

    by_count = _masks_by_popcount(norb)
    irrep_of = [basis.mask_irrep(m).code for m in range(1 << norb)] if config.irrep is not None else None
    dets = []
    for na, nb in splits:
        for a in by_count[na]:
            for b in by_count[nb]:
                if irrep_of is not None and irrep_of[a] ^ irrep_of[b] != config.irrep.code:
                    continue
                dets.append(Determinant(a, b))
    dets.sort()
    if not dets:
        log.warning("constraints %s admit no determinants in %d orbitals", config.describe(), norb)
    return ConfigurationBasis(config, tuple(dets))


def qubit_count(rank: int) -> int:
    """ceil(log2(rank)); a single state needs no qubits."""
    if rank < 1:
        raise DomainError(f"rank must be >= 1, got {rank}")
    return (rank - 1).bit_length()


def count_spin_adapted(cbasis: ConfigurationBasis, s: float, norb: int, tol: float = 1e-6) -> int:
    """Dimension of the S^2 = S(S+1) eigenspace inside a configuration basis."""
    if cbasis.unsatisfiable:
        return 0
    evals = np.linalg.eigvalsh(build_s2_matrix(cbasis.dets, norb))
    return int(np.sum(np.abs(evals - s * (s + 1)) < tol))


def block_hamiltonian(ints: IntegralSet, config: SymmetryConfiguration) -> tuple[ConfigurationBasis, np.ndarray]:
    cbasis = enumerate_basis(ints.basis, config)
    if cbasis.unsatisfiable:
        raise ConfigurationError(f"no determinants satisfy {config.describe()}")
    return cbasis, build_matrix(cbasis.dets, ints)


def embed(H: np.ndarray, n_qubits: int, padding: float = 0.0) -> np.ndarray:
    """Place H in the top-left corner of a 2**n_qubits matrix.

    Unused basis states get ``padding`` on the diagonal and no coupling.
    """
    dim = 1 << n_qubits
    if H.shape[0] > dim:
        raise SizeError(f"{H.shape[0]}x{H.shape[0]} matrix does not fit in {n_qubits} qubits")
    if H.shape[0] == dim:
        return H
    out = np.zeros((dim, dim), dtype=H.dtype)
    out[: H.shape[0], : H.shape[0]] = H
    out[np.arange(H.shape[0], dim), np.arange(H.shape[0], dim)] = padding
    e0 = np.linalg.eigvalsh(H)[0]
    if e0 >= padding:
        log.warning("padding %.6g does not lie above the block ground energy %.6g", padding, e0)
    return out


def penalty_padding(H: np.ndarray) -> float:
    """A padding value safely above the spectrum: max diagonal + 1 hartree."""
    return float(np.max(np.diag(H)) + 1.0)


def exact_ground(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenpair; the first non-negligible component of the vector is positive."""
    evals, evecs = np.linalg.eigh(H)
    v = evecs[:, 0].copy()
    lead = np.flatnonzero(np.abs(v) > 1e-12)
    if lead.size and v[lead[0]] < 0:
        v = -v
    return float(evals[0]), v


def ground_overlaps(H: np.ndarray, cbasis: ConfigurationBasis | None = None) -> np.ndarray:
    """|<Phi_l|Psi_0>|^2 for each basis state of H."""
    if cbasis is not None and cbasis.rank != H.shape[0]:
        raise SizeError(f"basis has {cbasis.rank} states but H is {H.shape[0]}x{H.shape[0]}")
    _, v = exact_ground(H)
    return np.abs(v) ** 2


def basis_records(cbasis: ConfigurationBasis, basis: SpinOrbitalBasis) -> list[dict]:
    """JSON-ready listing of a configuration basis (masks in hex)."""
    width = max(1, math.ceil(basis.norb / 4))
    q = qubit_count(cbasis.rank) if cbasis.rank else 0
    rows = []
    for l, det in enumerate(cbasis.dets):
        n, sz, irrep = determinant_quantum_numbers(det, basis)
        rows.append({
            "index": l,
            "qubit_state": format(l, f"0{q}b") if q else "",
            "alpha": f"0x{det.alpha:0{width}x}",
            "beta": f"0x{det.beta:0{width}x}",
            "N": n,
            "Sz": sz,
            "irrep": irrep.name,
        })
    return rows

"""Symmetry-constrained qubit Hamiltonians and simulated variational eigensolvers."""

from .errors import ConfigurationError, DomainError, MitigationError, ParseError, ScmqError, SizeError
from .fock import Determinant, IntegralSet, build_matrix, build_s2_matrix, read_fcidump
from .pauli import PauliSum, decompose, group_qubitwise, reconstruct
from .pointgroup import D2H, Irrep, irrep_from_label
from .scm import (
    SymmetryConfiguration,
    block_hamiltonian,
    count_spin_adapted,
    embed,
    enumerate_basis,
    exact_ground,
    qubit_count,
)
from .vqe import AnsatzSpec, SpsaParams, parameter_count, prepare_state, run_vqe

__version__ = "0.1.0"

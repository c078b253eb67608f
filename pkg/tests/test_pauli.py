import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_symmetric
from oracles import brute_force_pauli
from scmq.errors import ParseError, SizeError
from scmq.pauli import (
    PauliSum,
    count_y,
    decompose,
    group_qubitwise,
    grouping_is_sound,
    pauli_coefficients,
    reconstruct,
)
from scmq.scm import block_hamiltonian, embed


def test_identity_and_diagonal():
    assert decompose(np.eye(2)).terms == {"I": 1.0}
    a, b = 0.7, -1.9
    assert decompose(np.diag([a, b])).terms == pytest.approx({"I": (a + b) / 2, "Z": (a - b) / 2})


@pytest.mark.parametrize("q", [1, 2, 3])
def test_fast_transform_matches_trace_oracle(q, rng):
    H = rng.normal(size=(2**q, 2**q)) + 1j * rng.normal(size=(2**q, 2**q))
    H = H + H.conj().T
    fast = pauli_coefficients(H).reshape(-1)
    slow = np.array(list(brute_force_pauli(H).values()))
    assert np.max(np.abs(fast - slow)) < 1e-12


def test_random_real_symmetric_selection_rule(rng):
    H = random_symmetric(rng, 16)
    psum = decompose(H)
    assert all(count_y(label) % 2 == 0 for label in psum.terms)
    assert len(psum) <= (4**4 + 2**4) // 2
    assert np.max(np.abs(reconstruct(psum) - H)) < 1e-10


def test_reconstruct_examples():
    assert not np.any(reconstruct(PauliSum(2)))
    assert np.array_equal(reconstruct(PauliSum(1, {"Z": 1.0})), np.diag([1, -1]))


def test_f2_round_trip(f2, ag_block):
    _, H = block_hamiltonian(f2, ag_block)
    E = embed(H, 4)
    psum = decompose(E)
    assert np.max(np.abs(reconstruct(psum) - E)) < 1e-10
    assert len(psum) <= 136
    assert all(count_y(label) % 2 == 0 for label in psum.terms)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_parseval(q, seed):
    H = random_symmetric(np.random.default_rng(seed), 2**q)
    psum = decompose(H, cutoff=0.0)
    lhs = sum(c * c for _, c in psum) * 2**q
    assert lhs == pytest.approx(np.sum(H * H), rel=1e-9)


def test_non_power_of_two():
    with pytest.raises(SizeError):
        decompose(np.eye(3))


def test_serialization_round_trip(rng):
    psum = decompose(random_symmetric(rng, 8))
    back = PauliSum.loads(psum.dumps())
    assert back.n_qubits == 3 and back.terms == psum.terms
    with pytest.raises(ParseError):
        PauliSum.loads("1.0 XQ\n")
    with pytest.raises(ParseError):
        PauliSum.loads("1.0 XZ\n2.0 XZ\n")


def test_grouping_examples():
    groups = group_qubitwise(PauliSum(4, {"ZIII": 1.0, "ZZII": 0.5}))
    assert len(groups) == 1 and groups[0].basis == "ZZZZ"
    assert len(group_qubitwise(PauliSum(4, {"XIII": 1.0, "ZIII": 0.5}))) == 2


def test_grouping_places_identity_first():
    groups = group_qubitwise(PauliSum(2, {"II": -3.0, "XX": 0.1, "ZZ": 0.2}))
    assert groups[0].members[0] == "II"
    assert group_qubitwise(PauliSum(2, {"II": 1.0}))[0].members == ["II"]


def test_f2_grouping(f2, ag_block):
    _, H = block_hamiltonian(f2, ag_block)
    psum = decompose(embed(H, 4))
    groups = group_qubitwise(psum)
    assert grouping_is_sound(groups)
    members = [m for g in groups for m in g.members]
    assert sorted(members) == sorted(psum.terms)
    assert len(groups) <= 60

import io
import itertools

import numpy as np
import pytest

from oracles import annihilators, fock_hamiltonian, fock_s2, random_integrals
from scmq.errors import ParseError, SizeError
from scmq.fock import (
    Determinant,
    SpinOrbitalBasis,
    build_matrix,
    build_s2_matrix,
    determinant_quantum_numbers,
    parse_fcidump,
    read_fcidump,
    slater_condon_element,
)
from scmq.pointgroup import D2H, irrep_from_label
from scmq.scm import enumerate_basis, SymmetryConfiguration

MINIMAL = """ &FCI NORB=1,NELEC=2,MS2=0,
  ORBSYM=1,
  ISYM=1,
 &END
  0.75 1 1 1 1
 -1.25 1 1 0 0
  0.5  0 0 0 0
"""


def all_dets(norb):
    return [Determinant(a, b) for a in range(1 << norb) for b in range(1 << norb)]


def test_parse_minimal():
    ints = parse_fcidump(MINIMAL)
    assert ints.norb == 1 and ints.nelec == 2 and ints.ms2 == 0
    assert ints.h[0, 0] == -1.25
    assert ints.g[0, 0, 0, 0] == 0.75
    assert ints.constant == 0.5


def test_parse_accepts_stream_and_fortran_exponents():
    ints = parse_fcidump(io.StringIO(MINIMAL.replace("0.75", "7.5D-01")))
    assert ints.g[0, 0, 0, 0] == 0.75


@pytest.mark.parametrize(
    "text,match",
    [
        (MINIMAL.replace("  ORBSYM=1,\n", ""), "ORBSYM"),
        (MINIMAL.replace("NORB=1,", ""), "NORB"),
        (MINIMAL.replace("-1.25 1 1 0 0", "-1.25 2 1 0 0"), "line 6"),
        (MINIMAL.replace("-1.25", "-1.2x5"), "line 6"),
        ("junk\n" + MINIMAL, "line 1"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_fcidump(text)


def test_parsed_integrals_have_permutational_symmetry(f2):
    g = f2.g
    assert np.allclose(f2.h, f2.h.T, atol=1e-12)
    for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
        assert np.max(np.abs(g - g.transpose(perm))) < 1e-12


def test_quantum_numbers_examples(f2):
    basis = f2.basis
    assert determinant_quantum_numbers(Determinant(0, 0), basis) == (0, 0.0, irrep_from_label("Ag"))
    # orbital 1 (0-based) is B1u in the F2 fixture
    assert determinant_quantum_numbers(Determinant(0b10, 0), basis) == (1, 0.5, irrep_from_label("B1u"))
    # alpha and beta holes in the B2u orbital (index 4)
    full = (1 << 8) - 1
    hole = full ^ (1 << 4)
    assert determinant_quantum_numbers(Determinant(hole, hole), basis) == (14, 0.0, irrep_from_label("Ag"))


def test_closed_shell_diagonal():
    ints = parse_fcidump(MINIMAL)
    e = slater_condon_element(Determinant(1, 1), Determinant(1, 1), ints)
    assert e == pytest.approx(0.5 + 2 * -1.25 + 0.75, abs=1e-14)


def test_triple_excitation_is_zero(rng):
    ints = random_integrals(rng, 3)
    assert slater_condon_element(Determinant(0b111, 0), Determinant(0, 0b111), ints) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_slater_condon_matches_second_quantization(seed):
    rng = np.random.default_rng(seed)
    ints = random_integrals(rng, 3)
    dets = all_dets(3)
    H = build_matrix(dets, ints)
    F, _ = fock_hamiltonian(ints)
    idx = [d.spin_orbital_mask(3) for d in dets]
    assert np.max(np.abs(H - F[np.ix_(idx, idx)])) < 1e-10


def test_h2_fixture_matches_second_quantization(h2, reference):
    dets = all_dets(2)
    H = build_matrix(dets, h2)
    F, _ = fock_hamiltonian(h2)
    idx = [d.spin_orbital_mask(2) for d in dets]
    assert np.max(np.abs(H - F[np.ix_(idx, idx)])) < 1e-10
    # lowest two-electron energy from the full Fock-space operator
    a = annihilators(4)
    N = sum(x.T @ x for x in a)
    two = np.flatnonzero(np.isclose(np.diag(N), 2))
    e_fock = np.linalg.eigvalsh(F[np.ix_(two, two)])[0]
    assert e_fock == pytest.approx(reference["h2"]["fci"], abs=1e-8)


def test_build_matrix_symmetric_and_errors(f2, ag_block):
    dets = enumerate_basis(f2.basis, ag_block).dets
    H = build_matrix(dets, f2)
    assert H.shape == (12, 12)
    assert np.max(np.abs(H - H.T)) < 1e-12
    one = build_matrix(dets[:1], f2)
    assert one[0, 0] == pytest.approx(slater_condon_element(dets[0], dets[0], f2))
    with pytest.raises(SizeError):
        build_matrix([], f2)


def test_s2_small_cases():
    assert build_s2_matrix([Determinant(1, 1)], 1)[0, 0] == 0.0
    assert build_s2_matrix([Determinant(1, 0)], 1)[0, 0] == pytest.approx(0.75)


@pytest.mark.parametrize("norb", [2, 3])
def test_s2_matches_second_quantization(norb):
    dets = all_dets(norb)
    S2 = build_s2_matrix(dets, norb)
    idx = [d.spin_orbital_mask(norb) for d in dets]
    assert np.max(np.abs(S2 - fock_s2(norb)[np.ix_(idx, idx)])) < 1e-12


def test_s2_spectrum_and_commutation(f2, ag_block):
    dets = enumerate_basis(f2.basis, ag_block).dets
    S2 = build_s2_matrix(dets, 8)
    H = build_matrix(dets, f2)
    assert np.max(np.abs(S2 @ H - H @ S2)) < 1e-8
    evals = np.linalg.eigvalsh(S2)
    s = (-1 + np.sqrt(1 + 4 * evals)) / 2
    assert np.max(np.abs(2 * s - np.round(2 * s))) < 1e-8
    assert int(np.sum(np.abs(evals) < 1e-8)) == 10


def test_s2_commutes_on_sz_block(f2):
    dets = enumerate_basis(f2.basis, SymmetryConfiguration(n=14, sz=0)).dets
    S2 = build_s2_matrix(dets, 8)
    H = build_matrix(dets, f2)
    assert np.max(np.abs(S2 @ H - H @ S2)) < 1e-8


def test_basis_rejects_wrong_irrep_count():
    with pytest.raises(SizeError):
        SpinOrbitalBasis(2, (D2H.identity,))

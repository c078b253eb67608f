import math

import numpy as np
import pytest

from conftest import random_symmetric
from scmq.errors import ConfigurationError, SizeError
from scmq.pauli import PauliSum, decompose, group_qubitwise
from scmq.scm import exact_ground
from scmq.vqe import (
    AnsatzSpec,
    EnergyEstimator,
    IterationRecord,
    ShotConfig,
    SpsaParams,
    apply_1q,
    apply_cnot,
    expectation_exact,
    fidelity,
    multistart_vqe,
    parameter_count,
    prepare_state,
    run_vqe,
    rx,
    ry,
    rz,
    sample_energy,
    spsa_minimize,
    y_to_zxz,
)


@pytest.mark.parametrize(
    "q,d,scheme,n", [(4, 1, "Y", 8), (4, 1, "ZXZ", 20), (4, 0, "Y", 4), (3, 2, "ZXZ", 24)]
)
def test_parameter_count(q, d, scheme, n):
    assert parameter_count(AnsatzSpec(q, d, scheme)) == n


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        AnsatzSpec(2, 1, "XY")
    with pytest.raises(ConfigurationError):
        AnsatzSpec(2, 1, "Y", ((0, 2),))
    assert AnsatzSpec(4).entangler == ((0, 1), (1, 2), (2, 3))


def test_rotation_conventions():
    for gate, pauli in ((rx, [[0, 1], [1, 0]]), (ry, [[0, -1j], [1j, 0]]), (rz, [[1, 0], [0, -1]])):
        t = 0.37
        expected = math.cos(t / 2) * np.eye(2) - 1j * math.sin(t / 2) * np.array(pauli)
        assert np.allclose(gate(t), expected)


def gate_by_gate(spec, theta):
    """Reference circuit applying one gate at a time to a (2,)*Q tensor."""
    psi = np.zeros((2,) * spec.n_qubits, dtype=complex)
    psi[(0,) * spec.n_qubits] = 1
    pos = 0
    for layer in range(spec.depth + 1):
        if layer:
            for c, t in spec.entangler:
                psi = apply_cnot(psi, c, t)
        for q in range(spec.n_qubits):
            if spec.scheme == "Y":
                g = ry(theta[pos])
                pos += 1
            elif layer == 0:
                g = rz(theta[pos]) @ rx(theta[pos + 1])
                pos += 2
            else:
                g = rz(theta[pos]) @ rx(theta[pos + 1]) @ rz(theta[pos + 2])
                pos += 3
            psi = apply_1q(psi, g, q)
    return psi.reshape(-1)


@pytest.mark.parametrize("scheme", ["Y", "ZXZ"])
@pytest.mark.parametrize("entangler", [None, ((2, 0), (1, 3), (0, 1))])
def test_prepare_state_matches_gate_by_gate(scheme, entangler, rng):
    spec = AnsatzSpec(4, 2, scheme, entangler)
    theta = rng.uniform(-np.pi, np.pi, spec.n_params)
    assert np.max(np.abs(prepare_state(spec, theta) - gate_by_gate(spec, theta))) < 1e-12


def test_prepare_state_examples():
    spec = AnsatzSpec(3, 2, "ZXZ")
    psi = prepare_state(spec, np.zeros(spec.n_params))
    assert psi[0] == 1 and np.count_nonzero(psi) == 1
    one = prepare_state(AnsatzSpec(1, 0, "Y"), [np.pi])
    assert fidelity(one, np.array([0, 1])) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        prepare_state(spec, np.zeros(3))


def test_y_scheme_is_real_and_normalized(rng):
    spec = AnsatzSpec(2, 1, "Y")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    assert np.max(np.abs(psi.imag)) < 1e-12
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)


def test_cnot_truth_table():
    for bits in range(4):
        psi = np.zeros((2, 2), dtype=complex)
        psi[bits >> 1, bits & 1] = 1
        out = apply_cnot(psi, 0, 1)
        c, t = bits >> 1, bits & 1
        assert out[c, t ^ c] == 1


@pytest.mark.parametrize("d", [0, 1, 3])
def test_zxz_contains_y(d, rng):
    spec = AnsatzSpec(4, d, "Y")
    theta = rng.uniform(-np.pi, np.pi, spec.n_params)
    zspec, ztheta = y_to_zxz(spec, theta)
    assert fidelity(prepare_state(spec, theta), prepare_state(zspec, ztheta)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_examples(rng):
    assert expectation_exact(np.array([1, 0], dtype=complex), PauliSum(1, {"Z": 1.0})) == 1.0
    spec = AnsatzSpec(3, 1, "ZXZ")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    assert expectation_exact(psi, PauliSum(3, {"III": -2.5})) == pytest.approx(-2.5)
    H = random_symmetric(rng, 8)
    assert expectation_exact(psi, decompose(H)) == pytest.approx(np.vdot(psi, H @ psi).real, abs=1e-12)
    with pytest.raises(SizeError):
        expectation_exact(psi, PauliSum(2, {"ZZ": 1.0}))


def test_variational_bound(rng):
    H = random_symmetric(rng, 16)
    psum = decompose(H)
    e0, _ = exact_ground(H)
    for scheme in ("Y", "ZXZ"):
        spec = AnsatzSpec(4, 2, scheme)
        for _ in range(50):
            psi = prepare_state(spec, rng.uniform(-np.pi, np.pi, spec.n_params))
            assert expectation_exact(psi, psum) >= e0 - 1e-9


def test_sampling_single_term():
    psi = np.zeros(16, dtype=complex)
    psi[0] = 1
    psum = PauliSum(4, {"ZIII": 1.0})
    groups = group_qubitwise(psum)
    assert groups[0].basis == "ZZZZ"
    assert sample_energy(psi, psum, groups, 1024, seed=0) == 1.0


def test_sampling_within_binomial_bound(rng):
    spec = AnsatzSpec(4, 1, "Y")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    psum = PauliSum(4, {"ZIII": 1.0})
    exact = expectation_exact(psi, psum)
    for seed in range(20):
        assert abs(sample_energy(psi, psum, None, 1024, seed=seed) - exact) < 4 / math.sqrt(1024)


def test_identity_only_sum_is_exact():
    psi = np.full(4, 0.5, dtype=complex)
    assert sample_energy(psi, PauliSum(2, {"II": -7.25}), None, 1, seed=3) == -7.25


def test_basis_rotations_measure_x_and_y(rng):
    spec = AnsatzSpec(2, 1, "ZXZ")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    est = EnergyEstimator(PauliSum(2, {"XY": 1.0, "YI": 0.5, "IX": -0.3}))
    exact = expectation_exact(psi, est.psum)
    got = np.mean([est(psi, 4096, np.random.default_rng(s)) for s in range(50)])
    assert got == pytest.approx(exact, abs=0.02)


def test_unbiased_one_shot_estimates(rng):
    spec = AnsatzSpec(3, 1, "ZXZ")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    psum = PauliSum(3, {"XZY": 1.0})
    exact = expectation_exact(psi, psum)
    est = EnergyEstimator(psum)
    gen = np.random.default_rng(99)
    samples = np.array([est(psi, 1, gen) for _ in range(10_000)])
    stderr = samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(samples.mean() - exact) < 5 * stderr


def test_variance_scales_inversely_with_shots(rng):
    spec = AnsatzSpec(4, 1, "Y")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    psum = decompose(random_symmetric(rng, 16))
    est = EnergyEstimator(psum)
    shots = np.array([256, 1024, 4096])
    var = [np.var([est(psi, int(n), np.random.default_rng(s)) for s in range(400)], ddof=1) for n in shots]
    slope = np.polyfit(np.log(shots), np.log(var), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.15)


def test_estimator_independent_of_group_order(rng):
    spec = AnsatzSpec(3, 1, "Y")
    psi = prepare_state(spec, rng.normal(size=spec.n_params))
    psum = decompose(random_symmetric(rng, 8))
    a = EnergyEstimator(psum)(psi, 512, np.random.default_rng(5))
    b = EnergyEstimator(psum)(psi, 512, np.random.default_rng(5))
    assert a == b


def test_gain_sequences():
    p = SpsaParams()
    assert p.a_k(0) == pytest.approx(1.2 / 21**0.602)
    assert p.c_k(0) == pytest.approx(0.06)
    assert p.a_k(9) == pytest.approx(1.2 / 30**0.602)
    assert p.c_k(9) == pytest.approx(0.06 / 10**0.101)
    with pytest.raises(ConfigurationError):
        SpsaParams(alpha=1.5)


def reference_spsa(f, theta, p):
    """Textbook recursion written out independently."""
    rng = np.random.default_rng(p.seed)
    theta = np.array(theta, dtype=float)
    for k in range(p.iterations):
        ak = p.a / (k + 1 + p.A) ** p.alpha
        ck = p.c / (k + 1) ** p.gamma
        delta = rng.choice((-1.0, 1.0), size=theta.size)
        g = (f(theta + ck * delta) - f(theta - ck * delta)) / (2 * ck * delta)
        theta = theta - ak * g
    return theta


def test_spsa_quadratic():
    f = lambda t: float(np.sum(t**2))
    theta0 = np.ones(4) / 2
    p = SpsaParams(iterations=200, seed=7)
    trace = spsa_minimize(f, theta0, p, window=25)
    assert np.linalg.norm(trace.theta) < 0.1
    assert np.allclose(trace.theta, reference_spsa(f, theta0, p), atol=1e-14)
    assert len(trace.records) == 200
    assert len(trace.window_energies) == 25
    assert trace.mean == pytest.approx(np.mean([r.f_current for r in trace.records[-25:]]))


def test_spsa_window_bookkeeping():
    calls = []
    trace = spsa_minimize(lambda t: float(t @ t), np.ones(2), SpsaParams(iterations=10), window=3,
                          evaluate=lambda t: calls.append(1) or 0.0, callback=lambda k: None)
    assert len(calls) == 3 and [r.f_current is not None for r in trace.records][-4:] == [False, True, True, True]
    with pytest.raises(ValueError):
        spsa_minimize(lambda t: 0.0, np.ones(2), SpsaParams(iterations=2), window=3)
    assert isinstance(trace.records[0], IterationRecord)


def test_run_vqe_deterministic(rng):
    psum = decompose(random_symmetric(rng, 4))
    spec = AnsatzSpec(2, 1, "Y")
    cfg = ShotConfig(perturbed_shots=64, window_shots=128, window=5)
    a = run_vqe(psum, spec, SpsaParams(iterations=20, seed=3), cfg)
    b = run_vqe(psum, spec, SpsaParams(iterations=20, seed=3), cfg)
    assert a.to_records() == b.to_records()
    assert len(a.window_energies) == 5
    assert a.mean == pytest.approx(a.window_energies.mean())


def test_multistart_single_start_equals_run_vqe(rng):
    psum = decompose(random_symmetric(rng, 8))
    spec = AnsatzSpec(3, 1, "Y")
    params = SpsaParams(iterations=40, seed=5)
    plain = run_vqe(psum, spec, params, ShotConfig(mode="exact"))
    multi = multistart_vqe(psum, spec, params, ShotConfig(mode="exact"))
    assert plain.to_records() == multi.to_records()


def test_multistart_keeps_lowest_and_is_deterministic(rng):
    psum = decompose(random_symmetric(rng, 8))
    spec = AnsatzSpec(3, 1, "Y")
    params = SpsaParams(iterations=40, seed=5)
    exact = ShotConfig(mode="exact", window=5)
    best = multistart_vqe(psum, spec, params, exact, starts=4, rounds=2)
    again = multistart_vqe(psum, spec, params, exact, starts=4, rounds=2)
    assert best.to_records() == again.to_records()
    single = multistart_vqe(psum, spec, params, exact, rounds=2)
    assert best.mean <= single.mean
    # a good explicit starting point is honoured
    warm = multistart_vqe(psum, spec, params, exact, initial=[best.theta])
    assert warm.mean <= best.mean + 1e-6
    with pytest.raises(ConfigurationError):
        multistart_vqe(psum, spec, params, exact, starts=0)
    with pytest.raises(ValueError):
        multistart_vqe(psum, spec, params, exact, initial=[[0.0]])

"""Hardware-efficient ansatz simulation, energy estimation and SPSA.

Statevectors use the same qubit order as Pauli labels: qubit 0 is the
leftmost tensor factor (most significant bit). Rotations follow
R_a(theta) = exp(-i theta sigma_a / 2).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, SizeError
from .mitigation import ReadoutNoiseModel, build_calibration, correct
from .pauli import MeasurementGroup, PauliSum, group_qubitwise

log = logging.getLogger(__name__)

SCHEMES = ("Y", "ZXZ")


def linear_chain(n_qubits: int) -> tuple[tuple[int, int], ...]:
    return tuple((q, q + 1) for q in range(n_qubits - 1))


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    depth: int = 1
    scheme: str = "Y"
    entangler: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown rotation scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.depth < 0:
            raise ConfigurationError("depth must be >= 0")
        if self.entangler is None:
            object.__setattr__(self, "entangler", linear_chain(self.n_qubits))
        pairs = tuple(tuple(p) for p in self.entangler)
        for c, t in pairs:
            if not (0 <= c < self.n_qubits and 0 <= t < self.n_qubits) or c == t:
                raise ConfigurationError(f"invalid CNOT pair ({c}, {t}) for {self.n_qubits} qubits")
        object.__setattr__(self, "entangler", pairs)

    @property
    def n_params(self) -> int:
        return parameter_count(self)


def parameter_count(spec: AnsatzSpec) -> int:
    """(d+1)Q for Y rotations, (3d+2)Q for Rz Rx Rz (first Rz dropped)."""
    if spec.scheme == "Y":
        return (spec.depth + 1) * spec.n_qubits
    return (3 * spec.depth + 2) * spec.n_qubits


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S_DAG = np.array([[1, 0], [0, -1j]])


def apply_1q(psi: np.ndarray, gate: np.ndarray, q: int) -> np.ndarray:
    """psi has shape (2,)*Q."""
    return np.moveaxis(np.tensordot(gate, psi, axes=([1], [q])), 0, q)


def apply_cnot(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    psi = psi.copy()
    idx = [slice(None)] * psi.ndim
    idx[control] = 1
    sub = psi[tuple(idx)]
    t = target if target < control else target - 1
    psi[tuple(idx)] = np.flip(sub, axis=t)
    return psi


def _ry_stack(t: np.ndarray) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    out = np.empty(t.shape + (2, 2))
    out[..., 0, 0] = out[..., 1, 1] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    return out


def _rx_stack(t: np.ndarray) -> np.ndarray:
    c, s = np.cos(t / 2), -1j * np.sin(t / 2)
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = out[..., 1, 1] = c
    out[..., 0, 1] = out[..., 1, 0] = s
    return out


def _rz_stack(t: np.ndarray) -> np.ndarray:
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(-0.5j * t)
    out[..., 1, 1] = np.exp(0.5j * t)
    return out


def _layer_gates(theta, pos, spec, first):
    """Stacked (Q, 2, 2) single-qubit gates for one rotation layer."""
    q = spec.n_qubits
    if spec.scheme == "Y":
        return _ry_stack(theta[pos: pos + q]), pos + q
    if first:
        # U = Rz(t1) Rx(t2) [Rz(t3) dropped on |0>]
        t = theta[pos: pos + 2 * q].reshape(q, 2)
        return _rz_stack(t[:, 0]) @ _rx_stack(t[:, 1]), pos + 2 * q
    t = theta[pos: pos + 3 * q].reshape(q, 3)
    return _rz_stack(t[:, 0]) @ _rx_stack(t[:, 1]) @ _rz_stack(t[:, 2]), pos + 3 * q


@lru_cache(maxsize=64)
def entangler_permutation(n_qubits: int, pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Index map p with (CNOT block |psi>)[i] = psi[p[i]], CNOTs applied in order."""
    perm = np.arange(1 << n_qubits)
    for c, t in pairs:
        cbit, tbit = 1 << (n_qubits - 1 - c), 1 << (n_qubits - 1 - t)
        idx = np.arange(1 << n_qubits)
        src = np.where(idx & cbit, idx ^ tbit, idx)
        perm = perm[src]
    return perm


def _apply_layer(psi: np.ndarray, gates: np.ndarray) -> np.ndarray:
    q = len(gates)
    for k in range(q):
        psi = (gates[k] @ psi.reshape(1 << k, 2, -1)).reshape(-1)
    return psi


def prepare_state(spec: AnsatzSpec, theta: Sequence[float]) -> np.ndarray:
    """Trial state from |0...0>: rotations, then ``depth`` x (CNOTs, rotations)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.n_params,):
        raise ValueError(f"expected {spec.n_params} parameters, got {theta.size}")
    q = spec.n_qubits
    psi = np.zeros(1 << q, dtype=complex)
    psi[0] = 1.0
    gates, pos = _layer_gates(theta, 0, spec, first=True)
    psi = _apply_layer(psi, gates)
    perm = entangler_permutation(q, spec.entangler)
    for _ in range(spec.depth):
        psi = psi[perm]
        gates, pos = _layer_gates(theta, pos, spec, first=False)
        psi = _apply_layer(psi, gates)
    return psi


def y_to_zxz(spec: AnsatzSpec, theta: Sequence[float]) -> tuple[AnsatzSpec, np.ndarray]:
    """ZXZ parameters reproducing a Y-scheme state up to global phase.

    Ry(t) = Rz(pi/2) Rx(t) Rz(-pi/2); on the first layer the trailing Rz acts
    on |0> and only contributes a phase.
    """
    if spec.scheme != "Y":
        raise ConfigurationError("input spec must use the Y scheme")
    out_spec = AnsatzSpec(spec.n_qubits, spec.depth, "ZXZ", spec.entangler)
    theta = np.asarray(theta, dtype=float)
    out = []
    for layer in range(spec.depth + 1):
        for q in range(spec.n_qubits):
            t = theta[layer * spec.n_qubits + q]
            out.extend([math.pi / 2, t] if layer == 0 else [math.pi / 2, t, -math.pi / 2])
    return out_spec, np.array(out)


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    return float(abs(np.vdot(u, v)) ** 2)


def apply_pauli(label: str, psi: np.ndarray) -> np.ndarray:
    q = len(label)
    t = psi.reshape((2,) * q) if q else psi
    for k, c in enumerate(label):
        if c == "X":
            t = np.flip(t, axis=k)
        elif c == "Y":
            t = np.flip(t, axis=k) * _axis_sign(q, k, (-1j, 1j))
        elif c == "Z":
            t = t * _axis_sign(q, k, (1, -1))
    return t.reshape(-1)


def _axis_sign(q, k, values):
    shape = [1] * q
    shape[k] = 2
    return np.array(values).reshape(shape)


def expectation_exact(state: np.ndarray, psum: PauliSum) -> float:
    """sum_P c_P <state|P|state>."""
    if state.size != 1 << psum.n_qubits:
        raise SizeError(f"state of size {state.size} does not match {psum.n_qubits} qubits")
    total = 0j
    for label, c in psum:
        total += c * np.vdot(state, apply_pauli(label, state))
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise ValueError(f"expectation has imaginary part {total.imag:.3g}")
    return float(total.real)


def _parities(member: str, n_qubits: int) -> np.ndarray:
    """(-1)^(sum of measured bits on the member's support) for every outcome."""
    outcomes = np.arange(1 << n_qubits)
    mask = sum(1 << (n_qubits - 1 - k) for k, c in enumerate(member) if c != "I")
    bits = outcomes & mask
    par = np.zeros_like(bits)
    while np.any(bits):
        par ^= bits & 1
        bits >>= 1
    return 1.0 - 2.0 * par


def rotate_to_basis(psi: np.ndarray, basis: str) -> np.ndarray:
    t = psi.reshape((2,) * len(basis))
    for k, c in enumerate(basis):
        if c == "X":
            t = apply_1q(t, HADAMARD, k)
        elif c == "Y":
            t = apply_1q(t, HADAMARD @ S_DAG, k)
    return t.reshape(-1)


class EnergyEstimator:
    """Shot-sampled energy estimates of a PauliSum over measurement groups.

    Each call draws a base seed from ``rng``; group g then samples with
    ``default_rng([base, g])`` so results do not depend on evaluation order.
    """

    def __init__(self, psum: PauliSum, groups: list[MeasurementGroup] | None = None):
        self.psum = psum
        self.groups = group_qubitwise(psum) if groups is None else groups
        q = psum.n_qubits
        ident = psum.identity_label
        self._weights = []
        for g in self.groups:
            labels = [m for m in g.members if m != ident]
            if labels:
                par = np.array([_parities(m, q) for m in labels])
                coeffs = np.array([psum.terms[m] for m in labels])
                self._weights.append(coeffs @ par)
            else:
                self._weights.append(None)

    def group_probabilities(self, state: np.ndarray) -> list[np.ndarray]:
        return [np.abs(rotate_to_basis(state, g.basis)) ** 2 for g in self.groups]

    def __call__(
        self,
        state: np.ndarray,
        shots: int,
        rng: np.random.Generator,
        noise: ReadoutNoiseModel | None = None,
        calibration: np.ndarray | None = None,
        method: str = "clip",
    ) -> float:
        if shots < 1:
            raise ValueError("shots must be >= 1")
        base = int(rng.integers(2**63))
        energy = self.psum.identity_coefficient
        for g, (w, probs) in enumerate(zip(self._weights, self.group_probabilities(state))):
            if w is None:
                continue
            if noise is not None:
                probs = noise.apply(probs)
            probs = np.clip(probs, 0.0, None)
            counts = np.random.default_rng([base, g]).multinomial(shots, probs / probs.sum())
            freq = counts / shots
            if calibration is not None:
                freq = correct(freq, calibration, method=method)
            energy += float(w @ freq)
        return energy


def sample_energy(
    state: np.ndarray,
    psum: PauliSum,
    groups: list[MeasurementGroup] | None,
    shots: int,
    seed: int | np.random.Generator | None = None,
    noise: ReadoutNoiseModel | None = None,
    calibration: np.ndarray | None = None,
) -> float:
    """One shot-sampled energy estimate; see :class:`EnergyEstimator`."""
    return EnergyEstimator(psum, groups)(state, shots, np.random.default_rng(seed), noise, calibration)


@dataclass
class SpsaParams:
    a: float = 1.2
    A: float = 20.0
    c: float = 0.06
    alpha: float = 0.602
    gamma: float = 0.101
    iterations: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ConfigurationError("SPSA gains a and c must be positive")
        if not (0 < self.alpha <= 1 and 0 < self.gamma <= 1):
            raise ConfigurationError("SPSA exponents must lie in (0, 1]")
        if self.iterations < 0:
            raise ConfigurationError("iterations must be >= 0")

    def a_k(self, k: int) -> float:
        return self.a / (k + 1 + self.A) ** self.alpha

    def c_k(self, k: int) -> float:
        return self.c / (k + 1) ** self.gamma


@dataclass
class IterationRecord:
    k: int
    theta: list[float]
    f_plus: float
    f_minus: float
    f_current: float | None = None


@dataclass
class EnergyTrace:
    records: list[IterationRecord] = field(default_factory=list)
    theta: list[float] = field(default_factory=list)

    @property
    def window_energies(self) -> np.ndarray:
        return np.array([r.f_current for r in self.records if r.f_current is not None])

    @property
    def mean(self) -> float:
        w = self.window_energies
        return float(w.mean()) if w.size else math.nan

    @property
    def std(self) -> float:
        w = self.window_energies
        return float(w.std()) if w.size else math.nan

    def to_records(self) -> list[dict]:
        return [vars(r) for r in self.records]


def spsa_minimize(
    objective: Callable[[np.ndarray], float],
    theta0: Sequence[float],
    params: SpsaParams = SpsaParams(),
    window: int = 25,
    evaluate: Callable[[np.ndarray], float] | None = None,
    callback: Callable[[int], None] | None = None,
) -> EnergyTrace:
    """Two-evaluation SPSA with gains a/(k+1+A)^alpha and c/(k+1)^gamma.

    During the last ``window`` iterations ``evaluate`` (default: ``objective``)
    is also called at the current parameters; the trace mean and standard
    deviation are taken over those values. ``callback(k)`` runs at the start
    of every iteration.
    """
    if window > params.iterations:
        raise ValueError(f"window {window} exceeds {params.iterations} iterations")
    evaluate = objective if evaluate is None else evaluate
    rng = np.random.default_rng(params.seed)
    theta = np.array(theta0, dtype=float)
    trace = EnergyTrace()
    for k in range(params.iterations):
        if callback is not None:
            callback(k)
        ak, ck = params.a_k(k), params.c_k(k)
        delta = rng.choice((-1.0, 1.0), size=theta.size)
        f_plus = objective(theta + ck * delta)
        f_minus = objective(theta - ck * delta)
        current = evaluate(theta) if k >= params.iterations - window else None
        trace.records.append(IterationRecord(k, theta.tolist(), f_plus, f_minus, current))
        theta = theta - ak * (f_plus - f_minus) / (2 * ck * delta)
    trace.theta = theta.tolist()
    return trace


@dataclass
class ShotConfig:
    mode: str = "sampled"  # "sampled" or "exact"
    perturbed_shots: int = 1024
    window_shots: int = 8192
    window: int = 25


@dataclass
class MitigationConfig:
    noise: ReadoutNoiseModel | None = None
    calibrate: bool = True
    calibration_shots: int = 8192
    refresh_every: int = 10
    method: str = "clip"


def run_vqe(
    psum: PauliSum,
    spec: AnsatzSpec,
    spsa: SpsaParams = SpsaParams(),
    shots: ShotConfig = ShotConfig(),
    mitigation: MitigationConfig = MitigationConfig(),
    theta0: Sequence[float] | None = None,
    groups: list[MeasurementGroup] | None = None,
) -> EnergyTrace:
    """SPSA-optimized VQE, deterministic given ``spsa.seed``.

    In exact mode energies are noiseless expectation values. In sampled mode
    perturbed evaluations use ``perturbed_shots`` each and window evaluations
    ``window_shots``; when a noise model is set and ``calibrate`` is on, the
    calibration matrix is rebuilt at k = 0 and every ``refresh_every``
    iterations.
    """
    if psum.n_qubits != spec.n_qubits:
        raise SizeError(f"Hamiltonian has {psum.n_qubits} qubits, ansatz {spec.n_qubits}")
    theta0 = np.zeros(spec.n_params) if theta0 is None else np.asarray(theta0, dtype=float)

    if shots.mode == "exact":
        H = psum.to_matrix()

        def energy(theta):
            psi = prepare_state(spec, theta)
            return float(np.vdot(psi, H @ psi).real)

        return spsa_minimize(energy, theta0, spsa, shots.window)
    if shots.mode != "sampled":
        raise ConfigurationError(f"unknown shot mode {shots.mode!r}")

    seeds = np.random.SeedSequence(spsa.seed).spawn(3)
    sample_rng = np.random.default_rng(seeds[0])
    cal_rng = np.random.default_rng(seeds[1])
    estimator = EnergyEstimator(psum, groups)
    noise = mitigation.noise
    state = {"cal": None}

    def refresh(k):
        if noise is None or not mitigation.calibrate:
            return
        if k % mitigation.refresh_every == 0:
            state["cal"] = build_calibration(noise, mitigation.calibration_shots, cal_rng)

    def sampled(n_shots):
        def f(theta):
            psi = prepare_state(spec, theta)
            return estimator(psi, n_shots, sample_rng, noise, state["cal"], mitigation.method)
        return f

    params = SpsaParams(spsa.a, spsa.A, spsa.c, spsa.alpha, spsa.gamma, spsa.iterations,
                        int(seeds[2].generate_state(1)[0]))
    return spsa_minimize(
        sampled(shots.perturbed_shots),
        theta0,
        params,
        shots.window,
        evaluate=sampled(shots.window_shots),
        callback=refresh,
    )


def multistart_vqe(
    psum: PauliSum,
    spec: AnsatzSpec,
    spsa: SpsaParams = SpsaParams(),
    shots: ShotConfig = ShotConfig(),
    mitigation: MitigationConfig = MitigationConfig(),
    starts: int = 1,
    rounds: int = 1,
    initial: Sequence[Sequence[float]] | None = None,
) -> EnergyTrace:
    """Repeated SPSA runs; returns the trace with the lowest window mean.

    Starting points are ``initial`` (default: the all-zero vector) followed by
    ``starts - 1`` uniform random angle vectors. Each start runs ``rounds``
    SPSA passes, every pass restarting the gain schedule from the previous
    pass's final parameters. With one start and one round this is exactly
    :func:`run_vqe` from zeros.
    """
    if starts < 1 or rounds < 1:
        raise ConfigurationError("starts and rounds must be >= 1")
    rng = np.random.default_rng([spsa.seed, 0x5EED])
    points = [np.asarray(t, dtype=float) for t in (initial or [np.zeros(spec.n_params)])]
    for t in points:
        if t.size != spec.n_params:
            raise ValueError(f"starting point has {t.size} parameters, ansatz needs {spec.n_params}")
    points += [rng.uniform(-np.pi, np.pi, spec.n_params) for _ in range(starts - 1)]
    groups = group_qubitwise(psum)
    best: EnergyTrace | None = None
    for s, theta in enumerate(points):
        for r in range(rounds):
            seed = spsa.seed if s == r == 0 else int(np.random.SeedSequence([spsa.seed, s, r]).generate_state(1)[0])
            params = SpsaParams(spsa.a, spsa.A, spsa.c, spsa.alpha, spsa.gamma, spsa.iterations, seed)
            trace = run_vqe(psum, spec, params, shots, mitigation, theta, groups)
            theta = np.asarray(trace.theta)
        if best is None or trace.mean < best.mean:
            best = trace
    return best

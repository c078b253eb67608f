"""Command-line driver: ``scmq {enumerate,solve,pauli,vqe,mitigate-demo}``.

Fixture paths that do not exist as given are looked up in ``$SCMQ_DATA_DIR``
(default: the ``data/`` directory of the source checkout). Energies are in
hartree unless a column name says ``kcal``.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .errors import ConfigurationError, DomainError, MitigationError, ParseError, SizeError
from .fock import IntegralSet, read_fcidump
from .mitigation import ReadoutNoiseModel, build_calibration, calibration_to_csv
from .pauli import PauliSum, count_y, decompose, group_qubitwise, grouping_is_sound
from .pointgroup import irrep_from_label
from .scm import (
    SymmetryConfiguration,
    basis_records,
    block_hamiltonian,
    count_spin_adapted,
    embed,
    enumerate_basis,
    exact_ground,
    fock_space_dimension,
    ground_overlaps,
    penalty_padding,
    qubit_count,
)
from .vqe import (
    AnsatzSpec,
    EnergyEstimator,
    MitigationConfig,
    ShotConfig,
    SpsaParams,
    expectation_exact,
    multistart_vqe,
    prepare_state,
)

log = logging.getLogger("scmq")

KCAL_PER_HARTREE = 627.5094740631

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONSTRAINT = 4
EXIT_NUMERIC = 5
EXIT_IO = 6

DEFAULT_CONFIG: dict = {
    "molecule": {
        "fixture": "f2_sto3g_frozencore_{R:.2f}.fcidump",
        "bond_lengths": [round(1.0 + 0.1 * i, 2) for i in range(15)],
        "reference_bond_length": 1.4,
    },
    "symmetry": {"N": None, "Sz": None, "irrep": "Ag"},
    "embedding": {"padding": "penalty"},
    "ansatz": {"scheme": "Y", "depth": 1, "entangler": "chain"},
    "spsa": {"a": 1.2, "A": 20.0, "c": 0.06, "alpha": 0.602, "gamma": 0.101, "iterations": 200},
    "restarts": {"starts": 1, "rounds": 1, "sweeps": 0},
    "shots": {"mode": "sampled", "perturbed": 1024, "window": 8192, "window_iterations": 25},
    "mitigation": {"flip": None, "calibrate": True, "calibration_shots": 8192, "refresh_every": 10, "method": "clip"},
    "seed": 0,
    "workers": 1,
}


def data_dir() -> Path:
    env = os.environ.get("SCMQ_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def resolve_fixture(name: str | Path) -> Path:
    p = Path(name)
    if p.exists():
        return p
    candidate = data_dir() / p
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"fixture {name} not found (also looked in {data_dir()})")


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _jsonl(records) -> str:
    return "".join(json.dumps(r) + "\n" for r in records)


# -- symmetry flags ---------------------------------------------------------


def _add_symmetry_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("fcidump", help="FCIDUMP file (path or name inside the data directory)")
    p.add_argument("--n", type=int, help="particle number N")
    p.add_argument("--sz", type=float, help="spin projection Sz")
    p.add_argument("--irrep", help="spatial irrep label, e.g. Ag")
    p.add_argument("--s", type=float, help="total spin S (counting only)")


def _config_from_flags(args) -> SymmetryConfiguration:
    irrep = irrep_from_label(args.irrep) if args.irrep else None
    return SymmetryConfiguration(args.n, args.sz, irrep, getattr(args, "s", None))


def _load(path) -> IntegralSet:
    return read_fcidump(resolve_fixture(path))


def _default_sigma(ints: IntegralSet, irrep: str | None) -> SymmetryConfiguration:
    return SymmetryConfiguration(
        ints.nelec, ints.ms2 / 2, irrep_from_label(irrep or ints.group.identity.name, ints.group)
    )


# -- enumerate ---------------------------------------------------------------


def table_rows(ints: IntegralSet, irrep: str | None = None, s: float | None = None) -> list[dict]:
    """Configuration and qubit counts for successively tighter constraints."""
    full = _default_sigma(ints, irrep)
    s = abs(full.sz) if s is None else s
    basis = ints.basis
    rows = [{"constraints": "None", "rank": fock_space_dimension(ints.norb)}]
    for cfg in (
        SymmetryConfiguration(n=full.n),
        SymmetryConfiguration(n=full.n, sz=full.sz),
        full,
    ):
        rows.append({"constraints": cfg.describe(), "rank": enumerate_basis(basis, cfg).rank})
    block = enumerate_basis(basis, full)
    spin = SymmetryConfiguration(full.n, full.sz, full.irrep, s)
    rows.append({"constraints": spin.describe(), "rank": count_spin_adapted(block, s, ints.norb)})
    for r in rows:
        r["qubits"] = qubit_count(r["rank"]) if r["rank"] else None
    return rows


def cmd_enumerate(args) -> int:
    ints = _load(args.fcidump)
    if args.table:
        rows = table_rows(ints, args.irrep, args.s)
    else:
        cfg = _config_from_flags(args)
        if cfg.is_unconstrained and cfg.s is None:
            rank = fock_space_dimension(ints.norb)
        else:
            cb = enumerate_basis(ints.basis, SymmetryConfiguration(cfg.n, cfg.sz, cfg.irrep))
            if cb.unsatisfiable:
                raise ConfigurationError(f"no determinants satisfy {cfg.describe()}")
            rank = cb.rank if cfg.s is None else count_spin_adapted(cb, cfg.s, ints.norb)
        rows = [{"constraints": cfg.describe(), "rank": rank, "qubits": qubit_count(rank) if rank else None}]
        if args.list and not cfg.is_unconstrained:
            rows += basis_records(cb, ints.basis)
    if args.format == "text":
        text = "".join(f"{r['constraints']:<28} {r['rank']:>8} {r['qubits']:>4}\n" for r in rows if "rank" in r)
    else:
        text = _jsonl(rows)
    _emit(text, args.out)
    return EXIT_OK


# -- solve ---------------------------------------------------------------------


def solve_block(ints: IntegralSet, cfg: SymmetryConfiguration) -> dict:
    cb, H = block_hamiltonian(ints, cfg)
    evals = np.linalg.eigvalsh(H)
    e0, vec = exact_ground(H)
    return {
        "constraints": cfg.as_dict(),
        "rank": cb.rank,
        "qubits": qubit_count(cb.rank),
        "eigenvalues": evals.tolist(),
        "ground_energy": e0,
        "ground_vector": vec.tolist(),
        "overlaps": ground_overlaps(H, cb).tolist(),
        "basis": basis_records(cb, ints.basis),
    }


def cmd_solve(args) -> int:
    ints = _load(args.fcidump)
    cfg = _config_from_flags(args)
    if cfg.is_unconstrained:
        cfg = _default_sigma(ints, None)
    _emit(json.dumps(solve_block(ints, cfg)) + "\n", args.out)
    return EXIT_OK


# -- pauli -----------------------------------------------------------------------


def _padding_value(spec, H: np.ndarray) -> float:
    if spec in (None, "zero"):
        return 0.0
    if spec == "penalty":
        return penalty_padding(H)
    return float(spec)


def qubit_hamiltonian(ints: IntegralSet, cfg: SymmetryConfiguration, padding="penalty", cutoff=1e-12):
    cb, H = block_hamiltonian(ints, cfg)
    q = qubit_count(cb.rank)
    He = embed(H, q, _padding_value(padding, H))
    return cb, H, decompose(He, cutoff)


def pauli_report(psum: PauliSum) -> dict:
    groups = group_qubitwise(psum)
    members = [m for g in groups for m in g.members if m != psum.identity_label]
    expected = sorted(l for l in psum.terms if l != psum.identity_label)
    return {
        "qubits": psum.n_qubits,
        "terms": len(psum.terms),
        "odd_y_terms": sum(count_y(l) % 2 for l in psum.terms),
        "groups": len(groups),
        "each_term_once": sorted(members) == expected,
        "qubitwise_sound": grouping_is_sound(groups),
        "group_bases": [g.basis for g in groups],
    }


def cmd_pauli(args) -> int:
    if args.matrix:
        try:
            H = np.array(json.loads(Path(args.matrix).read_text()), dtype=float)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.matrix}: {exc}") from exc
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise SizeError(f"matrix must be square, got shape {H.shape}")
        psum = decompose(H, args.cutoff)
    else:
        if not args.fcidump:
            raise ConfigurationError("give an FCIDUMP file or --matrix")
        ints = _load(args.fcidump)
        cfg = _config_from_flags(args)
        if cfg.is_unconstrained:
            cfg = _default_sigma(ints, None)
        _, _, psum = qubit_hamiltonian(ints, cfg, args.padding, args.cutoff)
    if args.out:
        Path(args.out).write_text(psum.dumps(), encoding="utf-8")
    report = pauli_report(psum)
    if not args.out:
        report["hamiltonian"] = psum.dumps().splitlines()
    sys.stdout.write(json.dumps(report) + "\n")
    return EXIT_OK


# -- vqe --------------------------------------------------------------------------


def deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = v
    return out


def apply_override(cfg: dict, assignment: str) -> None:
    """Set ``a.b.c=value`` in place; the value is read as YAML."""
    if "=" not in assignment:
        raise ParseError(f"override {assignment!r} is not of the form key.path=value")
    key, raw = assignment.split("=", 1)
    node = cfg
    parts = key.strip().split(".")
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ParseError(f"override {key!r} descends into a non-mapping")
    node[parts[-1]] = yaml.safe_load(raw)


def load_config(path: str | None, overrides=()) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path:
        try:
            user = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        if not isinstance(user, dict):
            raise ParseError(f"{path}: top level must be a mapping")
        cfg = deep_merge(cfg, user)
    for o in overrides:
        apply_override(cfg, o)
    return cfg


def _entangler(value, n_qubits):
    if value in (None, "chain"):
        return None
    if value == "ring":
        return tuple((q, (q + 1) % n_qubits) for q in range(n_qubits))
    if isinstance(value, list):
        return tuple(tuple(int(x) for x in pair) for pair in value)
    raise ConfigurationError(f"unknown entangler {value!r}")


def _noise(mcfg: dict, n_qubits: int) -> ReadoutNoiseModel | None:
    flip = mcfg.get("flip")
    if flip is None:
        return None
    if isinstance(flip, dict):
        return ReadoutNoiseModel(tuple([flip["p01"]] * n_qubits), tuple([flip["p10"]] * n_qubits))
    return ReadoutNoiseModel.symmetric(n_qubits, float(flip))


def geometry_seed(seed: int, index: int) -> int:
    """Independent per-geometry seed; does not depend on scheduling."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def geometry_problem(cfg: dict, index: int) -> dict:
    """Everything needed to optimize one grid point."""
    R = float(cfg["molecule"]["bond_lengths"][index])
    path = resolve_fixture(cfg["molecule"]["fixture"].format(R=R))
    ints = read_fcidump(path)
    sym = cfg["symmetry"]
    base = _default_sigma(ints, sym.get("irrep"))
    sigma = SymmetryConfiguration(
        base.n if sym.get("N") is None else int(sym["N"]),
        base.sz if sym.get("Sz") is None else float(sym["Sz"]),
        base.irrep,
    )
    cb, H, psum = qubit_hamiltonian(ints, sigma, cfg["embedding"]["padding"])
    a = cfg["ansatz"]
    spec = AnsatzSpec(psum.n_qubits, int(a["depth"]), a["scheme"], _entangler(a.get("entangler"), psum.n_qubits))
    s = cfg["spsa"]
    seed = geometry_seed(int(cfg["seed"]), index)
    sh = cfg["shots"]
    m = cfg["mitigation"]
    return {
        "index": index,
        "bond_length": R,
        "fixture": str(path),
        "sha256": sha256(path),
        "seed": seed,
        "rank": cb.rank,
        "exact": exact_ground(H)[0],
        "psum": psum,
        "spec": spec,
        "spsa": SpsaParams(s["a"], s["A"], s["c"], s["alpha"], s["gamma"], int(s["iterations"]), seed),
        "shots": ShotConfig(sh["mode"], int(sh["perturbed"]), int(sh["window"]), int(sh["window_iterations"])),
        "mitigation": MitigationConfig(
            _noise(m, psum.n_qubits), bool(m["calibrate"]), int(m["calibration_shots"]),
            int(m["refresh_every"]), m["method"],
        ),
    }


def _optimize(prob: dict, starts: int, rounds: int, initial=None, seed=None):
    spsa = prob["spsa"] if seed is None else replace(prob["spsa"], seed=seed)
    return multistart_vqe(prob["psum"], prob["spec"], spsa, prob["shots"], prob["mitigation"], starts, rounds, initial)


def _record(prob: dict, trace, seconds: float) -> dict:
    out = {k: prob[k] for k in ("index", "bond_length", "fixture", "sha256", "seed", "rank", "exact")}
    out.update(
        terms=len(prob["psum"].terms),
        mean=trace.mean,
        std=trace.std,
        final_exact_expectation=float(expectation_exact(prepare_state(prob["spec"], trace.theta), prob["psum"])),
        seconds=seconds,
        records=trace.to_records(),
        theta=list(trace.theta),
    )
    return out


def run_geometry(cfg: dict, index: int) -> dict:
    t0 = time.perf_counter()
    prob = geometry_problem(cfg, index)
    r = cfg["restarts"]
    trace = _optimize(prob, int(r["starts"]), int(r["rounds"]))
    return _record(prob, trace, time.perf_counter() - t0)


def _run_one(payload):
    cfg, index = payload
    return run_geometry(cfg, index)


def sweep_refine(cfg: dict, results: dict, lengths) -> None:
    """Alternating up/down passes over the grid, warm-starting each point
    from its already-visited neighbour and keeping whichever is lower."""
    order = sorted(results, key=lambda i: lengths[i])
    rounds = int(cfg["restarts"]["rounds"])
    for sweep in range(int(cfg["restarts"].get("sweeps", 0))):
        seq = order if sweep % 2 == 0 else order[::-1]
        for prev, i in zip(seq, seq[1:]):
            t0 = time.perf_counter()
            prob = geometry_problem(cfg, i)
            seed = int(np.random.SeedSequence([prob["seed"], 0x5EEB, sweep]).generate_state(1)[0])
            trace = _optimize(prob, 1, rounds, [results[prev]["theta"]], seed)
            spent = results[i]["seconds"] + time.perf_counter() - t0
            if trace.mean < results[i]["mean"]:
                results[i] = _record(prob, trace, spent)
            else:
                results[i]["seconds"] = spent


def run_curve(cfg: dict, out_dir: Path) -> dict:
    """Optimize every bond length, write traces, curve CSV and manifest."""
    out_dir.mkdir(parents=True, exist_ok=True)
    lengths = cfg["molecule"]["bond_lengths"]
    t0 = time.perf_counter()
    workers = max(1, int(cfg.get("workers", 1)))
    results = {}
    jobs = [(cfg, i) for i in range(len(lengths))]

    def trace_path(res):
        return out_dir / f"trace_{res['bond_length']:.2f}.jsonl"

    def flush(res):
        results[res["index"]] = res
        trace_path(res).write_text(_jsonl(res["records"]), encoding="utf-8")
        log.info("R=%.2f mean=%.8f exact=%.8f (%.1fs)", res["bond_length"], res["mean"], res["exact"], res["seconds"])

    if workers == 1:
        for job in jobs:
            flush(_run_one(job))
    else:
        with ProcessPoolExecutor(workers) as pool:
            for res in pool.map(_run_one, jobs):
                flush(res)
    if cfg["restarts"].get("sweeps"):
        sweep_refine(cfg, results, lengths)
        for res in results.values():
            flush(res)

    ordered = [results[i] for i in sorted(results, key=lambda i: lengths[i])]
    ref_R = cfg["molecule"].get("reference_bond_length")
    ref = next((r["exact"] for r in ordered if ref_R is not None and abs(r["bond_length"] - ref_R) < 1e-9), None)
    if ref is None:
        ref = min(r["exact"] for r in ordered)
    rows = curve_rows(ordered, ref)
    curve = out_dir / "curve.csv"
    curve.write_text(rows_to_csv(rows), encoding="utf-8")

    outputs = sorted([curve] + [out_dir / f"trace_{r['bond_length']:.2f}.jsonl" for r in ordered])
    manifest = {
        "tool": "scmq",
        "version": __version__,
        "config": cfg,
        "seeds": {"base": cfg["seed"], "per_geometry": {f"{r['bond_length']:.2f}": r["seed"] for r in ordered}},
        "inputs": {r["fixture"]: r["sha256"] for r in ordered},
        "timing": {
            "total_seconds": time.perf_counter() - t0,
            "per_geometry": {f"{r['bond_length']:.2f}": r["seconds"] for r in ordered},
        },
        "outputs": {p.name: sha256(p) for p in outputs},
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return {"rows": rows, "manifest": manifest, "results": ordered}


CURVE_FIELDS = [
    "bond_length", "mean_energy", "std_energy", "exact_energy",
    "mean_rel_kcal", "std_kcal", "exact_rel_kcal", "error_kcal",
]


def curve_rows(results: list[dict], reference: float) -> list[dict]:
    k = KCAL_PER_HARTREE
    return [
        {
            "bond_length": r["bond_length"],
            "mean_energy": r["mean"],
            "std_energy": r["std"],
            "exact_energy": r["exact"],
            "mean_rel_kcal": (r["mean"] - reference) * k,
            "std_kcal": r["std"] * k,
            "exact_rel_kcal": (r["exact"] - reference) * k,
            "error_kcal": (r["mean"] - r["exact"]) * k,
        }
        for r in results
    ]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CURVE_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({f: (f"{r[f]:.2f}" if f == "bond_length" else repr(float(r[f]))) for f in CURVE_FIELDS})
    return buf.getvalue()


def cmd_vqe(args) -> int:
    overrides = list(args.set or [])
    for flag, key in (("depth", "ansatz.depth"), ("scheme", "ansatz.scheme"), ("mode", "shots.mode"),
                      ("iterations", "spsa.iterations"), ("seed", "seed"), ("workers", "workers")):
        value = getattr(args, flag)
        if value is not None:
            overrides.append(f"{key}={value}")
    if args.bond_lengths:
        overrides.append("molecule.bond_lengths=[" + args.bond_lengths + "]")
    cfg = load_config(args.config, overrides)
    out = run_curve(cfg, Path(args.out_dir))
    sys.stdout.write(rows_to_csv(out["rows"]))
    return EXIT_OK


# -- mitigate-demo ------------------------------------------------------------------


def mitigation_demo(n_qubits=4, flip=0.02, shots=8192, trials=200, seed=0, method="clip") -> dict:
    """Corrected versus raw energy errors for a fixed random state and Hamiltonian."""
    rng = np.random.default_rng(seed)
    spec = AnsatzSpec(n_qubits, 1, "Y")
    psi = prepare_state(spec, rng.uniform(-np.pi, np.pi, spec.n_params))
    a = rng.normal(size=(1 << n_qubits,) * 2)
    psum = decompose((a + a.T) / 2)
    exact = expectation_exact(psi, psum)
    est = EnergyEstimator(psum)
    noise = ReadoutNoiseModel.symmetric(n_qubits, flip)
    raw_err, fixed_err = [], []
    cal = None
    for t in range(trials):
        cal = build_calibration(noise, shots, np.random.default_rng([seed, t]))
        raw = est(psi, shots, np.random.default_rng([seed, t, 1]), noise)
        fixed = est(psi, shots, np.random.default_rng([seed, t, 1]), noise, cal, method)
        raw_err.append(abs(raw - exact))
        fixed_err.append(abs(fixed - exact))
    raw_err, fixed_err = np.array(raw_err), np.array(fixed_err)
    return {
        "qubits": n_qubits,
        "flip": flip,
        "shots": shots,
        "trials": trials,
        "exact": exact,
        "win_fraction": float(np.mean(fixed_err < raw_err)),
        "mean_raw_error": float(raw_err.mean()),
        "mean_corrected_error": float(fixed_err.mean()),
        "last_calibration": cal,
    }


def cmd_mitigate_demo(args) -> int:
    res = mitigation_demo(args.qubits, args.flip, args.shots, args.trials, args.seed, args.method)
    cal = res.pop("last_calibration")
    if args.calibration_csv:
        Path(args.calibration_csv).write_text(calibration_to_csv(cal), encoding="utf-8")
    sys.stdout.write(json.dumps(res) + "\n")
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scmq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"scmq {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="configuration counts and qubit requirements")
    _add_symmetry_flags(e)
    e.add_argument("--table", action="store_true", help="rows for None, N, N+Sz, N+Sz+irrep, N+S+Sz+irrep")
    e.add_argument("--list", action="store_true", help="also list the determinants")
    e.add_argument("--format", choices=("jsonl", "text"), default="jsonl")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("solve", help="exact spectrum, ground vector and overlaps")
    _add_symmetry_flags(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    q = sub.add_parser("pauli", help="Pauli decomposition and measurement grouping")
    _add_symmetry_flags(q)
    q.set_defaults(fcidump=None)
    q.add_argument("--padding", default="penalty", help="'zero', 'penalty' or a number in hartree")
    q.add_argument("--cutoff", type=float, default=1e-12)
    q.add_argument("--matrix", help="debug: decompose a square matrix given as a JSON list of rows")
    q.add_argument("--out", help="write the serialized Pauli sum here")
    q.set_defaults(func=cmd_pauli)
    q._positionals._group_actions[0].nargs = "?"

    v = sub.add_parser("vqe", help="simulated VQE over a bond-length grid")
    v.add_argument("config", nargs="?", help="YAML run configuration")
    v.add_argument("--out-dir", default="vqe_run")
    v.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config entry, e.g. spsa.a=0.5")
    v.add_argument("--depth", type=int)
    v.add_argument("--scheme", choices=("Y", "ZXZ"))
    v.add_argument("--mode", choices=("sampled", "exact"))
    v.add_argument("--iterations", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int)
    v.add_argument("--bond-lengths", help="comma-separated subset, e.g. 1.4,2.0")
    v.set_defaults(func=cmd_vqe)

    m = sub.add_parser("mitigate-demo", help="readout-error mitigation on a random state")
    m.add_argument("--qubits", type=int, default=4)
    m.add_argument("--flip", type=float, default=0.02)
    m.add_argument("--shots", type=int, default=8192)
    m.add_argument("--trials", type=int, default=200)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--method", choices=("clip", "nnls"), default="clip")
    m.add_argument("--calibration-csv")
    m.set_defaults(func=cmd_mitigate_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * args.verbose
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        code, msg = EXIT_PARSE, exc
    except (ConfigurationError, DomainError) as exc:
        code, msg = EXIT_CONSTRAINT, exc
    except (MitigationError, SizeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        code, msg = EXIT_NUMERIC, exc
    except OSError as exc:
        code, msg = EXIT_IO, exc
    except (KeyError, TypeError, ValueError) as exc:
        code, msg = EXIT_PARSE, f"invalid configuration value: {exc}"
    print(f"scmq: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

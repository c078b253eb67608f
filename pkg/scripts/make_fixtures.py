#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures under ``data/``.

AO integrals come from pyqint (STO-3G). Everything after that lives here:
a D2h symmetry-blocked closed-shell SCF, frozen-core folding, the FCIDUMP
writer, and a brute-force second-quantized FCI used as the reference energy
for every fixture. The reference route shares no code with ``scmq``.

    pip install pyqint
    python scripts/make_fixtures.py            # writes data/
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

import numpy as np
import pyqint
from scipy import linalg

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"

# Cotton ordering used by Psi4 and by ORBSYM in these files
COTTON = {"Ag": 1, "B1g": 2, "B2g": 3, "B3g": 4, "Au": 5, "B1u": 6, "B2u": 7, "B3u": 8}
XOR_CODE = {k: v - 1 for k, v in COTTON.items()}

F2_GRID = [round(1.0 + 0.1 * i, 1) for i in range(15)]  # 1.0 .. 2.4 angstrom
H2_BOND = 0.7414


def ao_integrals(atoms):
    mol = pyqint.Molecule("fixture")
    for sym, z in atoms:
        mol.add_atom(sym, 0.0, 0.0, z, unit="angstrom")
    cgfs, nuclei = mol.build_basis("sto3g")
    S, T, V, eri = pyqint.PyQInt().build_integrals_openmp(cgfs, nuclei)
    enuc = 0.0
    for (ra, za), (rb, zb) in itertools.combinations(nuclei, 2):
        enuc += za * zb / np.linalg.norm(np.asarray(ra) - np.asarray(rb))
    return S, T + V, eri, enuc, mol.get_nelec()


def homonuclear_salcs(shells):
    """Symmetry-adapted combinations for A(-z)/B(+z) homonuclear diatomics.

    ``shells`` lists the per-atom AO labels ("s", "px", "py", "pz"). Returns
    {irrep: [coefficient column, ...]} over the 2*len(shells) AOs.
    """
    n = len(shells)
    blocks: dict[str, list[np.ndarray]] = {}

    def add(irrep, i, sign):
        v = np.zeros(2 * n)
        v[i] = 1.0
        v[n + i] = sign
        blocks.setdefault(irrep, []).append(v)

    for i, kind in enumerate(shells):
        if kind == "s":
            add("Ag", i, +1.0)
            add("B1u", i, -1.0)
        elif kind == "pz":
            # inversion sends pz(A) to -pz(B)
            add("Ag", i, -1.0)
            add("B1u", i, +1.0)
        elif kind == "px":
            add("B3u", i, +1.0)
            add("B2g", i, -1.0)
        elif kind == "py":
            add("B2u", i, +1.0)
            add("B3g", i, -1.0)
    return {k: np.array(v).T for k, v in blocks.items()}


def jk(D, eri):
    J = np.einsum("pqrs,rs->pq", eri, D)
    K = np.einsum("prqs,rs->pq", eri, D)
    return J, K


def blocked_rhf(S, H, eri, salcs, nocc, max_iter=200, tol=1e-11):
    """Closed-shell SCF with occupations fixed per irrep.

    Returns orbital energies / coefficients per irrep (columns ascending).
    """
    F = H.copy()
    history_f, history_e = [], []
    energy_old = 0.0
    for it in range(max_iter):
        orbs = {}
        D = np.zeros_like(S)
        for irrep, U in salcs.items():
            e, c = linalg.eigh(U.T @ F @ U, U.T @ S @ U)
            C = U @ c
            orbs[irrep] = (e, C)
            occ = C[:, : nocc.get(irrep, 0)]
            D += occ @ occ.T
        J, K = jk(D, eri)
        Fnew = H + 2 * J - K
        energy = float(np.sum(D * (H + Fnew)))
        err = Fnew @ D @ S - S @ D @ Fnew
        history_f.append(Fnew)
        history_e.append(err)
        history_f, history_e = history_f[-8:], history_e[-8:]
        m = len(history_f)
        B = -np.ones((m + 1, m + 1))
        B[m, m] = 0.0
        for i in range(m):
            for j in range(m):
                B[i, j] = np.sum(history_e[i] * history_e[j])
        rhs = np.zeros(m + 1)
        rhs[m] = -1.0
        try:
            coef = np.linalg.solve(B, rhs)[:m]
            F = sum(c * f for c, f in zip(coef, history_f))
        except np.linalg.LinAlgError:
            F = Fnew
        if abs(energy - energy_old) < tol and np.max(np.abs(err)) < 1e-8:
            return orbs, energy
        energy_old = energy
    raise RuntimeError("SCF did not converge")


def fold_core(H, eri, C_core, C_act, enuc):
    Dc = C_core @ C_core.T
    J, K = jk(Dc, eri)
    e_core = enuc + float(np.sum(Dc * (2 * H + 2 * J - K)))
    h_eff = C_act.T @ (H + 2 * J - K) @ C_act
    g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, C_act, C_act, C_act, C_act, optimize=True)
    return e_core, h_eff, g


def write_fcidump(path, h, g, ecore, nelec, orbsym, tol=1e-12):
    norb = h.shape[0]
    lines = [
        f" &FCI NORB={norb},NELEC={nelec},MS2=0,",
        "  ORBSYM=" + ",".join(str(COTTON[s]) for s in orbsym) + ",",
        "  ISYM=1,",
        " &END",
    ]
    fmt = "{:24.16E} {:4d} {:4d} {:4d} {:4d}"
    for i in range(norb):
        for j in range(i + 1):
            for k in range(norb):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    if abs(g[i, j, k, l]) > tol:
                        lines.append(fmt.format(g[i, j, k, l], i + 1, j + 1, k + 1, l + 1))
    for i in range(norb):
        for j in range(i + 1):
            if abs(h[i, j]) > tol:
                lines.append(fmt.format(h[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt.format(ecore, 0, 0, 0, 0))
    path.write_text("\n".join(lines) + "\n")


# -- brute-force second quantization ---------------------------------------
# Spin-orbital 2p+s (interleaved), a deliberately different layout from the
# package's alpha-block-then-beta-block convention.

def _annihilate(state, so):
    if not state >> so & 1:
        return None, 0
    sign = -1 if bin(state & ((1 << so) - 1)).count("1") % 2 else 1
    return state ^ (1 << so), sign


def _create(state, so):
    if state >> so & 1:
        return None, 0
    sign = -1 if bin(state & ((1 << so) - 1)).count("1") % 2 else 1
    return state | (1 << so), sign


def _apply(ops, state):
    """ops applied right-to-left: [(kind, so), ...] with kind 'c' or 'a'."""
    sign = 1
    for kind, so in reversed(ops):
        state, s = (_create if kind == "c" else _annihilate)(state, so)
        if state is None:
            return None, 0
        sign *= s
    return state, sign


def second_quantized_matrix(states, h, g, ecore):
    norb = h.shape[0]
    index = {s: i for i, s in enumerate(states)}
    M = np.zeros((len(states), len(states)))
    for col, ket in enumerate(states):
        M[col, col] += ecore
        for p, q in itertools.product(range(norb), repeat=2):
            if abs(h[p, q]) < 1e-14:
                continue
            for s in (0, 1):
                out, sign = _apply([("c", 2 * p + s), ("a", 2 * q + s)], ket)
                if out in index:
                    M[index[out], col] += sign * h[p, q]
        for p, q, r, t in itertools.product(range(norb), repeat=4):
            if abs(g[p, q, r, t]) < 1e-14:
                continue
            for s1, s2 in itertools.product((0, 1), repeat=2):
                ops = [("c", 2 * p + s1), ("c", 2 * r + s2), ("a", 2 * t + s2), ("a", 2 * q + s1)]
                out, sign = _apply(ops, ket)
                if out in index:
                    M[index[out], col] += 0.5 * sign * g[p, q, r, t]
    return M


def reference_fci(h, g, ecore, nelec, orbsym, irrep="Ag"):
    norb = h.shape[0]
    target = XOR_CODE[irrep]
    states = []
    for occ in itertools.combinations(range(2 * norb), nelec):
        na = sum(1 for so in occ if so % 2 == 0)
        if 2 * na != nelec:
            continue
        code = 0
        for so in occ:
            code ^= XOR_CODE[orbsym[so // 2]]
        if code == target:
            states.append(sum(1 << so for so in occ))
    M = second_quantized_matrix(states, h, g, ecore)
    return float(np.linalg.eigvalsh(M)[0]), len(states)


def make_f2(R):
    atoms = [("F", -R / 2), ("F", R / 2)]
    S, H, eri, enuc, nelec = ao_integrals(atoms)
    salcs = homonuclear_salcs(["s", "s", "px", "py", "pz"])
    nocc = {"Ag": 3, "B1u": 2, "B3u": 1, "B2u": 1, "B2g": 1, "B3g": 1}
    orbs, e_elec = blocked_rhf(S, H, eri, salcs, nocc)
    core = np.column_stack([orbs["Ag"][1][:, 0], orbs["B1u"][1][:, 0]])
    order = [("Ag", 1), ("B1u", 1), ("Ag", 2), ("B3u", 0), ("B2u", 0),
             ("B2g", 0), ("B3g", 0), ("B1u", 2)]
    act = np.column_stack([orbs[ir][1][:, k] for ir, k in order])
    orbsym = [ir for ir, _ in order]
    ecore, h, g = fold_core(H, eri, core, act, enuc)
    return dict(h=h, g=g, ecore=ecore, nelec=nelec - 4, orbsym=orbsym, rhf=e_elec + enuc)


def make_h2(R):
    atoms = [("H", -R / 2), ("H", R / 2)]
    S, H, eri, enuc, nelec = ao_integrals(atoms)
    salcs = homonuclear_salcs(["s"])
    orbs, e_elec = blocked_rhf(S, H, eri, salcs, {"Ag": 1})
    act = np.column_stack([orbs["Ag"][1][:, 0], orbs["B1u"][1][:, 0]])
    ecore, h, g = fold_core(H, eri, np.zeros((S.shape[0], 0)), act, enuc)
    return dict(h=h, g=g, ecore=ecore, nelec=nelec, orbsym=["Ag", "B1u"], rhf=e_elec + enuc)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    reference = {"units": "hartree", "block": {"N": None, "Sz": 0, "irrep": "Ag"}, "h2": {}, "f2": {}}

    sys = make_h2(H2_BOND)
    write_fcidump(args.out / "h2_sto3g.fcidump", sys["h"], sys["g"], sys["ecore"], sys["nelec"], sys["orbsym"])
    e, dim = reference_fci(sys["h"], sys["g"], sys["ecore"], sys["nelec"], sys["orbsym"])
    reference["h2"] = {"bond_length": H2_BOND, "rhf": sys["rhf"], "fci": e, "dim": dim}
    print(f"H2  R={H2_BOND:.4f}  RHF={sys['rhf']:.10f}  FCI={e:.10f}  dim={dim}")

    for R in F2_GRID:
        sys = make_f2(R)
        name = f"f2_sto3g_frozencore_{R:.2f}.fcidump"
        write_fcidump(args.out / name, sys["h"], sys["g"], sys["ecore"], sys["nelec"], sys["orbsym"])
        e, dim = reference_fci(sys["h"], sys["g"], sys["ecore"], sys["nelec"], sys["orbsym"])
        reference["f2"][f"{R:.2f}"] = {"file": name, "rhf": sys["rhf"], "fci": e, "dim": dim}
        print(f"F2  R={R:.2f}  RHF={sys['rhf']:.10f}  FCI(Ag)={e:.10f}  dim={dim}")

    (args.out / "reference.json").write_text(json.dumps(reference, indent=2) + "\n")


if __name__ == "__main__":
    main()

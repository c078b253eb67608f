"""Slater determinants, FCIDUMP ingestion and Hamiltonian matrix elements.

Spin-orbital layout: alpha orbitals 0..norb-1 followed by beta orbitals
norb..2*norb-1. Fermionic signs count occupied spin-orbitals with a lower
index than the one being created or annihilated.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from .errors import ParseError, SizeError
from .pointgroup import D2H, Irrep, PointGroupTable, direct_product


class Determinant(NamedTuple):
    """Alpha/beta occupation bitmasks; bit p set means spatial orbital p occupied."""

    alpha: int
    beta: int

    def spin_orbital_mask(self, norb: int) -> int:
        return self.alpha | (self.beta << norb)

    @classmethod
    def from_spin_orbital_mask(cls, mask: int, norb: int) -> "Determinant":
        full = (1 << norb) - 1
        return cls(mask & full, (mask >> norb) & full)

    @property
    def n_electrons(self) -> int:
        return self.alpha.bit_count() + self.beta.bit_count()


@dataclass(frozen=True)
class SpinOrbitalBasis:
    norb: int
    irreps: tuple[Irrep, ...]
    core_energy: float = 0.0

    def __post_init__(self):
        if len(self.irreps) != self.norb:
            raise SizeError(f"{len(self.irreps)} orbital irreps given for norb={self.norb}")

    @property
    def group(self) -> PointGroupTable:
        from .pointgroup import get_group

        return get_group(self.irreps[0].group) if self.irreps else D2H

    @property
    def n_spin_orbitals(self) -> int:
        return 2 * self.norb

    def mask_irrep(self, mask: int) -> Irrep:
        return direct_product((self.irreps[p] for p in range(self.norb) if mask >> p & 1), self.group)


@dataclass
class IntegralSet:
    """Active-space integrals in chemists' notation, h[p,q] and g[p,q,r,s] = (pq|rs)."""

    h: np.ndarray
    g: np.ndarray
    constant: float
    nelec: int
    ms2: int
    orbsym: tuple[int, ...]
    group: PointGroupTable = field(default=D2H)

    @property
    def norb(self) -> int:
        return self.h.shape[0]

    @property
    def basis(self) -> SpinOrbitalBasis:
        return SpinOrbitalBasis(
            self.norb, tuple(self.group.from_orbsym(s) for s in self.orbsym), self.constant
        )

    def spin_orbital_integrals(self) -> tuple[np.ndarray, np.ndarray]:
        """One-electron and antisymmetrized two-electron integrals over spin-orbitals.

        Returns ``(hso, vso)`` with ``vso[i,j,k,l] = <ij||kl>`` in physicists' notation.
        """
        n = self.norb
        hso = np.zeros((2 * n, 2 * n))
        hso[:n, :n] = self.h
        hso[n:, n:] = self.h
        # <ij|kl> = (ik|jl) when spin(i)=spin(k) and spin(j)=spin(l)
        phys = self.g.transpose(0, 2, 1, 3)
        vso = np.zeros((2 * n,) * 4)
        for si in (0, 1):
            for sj in (0, 1):
                a, b = slice(si * n, si * n + n), slice(sj * n, sj * n + n)
                vso[a, b, a, b] = phys
        vso = vso - vso.transpose(0, 1, 3, 2)
        return hso, vso


_HEADER_RE = re.compile(r"&FCI(.*?)(&END|/)", re.IGNORECASE | re.DOTALL)
_KEY_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=")


def _parse_header(text: str) -> dict[str, list[str]]:
    fields: dict[str, list[str]] = {}
    keys = list(_KEY_RE.finditer(text))
    for i, m in enumerate(keys):
        end = keys[i + 1].start() if i + 1 < len(keys) else len(text)
        values = [v for v in re.split(r"[,\s]+", text[m.end():end]) if v]
        fields[m.group(1).upper()] = values
    return fields


def _header_int(fields: dict[str, list[str]], key: str) -> int:
    if key not in fields or not fields[key]:
        raise ParseError(f"FCIDUMP header is missing {key}", )
    try:
        return int(fields[key][0])
    except ValueError:
        raise ParseError(f"FCIDUMP header field {key} is not an integer: {fields[key][0]!r}") from None


def parse_fcidump(stream: str | TextIO, group: PointGroupTable = D2H) -> IntegralSet:
    """Parse FCIDUMP text (string contents or an open text stream)."""
    text = stream if isinstance(stream, str) else stream.read()
    m = _HEADER_RE.search(text)
    if m is None or text[: m.start()].strip():
        raise ParseError("line 1: FCIDUMP must begin with an &FCI ... &END header")
    fields = _parse_header(m.group(1))
    norb = _header_int(fields, "NORB")
    nelec = _header_int(fields, "NELEC")
    ms2 = _header_int(fields, "MS2")
    if "ORBSYM" not in fields:
        raise ParseError("FCIDUMP header is missing ORBSYM")
    try:
        orbsym = tuple(int(v) for v in fields["ORBSYM"])
    except ValueError:
        raise ParseError(f"ORBSYM entries must be integers: {fields['ORBSYM']}") from None
    if len(orbsym) != norb:
        raise ParseError(f"ORBSYM has {len(orbsym)} entries, expected NORB={norb}")
    for s in orbsym:
        group.from_orbsym(s)

    h = np.zeros((norb, norb))
    g = np.zeros((norb,) * 4)
    constant = 0.0
    first_line = text[: m.end()].count("\n") + 1
    for lineno, line in enumerate(text[m.end():].splitlines(), start=first_line):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise ParseError(f"line {lineno}: expected 'value i j k l', got {line.strip()!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed numeric literal in {line.strip()!r}") from None
        if not all(0 <= x <= norb for x in (i, j, k, l)):
            raise ParseError(f"line {lineno}: orbital index out of range 0..{norb}")
        if i == j == k == l == 0:
            constant = value
        elif k == l == 0:
            if i == 0 or j == 0:
                raise ParseError(f"line {lineno}: invalid one-electron index pair ({i}, {j})")
            h[i - 1, j - 1] = h[j - 1, i - 1] = value
        elif i == 0 or j == 0:
            # orbital-energy records (i 0 0 0) carry no Hamiltonian information
            if j == k == l == 0:
                continue
            raise ParseError(f"line {lineno}: invalid index pattern {(i, j, k, l)}")
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                g[a, b, c, d] = value
    return IntegralSet(h, g, constant, nelec, ms2, orbsym, group)


def read_fcidump(path: str | Path, group: PointGroupTable = D2H) -> IntegralSet:
    with io.open(path, encoding="utf-8") as fh:
        return parse_fcidump(fh, group)


def determinant_quantum_numbers(det: Determinant, basis: SpinOrbitalBasis) -> tuple[int, float, Irrep]:
    """Return (N, Sz, irrep) of a determinant."""
    na, nb = det.alpha.bit_count(), det.beta.bit_count()
    irrep = basis.mask_irrep(det.alpha) * basis.mask_irrep(det.beta)
    return na + nb, (na - nb) / 2, irrep


def _sign_below(mask: int, so: int) -> int:
    return -1 if (mask & ((1 << so) - 1)).bit_count() & 1 else 1


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _SpinOrbitalHamiltonian:
    """Cached spin-orbital integrals for repeated Slater-Condon evaluation."""

    def __init__(self, ints: IntegralSet):
        self.norb = ints.norb
        self.constant = ints.constant
        self.hso, self.vso = ints.spin_orbital_integrals()

    def element(self, bra: Determinant, ket: Determinant) -> float:
        n = self.norb
        b, k = bra.spin_orbital_mask(n), ket.spin_orbital_mask(n)
        if bra.alpha.bit_count() != ket.alpha.bit_count() or bra.beta.bit_count() != ket.beta.bit_count():
            return 0.0
        diff = b ^ k
        ndiff = diff.bit_count()
        if ndiff == 0:
            occ = _bits(k)
            e = self.constant + sum(self.hso[i, i] for i in occ)
            if occ:
                idx = np.array(occ)
                e += 0.5 * np.einsum("ijij->", self.vso[np.ix_(idx, idx, idx, idx)])
            return float(e)
        if ndiff == 2:
            (i,) = _bits(k & diff)  # annihilated from ket
            (a,) = _bits(b & diff)  # created in bra
            sign = _sign_below(k, i)
            sign *= _sign_below(k ^ (1 << i), a)
            occ = _bits(k & b)
            val = self.hso[a, i] + sum(self.vso[a, j, i, j] for j in occ)
            return float(sign * val)
        if ndiff == 4:
            i, j = _bits(k & diff)
            a, c = _bits(b & diff)
            # bra = a+_a a+_c a_j a_i |ket>
            m = k
            sign = _sign_below(m, i)
            m ^= 1 << i
            sign *= _sign_below(m, j)
            m ^= 1 << j
            sign *= _sign_below(m, c)
            m |= 1 << c
            sign *= _sign_below(m, a)
            return float(sign * self.vso[a, c, i, j])
        return 0.0


def slater_condon_element(bra: Determinant, ket: Determinant, ints: IntegralSet) -> float:
    """<bra|H|ket> in hartree, including the scalar constant on the diagonal."""
    return _SpinOrbitalHamiltonian(ints).element(bra, ket)


def build_matrix(dets: Sequence[Determinant], ints: IntegralSet) -> np.ndarray:
    """Dense Hamiltonian over an ordered determinant list."""
    if not dets:
        raise SizeError("cannot build a Hamiltonian over an empty determinant list")
    ham = _SpinOrbitalHamiltonian(ints)
    n = len(dets)
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            H[i, j] = H[j, i] = ham.element(dets[i], dets[j])
    return H


def _move(mask: int, src: int, dst: int) -> tuple[int, int]:
    """a+_dst a_src applied to mask; returns (new_mask, sign) or (-1, 0)."""
    if not mask >> src & 1:
        return -1, 0
    sign = _sign_below(mask, src)
    mask ^= 1 << src
    if mask >> dst & 1:
        return -1, 0
    sign *= _sign_below(mask, dst)
    return mask | (1 << dst), sign


def build_s2_matrix(dets: Sequence[Determinant], norb: int) -> np.ndarray:
    """Matrix of S^2 = S-S+ + Sz(Sz+1) over a determinant list.

    The list must be closed under the spin-flip moves generated by S+ and S-
    (complete (N, Sz) or (N, Sz, irrep) blocks are); components leaving the
    list are dropped.
    """
    index = {d: i for i, d in enumerate(dets)}
    n = len(dets)
    S2 = np.zeros((n, n))
    for col, det in enumerate(dets):
        sz = (det.alpha.bit_count() - det.beta.bit_count()) / 2
        S2[col, col] += sz * (sz + 1)
        k = det.spin_orbital_mask(norb)
        for q in range(norb):
            # S+ term a+_{q alpha} a_{q beta}
            mid, s1 = _move(k, norb + q, q)
            if s1 == 0:
                continue
            for p in range(norb):
                # S- term a+_{p beta} a_{p alpha}
                out, s2 = _move(mid, p, norb + p)
                if s2 == 0:
                    continue
                row = index.get(Determinant.from_spin_orbital_mask(out, norb))
                if row is not None:
                    S2[row, col] += s1 * s2
    return S2


def closed_shell(n_doubly: int) -> Determinant:
    mask = (1 << n_doubly) - 1
    return Determinant(mask, mask)


def occupied(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    return _bits(mask)


def determinants_from_occupations(occs: Iterable[tuple[Iterable[int], Iterable[int]]]) -> list[Determinant]:
    return [Determinant(sum(1 << p for p in a), sum(1 << p for p in b)) for a, b in occs]

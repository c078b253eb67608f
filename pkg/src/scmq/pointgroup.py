"""Abelian point groups (D2h and subgroups).

Irreps are stored as small integer codes such that the direct product of two
irreps is the bitwise XOR of their codes. Code = FCIDUMP ORBSYM index - 1,
using the Cotton ordering that Psi4 writes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from .errors import ConfigurationError, ParseError


@dataclass(frozen=True)
class Irrep:
    code: int
    name: str
    group: str

    def __mul__(self, other: "Irrep") -> "Irrep":
        return irrep_product(self, other)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PointGroupTable:
    name: str
    irreps: tuple[Irrep, ...]

    @property
    def identity(self) -> Irrep:
        return self.irreps[0]

    @property
    def order(self) -> int:
        return len(self.irreps)

    def __getitem__(self, code: int) -> Irrep:
        return self.irreps[code]

    def __iter__(self):
        return iter(self.irreps)

    def __contains__(self, irrep: object) -> bool:
        return isinstance(irrep, Irrep) and irrep.group == self.name

    def labels(self) -> list[str]:
        return [ir.name for ir in self.irreps]

    def from_orbsym(self, index: int) -> Irrep:
        """Irrep for a 1-based FCIDUMP ORBSYM entry."""
        if not 1 <= index <= self.order:
            raise ParseError(f"ORBSYM value {index} outside 1..{self.order} for {self.name}")
        return self.irreps[index - 1]


def _table(name: str, labels: Iterable[str]) -> PointGroupTable:
    return PointGroupTable(name, tuple(Irrep(i, lab, name) for i, lab in enumerate(labels)))


GROUPS: dict[str, PointGroupTable] = {
    t.name.lower(): t
    for t in (
        _table("D2h", ["Ag", "B1g", "B2g", "B3g", "Au", "B1u", "B2u", "B3u"]),
        _table("D2", ["A", "B1", "B2", "B3"]),
        _table("C2v", ["A1", "A2", "B1", "B2"]),
        _table("C2h", ["Ag", "Bg", "Au", "Bu"]),
        _table("C2", ["A", "B"]),
        _table("Cs", ["A'", "A\""]),
        _table("Ci", ["Ag", "Au"]),
        _table("C1", ["A"]),
    )
}
D2H = GROUPS["d2h"]


def get_group(name: str) -> PointGroupTable:
    try:
        return GROUPS[name.lower()]
    except KeyError:
        raise ParseError(f"unknown point group {name!r}; supported: {sorted(t.name for t in GROUPS.values())}") from None


def irrep_product(a: Irrep, b: Irrep) -> Irrep:
    if a.group != b.group:
        raise ConfigurationError(f"cannot multiply irreps of {a.group} and {b.group}")
    return GROUPS[a.group.lower()][a.code ^ b.code]


def irrep_from_label(name: str, table: PointGroupTable = D2H) -> Irrep:
    key = name.strip().lower()
    for ir in table:
        if ir.name.lower() == key:
            return ir
    raise ParseError(f"unknown irrep {name!r} for {table.name}; valid labels: {', '.join(table.labels())}")


def direct_product(irreps: Iterable[Irrep], table: PointGroupTable = D2H) -> Irrep:
    """Product of any number of irreps (identity for an empty sequence)."""
    return reduce(irrep_product, irreps, table.identity)

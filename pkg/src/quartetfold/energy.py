"""Nearest-neighbor stack free energies and objective weights.

The thermodynamic data lives in a text file, not in code, so that the scoring
model can be swapped or truncated for testing. Each record assigns one free
energy (kcal/mol, 37 C) to an ordered pair of stacked base pairs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from importlib import resources
from typing import TextIO

from .quartets import Quartet
from .sequence import Base, RnaSequence, is_valid_pair

PairKey = tuple[Base, Base]
StackKey = tuple[PairKey, PairKey]

DEFAULT_TABLE_RESOURCE = "stack_energies.txt"


class StackTableError(ValueError):
    """Malformed stack-table input."""


class MissingStackError(LookupError):
    """A quartet's base content has no entry in the stack table."""


@dataclass(frozen=True)
class StackTable:
    """Lookup from ((b_i, b_j), (b_i+1, b_j-1)) to stack free energy."""

    energies: dict[StackKey, float]

    def __len__(self) -> int:
        return len(self.energies)

    def energy(self, outer: PairKey, inner: PairKey) -> float:
        try:
            return self.energies[(outer, inner)]
        except KeyError:
            raise MissingStackError(
                f"no stack energy for outer {outer[0]}{outer[1]} over inner {inner[0]}{inner[1]}"
            ) from None


def _parse_pair_token(token: str, lineno: int) -> PairKey:
    if len(token) != 2:
        raise StackTableError(f"line {lineno}: pair {token!r} must be two bases")
    try:
        pair = (Base(token[0].upper()), Base(token[1].upper()))
    except ValueError:
        raise StackTableError(f"line {lineno}: invalid base in pair {token!r}") from None
    if not is_valid_pair(*pair):
        raise StackTableError(f"line {lineno}: {token!r} is not a valid base pair")
    return pair


def load_stack_table(source: str | TextIO) -> StackTable:
    """Parse `<outer-pair> <inner-pair> <energy>` records.

    '#' starts a comment, blank lines are skipped, duplicate keys are
    rejected. Pairs are written 5'->3' as two characters each.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    energies: dict[StackKey, float] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise StackTableError(f"line {lineno}: expected 'XY ZW energy', got {raw.strip()!r}")
        outer = _parse_pair_token(fields[0], lineno)
        inner = _parse_pair_token(fields[1], lineno)
        try:
            value = float(fields[2])
        except ValueError:
            raise StackTableError(f"line {lineno}: bad energy value {fields[2]!r}") from None
        key = (outer, inner)
        if key in energies:
            raise StackTableError(f"line {lineno}: duplicate entry for {fields[0]} {fields[1]}")
        energies[key] = value
    return StackTable(energies)


def load_default_stack_table() -> StackTable:
    """Load the packaged Turner-style table; every entry must be stabilizing."""
    text = resources.files("quartetfold.data").joinpath(DEFAULT_TABLE_RESOURCE).read_text()
    table = load_stack_table(text)
    bad = {k: v for k, v in table.energies.items() if v >= 0}
    if bad:
        raise StackTableError(f"default table contains non-negative energies: {bad}")
    return table


def quartet_energy(table: StackTable, seq: RnaSequence, q: Quartet) -> float:
    """Free energy of the quartet's stacked pairs, straight from the table."""
    outer = (seq.base(q.i), seq.base(q.j))
    inner = (seq.base(q.i + 1), seq.base(q.j - 1))
    try:
        return table.energy(outer, inner)
    except MissingStackError:
        raise MissingStackError(
            f"quartet ({q.i},{q.j}): no energy for "
            f"{outer[0]}{outer[1]} over {inner[0]}{inner[1]}"
        ) from None


@dataclass(frozen=True)
class ObjectiveWeights:
    """Scoring weights: stacking reward, AU-end penalty, constraint penalty.

    constraint_penalty=None means "auto": a per-problem sufficient bound is
    computed when the program is converted to a QUBO.
    """

    reward: float = -1.0
    ua_penalty: float = 0.5
    constraint_penalty: float | None = None

    def __post_init__(self) -> None:
        if self.reward > 0:
            raise ValueError("reward must be <= 0 (it lowers the energy)")
        if self.ua_penalty < 0:
            raise ValueError("ua_penalty must be >= 0")
        if self.constraint_penalty is not None and self.constraint_penalty <= 0:
            raise ValueError("constraint_penalty must be positive when explicit")

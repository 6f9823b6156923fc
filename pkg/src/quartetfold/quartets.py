"""Quartet variables and the conflict / stacking / AU-end preprocessing.

A quartet is a stack of two consecutive base pairs (i, j) and (i+1, j-1); one
binary decision variable is attached to each. Before any objective can be
built, the candidate quartets are enumerated and scanned pairwise for
conflicts (crossing pairs or a base claimed by two different partners) and
for stacking adjacency (one quartet continuing the other's helix).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .sequence import Base, RnaSequence, is_valid_pair

DEFAULT_MIN_LOOP = 3

QUA_MODES = ("outer", "inner")


class Pair(NamedTuple):
    """Base pair between 1-based positions i < j."""

    i: int
    j: int


@dataclass(frozen=True, order=True)
class Quartet:
    """Two stacked pairs (i, j) and (i+1, j-1), the decision-variable unit."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if not self.i + 1 < self.j - 1:
            raise ValueError(f"quartet ({self.i},{self.j}) has no room for an inner pair")

    @property
    def outer(self) -> Pair:
        return Pair(self.i, self.j)

    @property
    def inner(self) -> Pair:
        return Pair(self.i + 1, self.j - 1)

    @property
    def pairs(self) -> tuple[Pair, Pair]:
        return (self.outer, self.inner)


def pairs_cross(p: Pair, q: Pair) -> bool:
    """Pseudoknot geometry: p.i < q.i < p.j < q.j or the mirror image."""
    return (p.i < q.i < p.j < q.j) or (q.i < p.i < q.j < p.j)


def pairs_conflict_on_base(p: Pair, q: Pair) -> bool:
    """Two distinct pairs claiming a common position."""
    if p == q:
        return False
    return p.i in (q.i, q.j) or p.j in (q.i, q.j)


def can_stack(q1: Quartet, q2: Quartet) -> bool:
    """True when one quartet continues the other's helix (shared pair)."""
    return q2.outer == q1.inner or q1.outer == q2.inner


def quartets_conflict(q1: Quartet, q2: Quartet) -> bool:
    """Crossing, or a double-booked base, between any constituent pairs.

    Stacked quartets share one identical pair; the shared pair is consistent
    and does not count as a conflict.
    """
    for a in q1.pairs:
        for b in q2.pairs:
            if pairs_cross(a, b) or pairs_conflict_on_base(a, b):
                return True
    return False


def enumerate_quartets(seq: RnaSequence, min_loop: int = DEFAULT_MIN_LOOP) -> list[Quartet]:
    """All (i, j) whose outer pair (i, j) and inner pair (i+1, j-1) are valid.

    The hairpin constraint applies to the inner pair: at least min_loop
    positions must fit strictly inside it, i.e. j - i >= min_loop + 3.
    Lexicographic (i, j) order fixes the variable (and qubit) indexing.
    """
    if min_loop < 0:
        raise ValueError("min_loop must be >= 0")
    n = len(seq)
    found = []
    for i in range(1, n + 1):
        for j in range(i + min_loop + 3, n + 1):
            if is_valid_pair(seq.base(i), seq.base(j)) and is_valid_pair(
                seq.base(i + 1), seq.base(j - 1)
            ):
                found.append(Quartet(i, j))
    return found


def _is_au(a: Base, b: Base) -> bool:
    return (a, b) in ((Base.A, Base.U), (Base.U, Base.A))


@dataclass(frozen=True)
class QuartetModel:
    """Preprocessed problem data for one sequence.

    quartets fixes the variable order. conflicts and stacks hold unordered
    index pairs (a < b); au_end holds indices of quartets whose stack-end
    pair is AU/UA (which end is configurable via qua_mode).
    """

    sequence: RnaSequence
    min_loop: int
    qua_mode: str
    quartets: tuple[Quartet, ...]
    conflicts: frozenset[tuple[int, int]]
    stacks: frozenset[tuple[int, int]]
    au_end: frozenset[int]

    @property
    def num_vars(self) -> int:
        return len(self.quartets)

    def stack_neighbors(self, k: int) -> frozenset[int]:
        """Indices stackable with quartet k."""
        return frozenset(b if a == k else a for a, b in self.stacks if k in (a, b))

    def to_dict(self) -> dict:
        """JSON-ready dump with 1-based positions."""
        return {
            "sequence": str(self.sequence),
            "min_loop": self.min_loop,
            "qua_mode": self.qua_mode,
            "num_vars": self.num_vars,
            "quartets": [
                {"index": k, "outer": list(q.outer), "inner": list(q.inner)}
                for k, q in enumerate(self.quartets)
            ],
            "conflicts": sorted(list(p) for p in self.conflicts),
            "stacks": sorted(list(p) for p in self.stacks),
            "au_end": sorted(self.au_end),
        }


def build_model(
    seq: RnaSequence,
    min_loop: int = DEFAULT_MIN_LOOP,
    qua_mode: str = "outer",
) -> QuartetModel:
    """Enumerate quartets and run the pairwise preprocessing scans.

    qua_mode selects which pair marks an AU stack end: "outer" uses (i, j),
    "inner" uses (i+1, j-1).
    """
    if qua_mode not in QUA_MODES:
        raise ValueError(f"qua_mode must be one of {QUA_MODES}, got {qua_mode!r}")
    quartets = tuple(enumerate_quartets(seq, min_loop))
    conflicts = set()
    stacks = set()
    for a in range(len(quartets)):
        for b in range(a + 1, len(quartets)):
            if can_stack(quartets[a], quartets[b]):
                stacks.add((a, b))
            if quartets_conflict(quartets[a], quartets[b]):
                conflicts.add((a, b))
    au_end = set()
    for k, q in enumerate(quartets):
        end = q.outer if qua_mode == "outer" else q.inner
        if _is_au(seq.base(end.i), seq.base(end.j)):
            au_end.add(k)
    return QuartetModel(
        sequence=seq,
        min_loop=min_loop,
        qua_mode=qua_mode,
        quartets=quartets,
        conflicts=frozenset(conflicts),
        stacks=frozenset(stacks),
        au_end=frozenset(au_end),
    )

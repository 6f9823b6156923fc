"""RNA sequences, the base alphabet, and pairing rules."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class SequenceError(ValueError):
    """Input text is not a valid RNA sequence."""


class Base(Enum):
    """The four RNA nucleotides."""

    A = "A"
    C = "C"
    G = "G"
    U = "U"

    def __str__(self) -> str:
        return self.value


#: Watson-Crick pairs plus the GU wobble, as ordered (5' base, 3' base) tuples.
VALID_PAIRS = frozenset({
    (Base.A, Base.U), (Base.U, Base.A),
    (Base.C, Base.G), (Base.G, Base.C),
    (Base.G, Base.U), (Base.U, Base.G),
})


def is_valid_pair(a: Base, b: Base) -> bool:
    """True for the six allowed pairings; symmetric in its arguments."""
    return (a, b) in VALID_PAIRS


@dataclass(frozen=True)
class RnaSequence:
    """Immutable base string. Positions are 1-based throughout the API."""

    bases: tuple[Base, ...]

    def __post_init__(self) -> None:
        if len(self.bases) < 1:
            raise SequenceError("sequence must contain at least one base")

    def __len__(self) -> int:
        return len(self.bases)

    def __str__(self) -> str:
        return "".join(b.value for b in self.bases)

    def base(self, i: int) -> Base:
        """Base at 1-based position i."""
        if not 1 <= i <= len(self.bases):
            raise IndexError(f"position {i} outside 1..{len(self.bases)}")
        return self.bases[i - 1]


def parse_sequence(text: str) -> RnaSequence:
    """Parse a base string; lowercase is accepted and T is read as U.

    Raises SequenceError naming the 1-based position of the first character
    outside {A, C, G, U, T}.
    """
    stripped = text.strip()
    if not stripped:
        raise SequenceError("empty sequence")
    bases = []
    for pos, ch in enumerate(stripped, start=1):
        up = ch.upper()
        if up == "T":
            up = "U"
        try:
            bases.append(Base(up))
        except ValueError:
            raise SequenceError(f"invalid base {ch!r} at position {pos}") from None
    return RnaSequence(tuple(bases))


def parse_fasta(text: str) -> RnaSequence:
    """Parse plain or FASTA-style text.

    Lines starting with '>' are ignored; the remaining lines are stripped and
    concatenated before parsing.
    """
    body = "".join(
        line.strip() for line in text.splitlines()
        if not line.lstrip().startswith(">")
    )
    return parse_sequence(body)


_ALPHABET = (Base.A, Base.C, Base.G, Base.U)


def random_sequence(length: int, rng: np.random.Generator) -> RnaSequence:
    """Sequence of i.i.d. uniform bases; deterministic for a fixed rng state."""
    if length < 1:
        raise ValueError("length must be >= 1")
    draws = rng.integers(0, 4, size=length)
    return RnaSequence(tuple(_ALPHABET[k] for k in draws))

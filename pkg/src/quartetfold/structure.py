"""Map solution bitstrings back to base pairs and render dot-bracket text.

Dot-bracket is the interchange format of RNA tooling: '.' marks an unpaired
position and matched brackets mark pairs. Crossing pairs cannot share one
bracket alphabet, so additional tiers '[]' and '{}' are assigned greedily.
"""

from __future__ import annotations

from dataclasses import dataclass

from .quartets import Pair, QuartetModel, pairs_cross


class InfeasibleStructureError(ValueError):
    """A bitstring selects pairings that double-book at least one base."""


class RenderError(ValueError):
    """The structure needs more bracket tiers than dot-bracket offers."""


BRACKET_TIERS = (("(", ")"), ("[", "]"), ("{", "}"))


@dataclass(frozen=True)
class SecondaryStructure:
    """A set of base pairs over positions 1..length, one partner per base."""

    length: int
    pairs: tuple[Pair, ...]

    def __post_init__(self) -> None:
        seen: dict[int, Pair] = {}
        for p in self.pairs:
            if not 1 <= p.i < p.j <= self.length:
                raise ValueError(f"pair {tuple(p)} outside 1..{self.length}")
            for pos in p:
                if pos in seen:
                    raise InfeasibleStructureError(
                        f"position {pos} paired twice: {tuple(seen[pos])} and {tuple(p)}"
                    )
                seen[pos] = p


def decode(bits: str, model: QuartetModel) -> SecondaryStructure:
    """Union of the constituent pairs of all selected quartets.

    The shared pair of two stacked quartets merges; a base claimed by two
    different partners raises InfeasibleStructureError naming the position
    (this signals an infeasible bitstring, e.g. from an undersized
    constraint penalty).
    """
    if len(bits) != model.num_vars:
        raise ValueError(f"bitstring length {len(bits)} != {model.num_vars} variables")
    chosen: set[Pair] = set()
    for k, flag in enumerate(bits):
        if flag == "1":
            chosen.update(model.quartets[k].pairs)
        elif flag != "0":
            raise ValueError(f"bitstring {bits!r} contains characters other than 0/1")
    return SecondaryStructure(length=len(model.sequence), pairs=tuple(sorted(chosen)))


def to_dot_bracket(structure: SecondaryStructure) -> str:
    """Dot-bracket text; crossing pairs go to higher bracket tiers."""
    tiers: list[list[Pair]] = []
    assigned: list[tuple[Pair, int]] = []
    for p in sorted(structure.pairs):
        for level, members in enumerate(tiers):
            if not any(pairs_cross(p, q) for q in members):
                members.append(p)
                assigned.append((p, level))
                break
        else:
            if len(tiers) >= len(BRACKET_TIERS):
                raise RenderError(
                    f"structure needs more than {len(BRACKET_TIERS)} bracket tiers"
                )
            tiers.append([p])
            assigned.append((p, len(tiers) - 1))
    out = ["."] * structure.length
    for p, level in assigned:
        open_ch, close_ch = BRACKET_TIERS[level]
        out[p.i - 1] = open_ch
        out[p.j - 1] = close_ch
    return "".join(out)


def has_pseudoknot(structure: SecondaryStructure) -> bool:
    """True when any two pairs cross."""
    pairs = structure.pairs
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            if pairs_cross(pairs[a], pairs[b]):
                return True
    return False


def structure_record(sequence: str, structure: SecondaryStructure) -> str:
    """Two-line text block: the sequence and its dot-bracket rendering."""
    return f"{sequence}\n{to_dot_bracket(structure)}\n"

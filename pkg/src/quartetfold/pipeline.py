"""Composition helpers: sequence -> model -> program -> QUBO in one call."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import ObjectiveWeights, StackTable, load_default_stack_table
from .qubo import QuadraticProgram, Qubo, build_program, default_penalty, to_qubo
from .quartets import DEFAULT_MIN_LOOP, QuartetModel, build_model
from .sequence import RnaSequence, parse_sequence, random_sequence


@dataclass(frozen=True)
class Problem:
    """Everything derived from one sequence under one set of weights."""

    sequence: RnaSequence
    model: QuartetModel
    program: QuadraticProgram
    qubo: Qubo
    penalty: float


def compile_problem(
    sequence: RnaSequence | str,
    table: StackTable | None = None,
    weights: ObjectiveWeights | None = None,
    min_loop: int = DEFAULT_MIN_LOOP,
    qua_mode: str = "outer",
    ua_term: str = "literal",
) -> Problem:
    """Run the full compile chain with the packaged energy table by default."""
    seq = parse_sequence(sequence) if isinstance(sequence, str) else sequence
    table = table if table is not None else load_default_stack_table()
    weights = weights if weights is not None else ObjectiveWeights()
    model = build_model(seq, min_loop, qua_mode=qua_mode)
    program = build_program(model, table, weights, ua_term=ua_term)
    penalty = (
        weights.constraint_penalty
        if weights.constraint_penalty is not None
        else default_penalty(program)
    )
    qubo = to_qubo(program, penalty)
    return Problem(sequence=seq, model=model, program=program, qubo=qubo, penalty=penalty)


def find_instances(
    num_vars: int,
    count: int,
    rng: np.random.Generator,
    min_loop: int = DEFAULT_MIN_LOOP,
    length_range: tuple[int, int] = (12, 30),
    max_attempts: int = 200_000,
) -> list[RnaSequence]:
    """Random sequences whose quartet model has exactly num_vars variables.

    Rejection sampling over uniform lengths in length_range; deterministic
    for a fixed rng state.
    """
    lo, hi = length_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad length range {length_range}")
    found: list[RnaSequence] = []
    for _ in range(max_attempts):
        if len(found) == count:
            return found
        length = int(rng.integers(lo, hi + 1))
        seq = random_sequence(length, rng)
        if len(build_model(seq, min_loop).quartets) == num_vars:
            found.append(seq)
    if len(found) < count:
        raise RuntimeError(
            f"could not find {count} sequences with {num_vars} variables "
            f"in {max_attempts} attempts"
        )
    return found

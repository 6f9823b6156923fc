"""Classical baseline solvers and the runtime scaling study.

solve_exhaustive enumerates every bitstring and is the reference oracle for
small instances. solve_branch_bound works on the constrained program and uses
the conflict constraints for propagation. solve_anneal is a single-flip
simulated-annealing heuristic for instances beyond the exhaustive cap.

Work is reported in solver-internal units (bitstrings evaluated, nodes
expanded, flips attempted) next to wall time so scaling studies stay
machine-independent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .energy import ObjectiveWeights, StackTable, load_default_stack_table
from .qubo import (
    EXHAUSTIVE_CAP,
    QuadraticProgram,
    Qubo,
    bitstring,
    build_program,
    energies_vector,
    evaluate,
    program_value,
)
from .quartets import build_model
from .sequence import random_sequence


class SolveMethod(str, Enum):
    EXHAUSTIVE = "exhaustive"
    BRANCH_BOUND = "branch_bound"
    ANNEAL = "anneal"


@dataclass(frozen=True)
class Solution:
    """One solver run: the bitstring, its energy, and how it was obtained.

    ties counts optima at the same energy when the solver can see them
    (exhaustive enumeration); other methods report 1.
    """

    bits: str
    energy: float
    method: SolveMethod
    elapsed: float
    proven_optimal: bool
    work_units: int
    ties: int = 1


def solve_exhaustive(q: Qubo, cap: int = EXHAUSTIVE_CAP) -> Solution:
    """Global minimum over all 2^n bitstrings; ties break to the
    lexicographically smallest bitstring."""
    start = time.perf_counter()
    energies = energies_vector(q, cap=cap)
    best = int(np.argmin(energies))  # first minimum == lexicographically smallest
    ties = int(np.count_nonzero(energies == energies[best]))
    return Solution(
        bits=bitstring(best, q.num_vars),
        energy=float(energies[best]),
        method=SolveMethod.EXHAUSTIVE,
        elapsed=time.perf_counter() - start,
        proven_optimal=True,
        work_units=energies.size,
        ties=ties,
    )


def solve_branch_bound(
    qp: QuadraticProgram,
    node_limit: int | None = None,
    time_limit: float | None = None,
) -> Solution:
    """Exact depth-first branch and bound on the constrained program.

    Setting a variable to 1 forces every conflicting variable to 0. The
    bound adds, per free variable, the most optimistic contribution it could
    make: its linear coefficient plus all negative incident quadratic
    coefficients, floored at zero. Returns best-so-far with
    proven_optimal=False if a limit is hit.
    """
    start = time.perf_counter()
    n = qp.num_vars
    linear = np.zeros(n)
    for i, c in qp.linear.items():
        linear[i] = c
    quad_adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (i, j), c in qp.quadratic.items():
        quad_adj[i].append((j, c))
        quad_adj[j].append((i, c))
    conflict_adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in qp.constraints:
        conflict_adj[i].append(j)
        conflict_adj[j].append(i)

    # Optimistic per-variable contribution; drives both the bound and the
    # branching order (most promising variables first).
    if n:
        optimistic = np.minimum(
            0.0,
            linear + np.array([sum(min(0.0, c) for _, c in quad_adj[v]) for v in range(n)]),
        )
    else:
        optimistic = np.zeros(0)
    order = sorted(range(n), key=lambda v: optimistic[v])

    assign = np.full(n, -1, dtype=np.int8)
    # field[u] = linear[u] + sum of quadratic coefficients to variables
    # currently set to 1; there are no diagonal terms, so field[v] is exactly
    # the objective change of setting v to 1.
    field = linear.copy()
    best_bits = np.zeros(n, dtype=np.int8)
    best_value = qp.constant
    nodes = 0
    aborted = False

    def limits_hit() -> bool:
        if node_limit is not None and nodes >= node_limit:
            return True
        if time_limit is not None and time.perf_counter() - start > time_limit:
            return True
        return False

    def descend(pos: int, current: float, remaining_opt: float) -> None:
        nonlocal nodes, best_value, aborted
        if aborted:
            return
        while pos < n and assign[order[pos]] != -1:
            pos += 1
        if pos == n:
            if current < best_value - 1e-15:
                best_value = current
                np.copyto(best_bits, np.maximum(assign, 0))
            return
        if current + remaining_opt >= best_value - 1e-12:
            return
        nodes += 1
        if limits_hit():
            aborted = True
            return
        v = order[pos]
        rem = remaining_opt - optimistic[v]

        if all(assign[u] != 1 for u in conflict_adj[v]):
            assign[v] = 1
            gained = field[v]
            for u, c in quad_adj[v]:
                field[u] += c
            forced = [u for u in conflict_adj[v] if assign[u] == -1]
            rem_forced = rem
            for u in forced:
                assign[u] = 0
                rem_forced -= optimistic[u]
            descend(pos + 1, current + gained, rem_forced)
            for u in forced:
                assign[u] = -1
            for u, c in quad_adj[v]:
                field[u] -= c
            assign[v] = -1

        assign[v] = 0
        descend(pos + 1, current, rem)
        assign[v] = -1

    descend(0, qp.constant, float(np.sum(optimistic)))

    bits = "".join("1" if b else "0" for b in best_bits)
    return Solution(
        bits=bits,
        energy=program_value(qp, bits),  # exact re-evaluation, no tree-order drift
        method=SolveMethod.BRANCH_BOUND,
        elapsed=time.perf_counter() - start,
        proven_optimal=not aborted,
        work_units=nodes,
    )


def solve_anneal(
    q: Qubo,
    sweeps: int = 200,
    restarts: int = 8,
    seed: int | np.random.SeedSequence = 0,
) -> Solution:
    """Single-flip simulated annealing with a geometric temperature schedule.

    Every restart owns an independent random stream derived from
    (seed, restart index), so results do not depend on execution order; the
    restarts are advanced in lockstep here purely for speed.
    """
    if sweeps < 1 or restarts < 1:
        raise ValueError("sweeps and restarts must be >= 1")
    start = time.perf_counter()
    n = q.num_vars
    if n == 0:
        return Solution(
            bits="",
            energy=float(q.constant),
            method=SolveMethod.ANNEAL,
            elapsed=time.perf_counter() - start,
            proven_optimal=False,
            work_units=0,
        )

    linear = np.zeros(n)
    for i, c in q.linear.items():
        linear[i] = c
    quad = np.zeros((n, n))
    for (i, j), c in q.quadratic.items():
        quad[i, j] += c
        quad[j, i] += c

    base = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    streams = [np.random.default_rng(child) for child in base.spawn(restarts)]
    bits = np.stack([rng.integers(0, 2, size=n).astype(np.int8) for rng in streams])
    accept_draws = np.stack([rng.random((sweeps, n)) for rng in streams])

    # Temperature schedule spans the coefficient scale down to a quench.
    scale = max(float(np.max(np.abs(linear) + np.sum(np.abs(quad), axis=1))), 1e-9)
    temps = scale * np.geomspace(1.0, 1e-3, sweeps)

    fields = linear[None, :] + bits.astype(np.float64) @ quad
    energy = np.full(restarts, float(q.constant))
    for r in range(restarts):
        b = bits[r].astype(np.float64)
        energy[r] += float(linear @ b + 0.5 * b @ quad @ b)
    best_energy = energy.copy()
    best_bits = bits.copy()

    flips = 0
    for s in range(sweeps):
        t = temps[s]
        for v in range(n):
            delta = (1 - 2 * bits[:, v]) * fields[:, v]
            accept = (delta <= 0.0) | (accept_draws[:, s, v] < np.exp(
                np.clip(-delta / t, -700.0, 0.0)
            ))
            flips += restarts
            if not np.any(accept):
                continue
            change = np.where(accept, (1 - 2 * bits[:, v]).astype(np.float64), 0.0)
            fields += np.outer(change, quad[v])
            energy += np.where(accept, delta, 0.0)
            bits[:, v] = np.where(accept, 1 - bits[:, v], bits[:, v])
            improved = energy < best_energy
            if np.any(improved):
                best_energy = np.where(improved, energy, best_energy)
                best_bits[improved] = bits[improved]

    winner = int(np.argmin(best_energy))
    bits = "".join("1" if b else "0" for b in best_bits[winner])
    return Solution(
        bits=bits,
        energy=evaluate(q, bits),  # exact re-evaluation, no accumulation drift
        method=SolveMethod.ANNEAL,
        elapsed=time.perf_counter() - start,
        proven_optimal=False,
        work_units=flips,
    )


@dataclass(frozen=True)
class TimingRow:
    length: int
    seed: int
    num_vars: int
    num_constraints: int
    work_units: int
    wall_ms: float
    energy: float
    proven_optimal: bool


def timing_study(
    lengths: list[int],
    samples_per_length: int,
    seed: int = 0,
    min_loop: int = 3,
    table: StackTable | None = None,
    weights: ObjectiveWeights | None = None,
    node_limit: int | None = None,
) -> list[TimingRow]:
    """Branch-and-bound work and wall time over random sequences per length.

    Deterministic for a fixed seed apart from the wall_ms column.
    """
    if samples_per_length < 1:
        raise ValueError("samples_per_length must be >= 1")
    table = table if table is not None else load_default_stack_table()
    weights = weights if weights is not None else ObjectiveWeights()
    children = np.random.SeedSequence(seed).spawn(len(lengths) * samples_per_length)
    rows = []
    for li, length in enumerate(lengths):
        for s in range(samples_per_length):
            child = children[li * samples_per_length + s]
            sample_seed = int(child.generate_state(1)[0])
            seq = random_sequence(length, np.random.default_rng(child))
            model = build_model(seq, min_loop)
            program = build_program(model, table, weights)
            sol = solve_branch_bound(program, node_limit=node_limit)
            rows.append(
                TimingRow(
                    length=length,
                    seed=sample_seed,
                    num_vars=program.num_vars,
                    num_constraints=len(program.constraints),
                    work_units=sol.work_units,
                    wall_ms=sol.elapsed * 1e3,
                    energy=sol.energy,
                    proven_optimal=sol.proven_optimal,
                )
            )
    return rows

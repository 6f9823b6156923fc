"""Independent oracles used by the tests.

Everything here deliberately re-derives results through a different route
than the package (dense matrix products, double loops, literal formula
evaluation) so that agreement is meaningful.
"""

from __future__ import annotations

import numpy as np

from quartetfold.quartets import QuartetModel
from quartetfold.qubo import QuadraticProgram, Qubo
from quartetfold.sequence import RnaSequence, is_valid_pair
from quartetfold.simulator import Ansatz

I2 = np.eye(2, dtype=complex)
Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def dense_ry(theta: float) -> np.ndarray:
    return np.cos(theta / 2.0) * I2 - 1.0j * np.sin(theta / 2.0) * Y


def gate_on(unitary: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Embed a one-qubit gate; qubit 0 is the most significant bit."""
    out = np.eye(1, dtype=complex)
    for q in range(n):
        out = np.kron(out, unitary if q == qubit else I2)
    return out


def dense_cz(a: int, b: int, n: int) -> np.ndarray:
    diag = np.ones(2**n, dtype=complex)
    for k in range(2**n):
        if (k >> (n - 1 - a)) & 1 and (k >> (n - 1 - b)) & 1:
            diag[k] = -1.0
    return np.diag(diag)


def dense_statevector(ansatz: Ansatz, theta: np.ndarray) -> np.ndarray:
    """Full 2^n x 2^n matrix-product reference for the two-local circuit."""
    n = ansatz.num_qubits
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    for layer in range(ansatz.layers):
        for q in range(n):
            state = gate_on(dense_ry(theta[layer * n + q]), q, n) @ state
        for a, b in ansatz.cz_edges:
            state = dense_cz(a, b, n) @ state
    for q in range(n):
        state = gate_on(dense_ry(theta[ansatz.layers * n + q]), q, n) @ state
    return state


def brute_force_quartets(seq: RnaSequence, min_loop: int) -> list[tuple[int, int]]:
    """Double loop over all (i, j): both pairs valid, min_loop inside inner."""
    n = len(seq)
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j <= i:
                continue
            inner_i, inner_j = i + 1, j - 1
            if inner_j - inner_i < min_loop + 1:
                continue
            if not is_valid_pair(seq.base(i), seq.base(j)):
                continue
            if not is_valid_pair(seq.base(inner_i), seq.base(inner_j)):
                continue
            out.append((i, j))
    return sorted(out)


def naive_pairs_interact(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Crossing or base double-booking between two distinct pairs."""
    if p == q:
        return False
    (a, b), (c, d) = p, q
    crossing = (a < c < b < d) or (c < a < d < b)
    shared = len({a, b} & {c, d}) > 0
    return crossing or shared


def naive_quartet_conflict(q1: tuple[int, int], q2: tuple[int, int]) -> bool:
    pairs1 = [q1, (q1[0] + 1, q1[1] - 1)]
    pairs2 = [q2, (q2[0] + 1, q2[1] - 1)]
    return any(naive_pairs_interact(p, q) for p in pairs1 for q in pairs2)


def literal_objective(
    model: QuartetModel,
    energies: dict[int, float],
    reward: float,
    ua_penalty: float,
    bits: str,
) -> float:
    """Direct evaluation of the scoring formula, term by term:

    sum_i e_i q_i + reward * sum_i sum_{j stackable with i} q_i q_j
    + ua_penalty * sum_i sum_{k AU-ended} q_i (1 - q_k)
    """
    q = [int(c) for c in bits]
    total = sum(energies[i] * q[i] for i in range(len(q)))
    for i in range(len(q)):
        for j in model.stack_neighbors(i):
            total += reward * q[i] * q[j]
    for i in range(len(q)):
        for k in model.au_end:
            total += ua_penalty * q[i] * (1 - q[k])
    return total


def naive_qubo_value(q: Qubo, bits: str) -> float:
    """Term-by-term reference evaluator."""
    b = [int(c) for c in bits]
    total = q.constant
    for i, c in q.linear.items():
        total += c * b[i]
    for (i, j), c in q.quadratic.items():
        total += c * b[i] * b[j]
    return total


def feasible_bitstrings_min(qp: QuadraticProgram) -> tuple[str, float]:
    """Constrained minimum by filtering all bitstrings (exhaustive oracle)."""
    n = qp.num_vars
    best_bits, best_val = None, np.inf
    for k in range(2**n):
        bits = format(k, f"0{n}b") if n else ""
        b = [int(c) for c in bits]
        if any(b[i] + b[j] > 1 for i, j in qp.constraints):
            continue
        val = qp.constant
        for i, c in qp.linear.items():
            val += c * b[i]
        for (i, j), c in qp.quadratic.items():
            val += c * b[i] * b[j]
        if val < best_val:
            best_bits, best_val = bits, val
    return best_bits, float(best_val)


def random_feasible_bits(qp: QuadraticProgram, rng: np.random.Generator) -> str:
    """Random bitstring repaired greedily to satisfy all constraints."""
    n = qp.num_vars
    forbid = [set() for _ in range(n)]
    for i, j in qp.constraints:
        forbid[i].add(j)
        forbid[j].add(i)
    bits = [0] * n
    for v in rng.permutation(n):
        if rng.random() < 0.5 and not any(bits[u] for u in forbid[v]):
            bits[v] = 1
    return "".join(map(str, bits))


def parse_dot_bracket(text: str) -> set[tuple[int, int]]:
    """Recover the pair set from dot-bracket text (all three tiers)."""
    openers = {"(": 0, "[": 1, "{": 2}
    closers = {")": 0, "]": 1, "}": 2}
    stacks: list[list[int]] = [[], [], []]
    pairs = set()
    for pos, ch in enumerate(text, start=1):
        if ch in openers:
            stacks[openers[ch]].append(pos)
        elif ch in closers:
            pairs.add((stacks[closers[ch]].pop(), pos))
        elif ch != ".":
            raise ValueError(f"unexpected character {ch!r}")
    if any(s for s in stacks):
        raise ValueError("unbalanced brackets")
    return pairs


def random_qubo(n: int, rng: np.random.Generator, density: float = 0.5) -> Qubo:
    linear = {i: float(rng.normal(0, 2)) for i in range(n)}
    quadratic = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                quadratic[(i, j)] = float(rng.normal(0, 2))
    return Qubo(num_vars=n, linear=linear, quadratic=quadratic,
                constant=float(rng.normal(0, 1)))


def random_program(n: int, rng: np.random.Generator) -> QuadraticProgram:
    """Random constrained program shaped like the folding objectives."""
    linear = {i: float(-rng.uniform(0.5, 3.5)) for i in range(n)}
    quadratic = {}
    constraints = []
    for i in range(n):
        for j in range(i + 1, n):
            r = rng.random()
            if r < 0.25:
                quadratic[(i, j)] = float(rng.normal(-1, 1))
            elif r < 0.55:
                constraints.append((i, j))
    return QuadraticProgram(num_vars=n, linear=linear, quadratic=quadratic,
                            constant=float(rng.normal(0, 1)),
                            constraints=tuple(constraints))

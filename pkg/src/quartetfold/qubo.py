"""Compile a quartet model into quadratic binary objectives.

Three representations are produced along the way:

  QuadraticProgram -- the constrained form. Linear terms carry the per-quartet
      stack energies plus the expanded AU-end penalty; quadratic terms carry
      the stacking reward and the AU-end cross terms; at-most-one constraints
      forbid conflicting quartets.
  Qubo -- the unconstrained form. Each constraint q_a + q_b <= 1 is folded
      into the objective as +penalty * q_a * q_b (binary variables make slack
      variables unnecessary).
  IsingHamiltonian -- the spin form via q = (1 - z) / 2, bit 1 <-> spin -1.

Sign conventions: objectives are minimized; stacking rewards are negative,
penalties positive.

The double sum rewarding stacked quartets visits each unordered pair twice,
so a stackable pair (a, b) carries coefficient 2 * reward. The AU-end term
penalty * sum_i sum_{k in au_end} q_i * (1 - q_k) is expanded exactly over
binary variables (q_i^2 = q_i, so diagonal terms fold into the linear part).
Because that cross term grows with |au_end| even for structures without any
AU stack end, a simpler alternative ("linear" mode) that just adds the
penalty to each AU-ended quartet is available as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .energy import ObjectiveWeights, StackTable, quartet_energy
from .quartets import QuartetModel

UA_TERM_MODES = ("literal", "linear")

#: Largest variable count for which all 2^n bitstrings are enumerated.
EXHAUSTIVE_CAP = 26


def _key(a: int, b: int) -> tuple[int, int]:
    if a == b:
        raise ValueError(f"quadratic key ({a},{b}) must have distinct indices")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class QuadraticProgram:
    """Constrained quadratic binary objective.

    constraints lists index pairs (a, b) meaning q_a + q_b <= 1.
    """

    num_vars: int
    linear: dict[int, float]
    quadratic: dict[tuple[int, int], float]
    constant: float
    constraints: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Qubo:
    """Unconstrained quadratic binary objective, total over all bitstrings."""

    num_vars: int
    linear: dict[int, float]
    quadratic: dict[tuple[int, int], float]
    constant: float


@dataclass(frozen=True)
class IsingHamiltonian:
    """Spin form: energy(z) = offset + sum h_i z_i + sum J_ij z_i z_j."""

    num_vars: int
    h: dict[int, float]
    J: dict[tuple[int, int], float]
    offset: float


def build_program(
    model: QuartetModel,
    table: StackTable,
    weights: ObjectiveWeights,
    ua_term: str = "literal",
) -> QuadraticProgram:
    """Assemble the constrained objective from the preprocessed model.

    ua_term="literal" expands the full cross term described in the module
    docstring; ua_term="linear" adds weights.ua_penalty once per AU-ended
    quartet instead.
    """
    if ua_term not in UA_TERM_MODES:
        raise ValueError(f"ua_term must be one of {UA_TERM_MODES}, got {ua_term!r}")
    n = model.num_vars
    seq = model.sequence
    linear = {k: quartet_energy(table, seq, q) for k, q in enumerate(model.quartets)}
    quadratic: dict[tuple[int, int], float] = {}

    # Stacking reward: the symmetric double sum visits (a, b) and (b, a).
    for a, b in sorted(model.stacks):
        key = _key(a, b)
        quadratic[key] = quadratic.get(key, 0.0) + 2.0 * weights.reward

    p = weights.ua_penalty
    if p != 0.0 and model.au_end:
        if ua_term == "literal":
            m = len(model.au_end)
            for i in range(n):
                linear[i] += p * m
                if i in model.au_end:
                    # The i == k diagonal: p*q_i - p*q_i^2 cancels exactly.
                    linear[i] -= p
            # Cross terms: -p per ordered (i, k) with k in au_end, so an
            # unordered pair gets -2p when both ends are AU-ended.
            for i in range(n):
                for k in model.au_end:
                    if k == i:
                        continue
                    key = _key(i, k)
                    quadratic[key] = quadratic.get(key, 0.0) - p
        else:
            for k in model.au_end:
                linear[k] += p

    quadratic = {k: v for k, v in sorted(quadratic.items()) if v != 0.0}
    return QuadraticProgram(
        num_vars=n,
        linear=linear,
        quadratic=quadratic,
        constant=0.0,
        constraints=tuple(sorted(model.conflicts)),
    )


def _as_bits(bits: str | Sequence[int], num_vars: int) -> np.ndarray:
    if isinstance(bits, str):
        if len(bits) != num_vars:
            raise ValueError(f"bitstring length {len(bits)} != num_vars {num_vars}")
        if bits.strip("01") != "":
            raise ValueError(f"bitstring {bits!r} contains characters other than 0/1")
        return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(bits, dtype=np.int64)
    if arr.size != num_vars:
        raise ValueError(f"bit vector length {arr.size} != num_vars {num_vars}")
    return arr


def evaluate(q: Qubo, bits: str | Sequence[int]) -> float:
    """Objective value of one bitstring (defined for every bitstring)."""
    b = _as_bits(bits, q.num_vars)
    value = q.constant
    for i, c in q.linear.items():
        value += c * b[i]
    for (i, j), c in q.quadratic.items():
        value += c * b[i] * b[j]
    return float(value)


def program_value(qp: QuadraticProgram, bits: str | Sequence[int]) -> float:
    """Objective value of the constrained program (constraints not checked)."""
    b = _as_bits(bits, qp.num_vars)
    value = qp.constant
    for i, c in qp.linear.items():
        value += c * b[i]
    for (i, j), c in qp.quadratic.items():
        value += c * b[i] * b[j]
    return float(value)


def violated_constraints(
    qp: QuadraticProgram, bits: str | Sequence[int]
) -> list[tuple[int, int]]:
    b = _as_bits(bits, qp.num_vars)
    return [(i, j) for i, j in qp.constraints if b[i] and b[j]]


def default_penalty(qp: QuadraticProgram) -> float:
    """Constraint penalty that provably dominates any objective improvement.

    1 + sum of absolute coefficients: violating a single constraint then
    costs more than the largest possible gain from the rest of the objective.
    """
    return 1.0 + sum(abs(c) for c in qp.linear.values()) + sum(
        abs(c) for c in qp.quadratic.values()
    )


def to_qubo(qp: QuadraticProgram, penalty: float | None = None) -> Qubo:
    """Fold each at-most-one constraint into the objective as +penalty*q_a*q_b."""
    if penalty is None:
        penalty = default_penalty(qp)
    if penalty <= 0:
        raise ValueError(f"constraint penalty must be positive, got {penalty}")
    quadratic = dict(qp.quadratic)
    for a, b in qp.constraints:
        key = _key(a, b)
        quadratic[key] = quadratic.get(key, 0.0) + penalty
    return Qubo(
        num_vars=qp.num_vars,
        linear=dict(qp.linear),
        quadratic={k: v for k, v in sorted(quadratic.items()) if v != 0.0},
        constant=qp.constant,
    )


def to_ising(q: Qubo) -> IsingHamiltonian:
    """Substitute q_i = (1 - z_i) / 2; bit 1 maps to spin -1."""
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    offset = q.constant
    for i, c in q.linear.items():
        offset += c / 2.0
        h[i] = h.get(i, 0.0) - c / 2.0
    for (i, j), c in q.quadratic.items():
        offset += c / 4.0
        h[i] = h.get(i, 0.0) - c / 4.0
        h[j] = h.get(j, 0.0) - c / 4.0
        key = _key(i, j)
        J[key] = J.get(key, 0.0) + c / 4.0
    return IsingHamiltonian(
        num_vars=q.num_vars,
        h={k: v for k, v in sorted(h.items()) if v != 0.0},
        J={k: v for k, v in sorted(J.items()) if v != 0.0},
        offset=offset,
    )


def ising_energy(ham: IsingHamiltonian, spins: Sequence[int]) -> float:
    """Energy of a spin vector with entries in {-1, +1}."""
    z = np.asarray(spins, dtype=np.int64)
    if z.size != ham.num_vars:
        raise ValueError(f"spin vector length {z.size} != num_vars {ham.num_vars}")
    if not np.all(np.abs(z) == 1):
        raise ValueError("spins must be -1 or +1")
    value = ham.offset
    for i, c in ham.h.items():
        value += c * z[i]
    for (i, j), c in ham.J.items():
        value += c * z[i] * z[j]
    return float(value)


def spins_from_bits(bits: str | Sequence[int], num_vars: int) -> np.ndarray:
    """Bit 1 -> spin -1, bit 0 -> spin +1."""
    b = _as_bits(bits, num_vars)
    return 1 - 2 * b


def energies_vector(q: Qubo, cap: int = EXHAUSTIVE_CAP) -> np.ndarray:
    """Objective values for all 2^n bitstrings.

    Index k corresponds to the bitstring format(k, "0nb"): variable 0 is the
    leftmost character, i.e. the most significant bit.
    """
    n = q.num_vars
    if n > cap:
        raise ValueError(f"num_vars {n} exceeds exhaustive cap {cap}")
    size = 1 << n
    idx = np.arange(size, dtype=np.uint32)
    energy = np.full(size, float(q.constant))
    for i, c in q.linear.items():
        energy += c * ((idx >> (n - 1 - i)) & 1)
    for (i, j), c in q.quadratic.items():
        energy += c * ((idx >> (n - 1 - i)) & (idx >> (n - 1 - j)) & 1)
    return energy


def bitstring(index: int, num_vars: int) -> str:
    """Bitstring for an energies_vector index (variable 0 leftmost)."""
    return format(index, f"0{num_vars}b") if num_vars else ""


def dump_qubo(q: Qubo) -> str:
    """Line-oriented text form: header, then linear and quadratic records."""
    lines = [f"qubo {q.num_vars} {q.constant!r}"]
    for i in sorted(q.linear):
        lines.append(f"l {i} {q.linear[i]!r}")
    for i, j in sorted(q.quadratic):
        lines.append(f"q {i} {j} {q.quadratic[(i, j)]!r}")
    return "\n".join(lines) + "\n"


def load_qubo(text: str) -> Qubo:
    """Inverse of dump_qubo."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or not lines[0].startswith("qubo "):
        raise ValueError("missing 'qubo <num_vars> <constant>' header")
    _, nv, const = lines[0].split()
    num_vars, constant = int(nv), float(const)
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        fields = ln.split()
        if fields[0] == "l" and len(fields) == 3:
            linear[int(fields[1])] = float(fields[2])
        elif fields[0] == "q" and len(fields) == 4:
            quadratic[_key(int(fields[1]), int(fields[2]))] = float(fields[3])
        else:
            raise ValueError(f"unrecognized record {ln!r}")
    for i in list(linear) + [k for key in quadratic for k in key]:
        if not 0 <= i < num_vars:
            raise ValueError(f"index {i} out of range for {num_vars} variables")
    return Qubo(num_vars=num_vars, linear=linear, quadratic=quadratic, constant=constant)

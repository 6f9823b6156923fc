"""Dense statevector simulation of the two-local ansatz with shot sampling.

The circuit alternates a layer of single-qubit Y rotations with a fixed
pattern of CZ entanglers, repeated `layers` times, and closes with one final
rotation layer. Within a repetition the CZs come in two sublayers: qubit i is
entangled with i+1 first for even i, then for odd i ("pairwise" pattern).

Conventions, used consistently everywhere:
  * Ry(theta) = exp(-i * theta/2 * Y), so Ry(theta)|0> =
    cos(theta/2)|0> + sin(theta/2)|1>. (Writing the rotation without the
    half angle only rescales the parameter axis, which the optimizer spans
    anyway.)
  * Parameters are indexed layer-major, qubit-minor: theta[layer*n + qubit].
  * Qubit 0 is the leftmost character of a bitstring, i.e. the most
    significant bit of a statevector index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Hard limit: dense amplitudes take 16 * 2^n bytes.
SIMULATOR_QUBIT_CAP = 26


class QubitCapacityError(ValueError):
    """Requested circuit exceeds the dense-simulation qubit cap."""


@dataclass(frozen=True)
class Ansatz:
    """Two-local circuit shape: qubit count, repetitions, CZ edge pattern."""

    num_qubits: int
    layers: int
    cz_edges: tuple[tuple[int, int], ...]

    @property
    def num_parameters(self) -> int:
        return self.num_qubits * (self.layers + 1)


def build_ansatz(num_qubits: int, layers: int) -> Ansatz:
    """Pairwise CZ pattern: (i, i+1) for even i, then (i, i+1) for odd i."""
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    if layers < 1:
        raise ValueError("layers must be >= 1")
    even = tuple((i, i + 1) for i in range(0, num_qubits - 1, 2))
    odd = tuple((i, i + 1) for i in range(1, num_qubits - 1, 2))
    return Ansatz(num_qubits=num_qubits, layers=layers, cz_edges=even + odd)


def _apply_ry(psi: np.ndarray, qubit: int, theta: float) -> None:
    view = np.moveaxis(psi, qubit, 0)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0 = view[0].copy()
    view[0] *= c
    view[0] -= s * view[1]
    view[1] *= c
    view[1] += s * a0


def _apply_cz(psi: np.ndarray, a: int, b: int) -> None:
    view = np.moveaxis(psi, (a, b), (0, 1))
    view[1, 1] *= -1.0


def statevector(ansatz: Ansatz, theta: np.ndarray) -> np.ndarray:
    """Exact amplitudes of the circuit applied to |0...0>.

    Returns a flat array of 2^n complex amplitudes; index k corresponds to
    the bitstring format(k, "0nb") with qubit 0 leftmost.
    """
    n = ansatz.num_qubits
    if n > SIMULATOR_QUBIT_CAP:
        raise QubitCapacityError(
            f"{n} qubits exceeds the dense-simulation cap of {SIMULATOR_QUBIT_CAP}"
        )
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.num_parameters,):
        raise ValueError(
            f"expected {ansatz.num_parameters} parameters, got shape {theta.shape}"
        )
    psi = np.zeros((2,) * n, dtype=np.complex128)
    psi[(0,) * n] = 1.0
    for layer in range(ansatz.layers):
        for q in range(n):
            _apply_ry(psi, q, theta[layer * n + q])
        for a, b in ansatz.cz_edges:
            _apply_cz(psi, a, b)
    for q in range(n):
        _apply_ry(psi, q, theta[ansatz.layers * n + q])
    return psi.reshape(-1)


def probabilities(ansatz: Ansatz, theta: np.ndarray) -> np.ndarray:
    """Measurement distribution |amplitude|^2 over all 2^n bitstrings."""
    amps = statevector(ansatz, theta)
    p = np.abs(amps) ** 2
    return p / p.sum()


@dataclass(frozen=True)
class SampleSet:
    """Shot counts per measured bitstring."""

    num_qubits: int
    shots: int
    counts: dict[str, int]

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to the number of shots")

    def to_dict(self) -> dict:
        return {"num_qubits": self.num_qubits, "shots": self.shots, "counts": dict(self.counts)}


def sample(
    ansatz: Ansatz, theta: np.ndarray, shots: int, rng: np.random.Generator
) -> SampleSet:
    """Multinomial draw of `shots` measurements; deterministic per rng state."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = probabilities(ansatz, theta)
    hits = rng.multinomial(shots, p)
    n = ansatz.num_qubits
    counts = {
        format(k, f"0{n}b"): int(c) for k, c in enumerate(hits) if c
    }
    return SampleSet(num_qubits=n, shots=shots, counts=counts)


def expectation(ansatz: Ansatz, theta: np.ndarray, values: np.ndarray) -> float:
    """Exact (infinite-shot) expectation of a diagonal observable.

    values[k] is the observable on bitstring k (same indexing as
    statevector).
    """
    p = probabilities(ansatz, theta)
    values = np.asarray(values, dtype=float)
    if values.shape != p.shape:
        raise ValueError(f"values must have shape {p.shape}, got {values.shape}")
    return float(p @ values)

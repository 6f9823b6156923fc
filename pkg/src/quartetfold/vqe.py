"""Shot-based CVaR-VQE driver: objective, sequential sine-fit optimizer,
multi-trial experiments, and the quality metrics.

The variational objective is the conditional value at risk of the sampled
bitstring energies: sort the K sampled energies ascending and average the
lowest ceil(alpha * K). alpha = 1 recovers the plain sample mean; once
ceil(alpha * K) = 1 only the best sampled energy counts.

The optimizer sweeps parameters cyclically. With parameters entering only
through single-qubit rotations, the objective restricted to one parameter is
a shifted sinusoid c0 + c1*cos(x - c2); three evaluations (at the current
value and +/- pi/2) determine the fit, and the parameter jumps straight to
the fitted minimum c2 + pi. One iteration = one parameter update = three
objective evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .qubo import Qubo, energies_vector, evaluate
from .simulator import (
    SIMULATOR_QUBIT_CAP,
    QubitCapacityError,
    SampleSet,
    build_ansatz,
    sample,
)
from .solvers import Solution

#: Precompute all 2^n bitstring energies inside a trial up to this size.
_ENERGY_TABLE_CAP = 20

#: Objective evaluations per optimizer iteration (current value, +pi/2, -pi/2).
N_EVAL = 3

#: Energies within this of the reference optimum count as success.
SUCCESS_TOL = 1e-6


@dataclass(frozen=True)
class VqeConfig:
    """Protocol knobs for one experiment."""

    alpha: float = 0.1
    shots: int = 32
    layers: int = 2
    max_iterations: int = 200
    num_trials: int = 10
    seed: int = 0
    convergence_tol: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.num_trials < 1:
            raise ValueError("num_trials must be >= 1")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


def cvar(energies: Sequence[float] | np.ndarray, alpha: float) -> float:
    """Mean of the lowest ceil(alpha*K) of the K given energies."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    values = np.sort(np.asarray(energies, dtype=float))
    if values.size == 0:
        raise ValueError("cvar of an empty sample is undefined")
    keep = math.ceil(alpha * values.size)
    return float(values[:keep].mean())


def sample_energies(q: Qubo, samples: SampleSet) -> np.ndarray:
    """Shot-expanded energy multiset: one entry per shot."""
    if samples.num_qubits != q.num_vars:
        raise ValueError("sample register size does not match the objective")
    values = np.empty(samples.shots)
    pos = 0
    for bits, count in samples.counts.items():
        values[pos : pos + count] = evaluate(q, bits)
        pos += count
    return values


def nft_step(
    objective: Callable[[np.ndarray], float], theta: np.ndarray, index: int
) -> tuple[np.ndarray, tuple[float, float, float]]:
    """One sine-fit update of theta[index]; returns (new theta, evaluations).

    Fits f(x) = c0 + c1*cos(x - c2) through f(t), f(t+pi/2), f(t-pi/2) and
    moves the parameter to the fitted argmin c2 + pi (wrapped to [0, 2pi)).
    A degenerate fit (c1 ~ 0) leaves the parameter unchanged.
    """
    t = theta[index]
    f_here = objective(theta)
    shifted = theta.copy()
    shifted[index] = t + math.pi / 2.0
    f_plus = objective(shifted)
    shifted[index] = t - math.pi / 2.0
    f_minus = objective(shifted)

    c0 = 0.5 * (f_plus + f_minus)
    a = f_here - c0  # c1 * cos(t - c2)
    b = 0.5 * (f_minus - f_plus)  # c1 * sin(t - c2)
    amplitude = math.hypot(a, b)
    new_theta = theta.copy()
    if amplitude > 1e-12 * (1.0 + abs(c0)):
        phase = math.atan2(b, a)  # t - c2
        new_theta[index] = (t - phase + math.pi) % (2.0 * math.pi)
    return new_theta, (f_here, f_plus, f_minus)


def nft_optimize(
    objective: Callable[[np.ndarray], float],
    theta0: np.ndarray,
    max_iterations: int,
    convergence_tol: float = 1e-6,
) -> tuple[np.ndarray, list[float]]:
    """Cyclic sine-fit sweeps until max_iterations or convergence.

    The history holds the best objective value observed so far, one entry per
    iteration. The loop stops early when a full sweep over all parameters
    improves that best value by less than convergence_tol.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    m = theta.size
    history: list[float] = []
    if m == 0 or max_iterations < 1:
        return theta, history
    best = math.inf
    iterations = 0
    while iterations < max_iterations:
        best_before_sweep = best
        for k in range(m):
            theta, evals = nft_step(objective, theta, k)
            best = min(best, *evals)
            history.append(best)
            iterations += 1
            if iterations >= max_iterations:
                break
        if best_before_sweep - best < convergence_tol:
            break
    return theta, history


@dataclass(frozen=True)
class TrialResult:
    """One optimization trial: final angles, traces, and final-sample stats.

    cvar_history[k] is the best objective value observed through iteration k;
    energy_history[k] is the lowest single sampled energy seen through
    iteration k. lowest_energy comes from the samples at the final angles.
    """

    parameters: tuple[float, ...]
    cvar_history: tuple[float, ...]
    energy_history: tuple[float, ...]
    final_samples: SampleSet
    lowest_energy: float
    best_bitstring: str
    iterations: int
    success: bool | None = None


def run_trial(
    q: Qubo, config: VqeConfig, seed: int | np.random.SeedSequence
) -> TrialResult:
    """One CVaR-VQE trial; bit-identical results for a fixed seed.

    Angles start uniform on [0, 2pi). The returned lowest_energy is the best
    energy among the samples drawn at the final angles.
    """
    n = q.num_vars
    if n < 1:
        raise ValueError("objective has no variables")
    if n > SIMULATOR_QUBIT_CAP:
        raise QubitCapacityError(
            f"{n} qubits exceeds the dense-simulation cap of {SIMULATOR_QUBIT_CAP}"
        )
    rng = np.random.default_rng(seed)
    ansatz = build_ansatz(n, config.layers)
    theta0 = rng.uniform(0.0, 2.0 * math.pi, ansatz.num_parameters)

    # Small registers: trade 2^n floats for O(1) energy lookups per shot.
    table = energies_vector(q) if n <= _ENERGY_TABLE_CAP else None

    def energies_of(drawn: SampleSet) -> np.ndarray:
        if table is None:
            return sample_energies(q, drawn)
        return np.repeat(
            table[[int(bits, 2) for bits in drawn.counts]],
            list(drawn.counts.values()),
        )

    call_minima: list[float] = []

    def objective(theta: np.ndarray) -> float:
        drawn = sample(ansatz, theta, config.shots, rng)
        energies = energies_of(drawn)
        call_minima.append(float(energies.min()))
        return cvar(energies, config.alpha)

    theta_f, history = nft_optimize(
        objective, theta0, config.max_iterations, config.convergence_tol
    )
    # Each iteration makes exactly N_EVAL objective calls.
    running = np.minimum.accumulate(call_minima) if call_minima else np.zeros(0)
    energy_history = tuple(float(running[N_EVAL * (k + 1) - 1]) for k in range(len(history)))

    final = sample(ansatz, theta_f, config.shots, rng)
    by_energy = {bits: evaluate(q, bits) for bits in final.counts}
    best_bits = min(by_energy, key=lambda bits: (by_energy[bits], bits))
    return TrialResult(
        parameters=tuple(float(t) for t in theta_f),
        cvar_history=tuple(history),
        energy_history=energy_history,
        final_samples=final,
        lowest_energy=by_energy[best_bits],
        best_bitstring=best_bits,
        iterations=len(history),
    )


def optimality_gap(f_low: float, f_ref: float) -> float:
    """Percent deviation of the best sampled energy from the reference optimum."""
    if f_ref == 0.0:
        raise ValueError("optimality gap is undefined for a zero reference energy")
    return abs(f_low - f_ref) / abs(f_ref) * 100.0


def circuit_budget(p_succ: float, n_iter: int, n_shots: int, n_eval: int = N_EVAL) -> float:
    """Expected circuit executions: 1/p_succ * n_iter * n_shots * n_eval."""
    if not 0.0 < p_succ <= 1.0:
        raise ValueError("p_succ must be in (0, 1]")
    if min(n_iter, n_shots, n_eval) < 1:
        raise ValueError("n_iter, n_shots and n_eval must be >= 1")
    return (1.0 / p_succ) * n_iter * n_shots * n_eval


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregate over independent trials against a reference solution."""

    trials: tuple[TrialResult, ...]
    p_succ: float
    gaps: tuple[float, ...]
    gap_avg: float
    reference_energy: float
    reference_bits: str
    bits_match: tuple[bool, ...]


def summarize_trials(
    trials: Sequence[TrialResult], reference: Solution
) -> ExperimentResult:
    """Score trials against the reference: energy match within SUCCESS_TOL is
    a success; the gap average runs over all trials, not only failures."""
    scored = tuple(
        replace(t, success=abs(t.lowest_energy - reference.energy) <= SUCCESS_TOL)
        for t in trials
    )
    gaps = tuple(optimality_gap(t.lowest_energy, reference.energy) for t in scored)
    return ExperimentResult(
        trials=scored,
        p_succ=sum(t.success for t in scored) / len(scored),
        gaps=gaps,
        gap_avg=float(np.mean(gaps)),
        reference_energy=reference.energy,
        reference_bits=reference.bits,
        bits_match=tuple(t.best_bitstring == reference.bits for t in scored),
    )


def run_experiment(
    q: Qubo,
    config: VqeConfig,
    reference: Solution,
    allow_heuristic_reference: bool = False,
) -> ExperimentResult:
    """num_trials independent trials with seeds derived from config.seed.

    The reference must be proven optimal unless explicitly flagged as a
    heuristic baseline. Aggregates are independent of trial execution order.
    """
    if not reference.proven_optimal and not allow_heuristic_reference:
        raise ValueError(
            "reference solution is not proven optimal; "
            "pass allow_heuristic_reference=True to accept it anyway"
        )
    seeds = np.random.SeedSequence(config.seed).spawn(config.num_trials)
    trials = [run_trial(q, config, s) for s in seeds]
    return summarize_trials(trials, reference)

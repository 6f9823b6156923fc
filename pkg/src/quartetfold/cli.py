"""Command-line workflow tying the pipeline together.

Subcommands mirror the pipeline stages: `preprocess` dumps the quartet model,
`solve` runs one solver end to end and renders the structure, `scaling` runs
the branch-and-bound timing study, `experiment` runs multi-trial CVaR-VQE
sweeps against exact references.

Every artifact embeds the full run configuration and a schema version. Wall
times live in their own column/key so reruns with the same seed are otherwise
byte-identical.

Exit codes: 0 success, 2 input/parse errors, 3 capability (qubit cap) errors,
4 infeasible decoded structures.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from .energy import (
    MissingStackError,
    ObjectiveWeights,
    StackTableError,
    load_default_stack_table,
    load_stack_table,
)
from .pipeline import Problem, compile_problem, find_instances
from .qubo import EXHAUSTIVE_CAP, dump_qubo
from .sequence import SequenceError, parse_fasta, parse_sequence
from .simulator import SIMULATOR_QUBIT_CAP, QubitCapacityError
from .solvers import (
    Solution,
    solve_anneal,
    solve_branch_bound,
    solve_exhaustive,
    timing_study,
)
from .structure import (
    InfeasibleStructureError,
    decode,
    has_pseudoknot,
    structure_record,
    to_dot_bracket,
)
from .vqe import ExperimentResult, VqeConfig, run_experiment

SCHEMA_VERSION = 1

EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INFEASIBLE = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _sequence_options(f):
    f = click.option("--seq", "seq_text", default=None, help="Inline RNA sequence.")(f)
    f = click.option(
        "--seq-file",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="Sequence file (plain text or FASTA).",
    )(f)
    f = click.option("--min-loop", default=3, show_default=True,
                     help="Minimum unpaired bases inside the innermost pair.")(f)
    return f


def _weight_options(f):
    f = click.option("--reward", default=-1.0, show_default=True,
                     help="Stacking reward (non-positive).")(f)
    f = click.option("--ua-penalty", default=0.5, show_default=True,
                     help="AU stack-end penalty (non-negative).")(f)
    f = click.option("--constraint-penalty", default="auto", show_default=True,
                     help="Conflict penalty: 'auto' or a positive number.")(f)
    f = click.option("--ua-mode", "ua_term", type=click.Choice(["literal", "linear"]),
                     default="literal", show_default=True,
                     help="AU-end objective term: full cross term or plain linear penalty.")(f)
    f = click.option("--qua-mode", type=click.Choice(["outer", "inner"]),
                     default="outer", show_default=True,
                     help="Which pair of a quartet marks an AU stack end.")(f)
    f = click.option("--energy-table", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="Alternative stack-energy table file.")(f)
    return f


def _load_sequence(seq_text: str | None, seq_file: Path | None):
    if (seq_text is None) == (seq_file is None):
        _fail(EXIT_PARSE, "provide exactly one of --seq or --seq-file")
    try:
        if seq_text is not None:
            return parse_sequence(seq_text)
        return parse_fasta(seq_file.read_text())
    except (SequenceError, OSError) as exc:
        _fail(EXIT_PARSE, str(exc))


def _load_table(energy_table: Path | None):
    try:
        if energy_table is None:
            return load_default_stack_table()
        return load_stack_table(energy_table.read_text())
    except (StackTableError, OSError) as exc:
        _fail(EXIT_PARSE, str(exc))


def _parse_penalty(text: str) -> float | None:
    if text.lower() == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        _fail(EXIT_PARSE, f"--constraint-penalty must be 'auto' or a number, got {text!r}")
    if value <= 0:
        _fail(EXIT_PARSE, "--constraint-penalty must be positive")
    return value


def _weights(reward: float, ua_penalty: float, constraint_penalty: str) -> ObjectiveWeights:
    try:
        return ObjectiveWeights(
            reward=reward,
            ua_penalty=ua_penalty,
            constraint_penalty=_parse_penalty(constraint_penalty),
        )
    except ValueError as exc:
        _fail(EXIT_PARSE, str(exc))


def _compile(seq, table, weights, min_loop, qua_mode, ua_term) -> Problem:
    try:
        return compile_problem(
            seq, table=table, weights=weights, min_loop=min_loop,
            qua_mode=qua_mode, ua_term=ua_term,
        )
    except MissingStackError as exc:
        _fail(EXIT_PARSE, str(exc))


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    click.echo(f"wrote {path}")


def _config_echo(**kwargs) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in kwargs.items()}


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        _fail(EXIT_PARSE, f"expected a comma-separated integer list, got {text!r}")


@click.group()
def main() -> None:
    """RNA secondary structure via quartet QUBOs: exact and CVaR-VQE solvers."""


@main.command()
@_sequence_options
@click.option("--qua-mode", type=click.Choice(["outer", "inner"]), default="outer",
              show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"),
              show_default=True)
def preprocess(seq_text, seq_file, min_loop, qua_mode, out) -> None:
    """Enumerate quartets and dump the conflict/stacking/AU-end sets."""
    seq = _load_sequence(seq_text, seq_file)
    from .quartets import build_model

    model = build_model(seq, min_loop, qua_mode=qua_mode)
    if model.num_vars == 0:
        click.echo("warning: sequence yields no quartets; model is empty", err=True)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_echo(
            command="preprocess", seq=str(seq), seq_file=seq_file,
            min_loop=min_loop, qua_mode=qua_mode, out=out,
        ),
        "model": model.to_dict(),
    }
    _write_json(out / "model.json", payload)


def _solution_dict(sol: Solution) -> dict:
    return {
        "method": sol.method.value,
        "bits": sol.bits,
        "energy": sol.energy,
        "proven_optimal": sol.proven_optimal,
        "work_units": sol.work_units,
        "ties": sol.ties,
    }


def _structure_dict(problem: Problem, bits: str) -> dict:
    structure = decode(bits, problem.model)
    return {
        "dot_bracket": to_dot_bracket(structure),
        "pairs": [list(p) for p in structure.pairs],
        "pseudoknot": has_pseudoknot(structure),
    }


def _experiment_dict(result: ExperimentResult) -> dict:
    return {
        "p_succ": result.p_succ,
        "gap_avg": result.gap_avg,
        "gaps": list(result.gaps),
        "reference": {"bits": result.reference_bits, "energy": result.reference_energy},
        "bits_match": list(result.bits_match),
        "trials": [
            {
                "lowest_energy": t.lowest_energy,
                "best_bitstring": t.best_bitstring,
                "success": t.success,
                "iterations": t.iterations,
            }
            for t in result.trials
        ],
    }


def _write_trial_csvs(out: Path, result: ExperimentResult) -> None:
    for idx, trial in enumerate(result.trials):
        path = out / f"trial_{idx:02d}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "cvar", "best_energy_so_far"])
            for it, (c, e) in enumerate(zip(trial.cvar_history, trial.energy_history)):
                writer.writerow([it, repr(c), repr(e)])


@main.command()
@_sequence_options
@_weight_options
@click.option("--solver", type=click.Choice(["exact", "bb", "anneal", "vqe"]),
              default="exact", show_default=True)
@click.option("--alpha", default=0.1, show_default=True, help="CVaR tail fraction.")
@click.option("--shots", default=32, show_default=True)
@click.option("--layers", default=2, show_default=True, help="Ansatz repetitions.")
@click.option("--iters", default=200, show_default=True, help="Max optimizer iterations.")
@click.option("--trials", default=10, show_default=True, help="Independent VQE trials.")
@click.option("--sweeps", default=256, show_default=True, help="Annealing sweeps.")
@click.option("--restarts", default=32, show_default=True, help="Annealing restarts.")
@click.option("--seed", default=0, show_default=True)
@click.option("--qubits-cap", default=22, show_default=True,
              help="Refuse VQE problems larger than this many qubits.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"),
              show_default=True)
def solve(seq_text, seq_file, min_loop, reward, ua_penalty, constraint_penalty,
          ua_term, qua_mode, energy_table, solver, alpha, shots, layers, iters,
          trials, sweeps, restarts, seed, qubits_cap, out) -> None:
    """Compile one sequence and solve it with the chosen solver."""
    start = time.perf_counter()
    seq = _load_sequence(seq_text, seq_file)
    table = _load_table(energy_table)
    weights = _weights(reward, ua_penalty, constraint_penalty)
    problem = _compile(seq, table, weights, min_loop, qua_mode, ua_term)
    n = problem.qubo.num_vars

    config = _config_echo(
        command="solve", seq=str(seq), seq_file=seq_file, min_loop=min_loop,
        reward=reward, ua_penalty=ua_penalty, constraint_penalty=constraint_penalty,
        ua_mode=ua_term, qua_mode=qua_mode, energy_table=energy_table, solver=solver,
        alpha=alpha, shots=shots, layers=layers, iters=iters, trials=trials,
        sweeps=sweeps, restarts=restarts, seed=seed, qubits_cap=qubits_cap, out=out,
    )
    payload: dict = {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "num_vars": n,
        "constraint_penalty_used": problem.penalty,
    }

    if solver == "vqe":
        if n == 0:
            _fail(EXIT_PARSE, "sequence yields no quartets; nothing to optimize")
        cap = min(qubits_cap, SIMULATOR_QUBIT_CAP)
        if n > cap:
            _fail(EXIT_CAPACITY, f"problem needs {n} qubits, above the cap of {cap}")
        reference = (
            solve_exhaustive(problem.qubo) if n <= EXHAUSTIVE_CAP
            else solve_branch_bound(problem.program)
        )
        vqe_config = VqeConfig(alpha=alpha, shots=shots, layers=layers,
                               max_iterations=iters, num_trials=trials, seed=seed)
        result = run_experiment(problem.qubo, vqe_config, reference)
        best = min(result.trials, key=lambda t: t.lowest_energy)
        payload["experiment"] = _experiment_dict(result)
        payload["solution"] = {
            "method": "cvar_vqe",
            "bits": best.best_bitstring,
            "energy": best.lowest_energy,
            "proven_optimal": False,
            "work_units": sum(t.iterations for t in result.trials),
            "ties": 1,
        }
        bits = best.best_bitstring
    else:
        if solver == "exact":
            if n > EXHAUSTIVE_CAP:
                _fail(EXIT_CAPACITY,
                      f"{n} variables exceeds the exhaustive cap of {EXHAUSTIVE_CAP}; "
                      "use --solver bb or anneal")
            sol = solve_exhaustive(problem.qubo)
        elif solver == "bb":
            sol = solve_branch_bound(problem.program)
        else:
            sol = solve_anneal(problem.qubo, sweeps=sweeps, restarts=restarts, seed=seed)
        payload["solution"] = _solution_dict(sol)
        bits = sol.bits

    try:
        payload["structure"] = _structure_dict(problem, bits)
    except InfeasibleStructureError as exc:
        _fail(EXIT_INFEASIBLE, f"solution bitstring decodes to an invalid structure: {exc}")

    out.mkdir(parents=True, exist_ok=True)
    if solver == "vqe":
        _write_trial_csvs(out, result)
    (out / "qubo.txt").write_text(dump_qubo(problem.qubo))
    (out / "structure.txt").write_text(
        structure_record(str(problem.sequence), decode(bits, problem.model))
    )
    payload["timing"] = {"wall_ms": (time.perf_counter() - start) * 1e3}
    _write_json(out / "result.json", payload)
    click.echo(payload["structure"]["dot_bracket"])


@main.command()
@click.option("--lengths", default="15,20,25,30", show_default=True,
              help="Comma-separated sequence lengths.")
@click.option("--samples", default=50, show_default=True, help="Sequences per length.")
@click.option("--seed", default=0, show_default=True)
@click.option("--min-loop", default=3, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"),
              show_default=True)
def scaling(lengths, samples, seed, min_loop, out) -> None:
    """Branch-and-bound work/time scaling over random sequences."""
    length_list = _int_list(lengths)
    rows = timing_study(length_list, samples, seed=seed, min_loop=min_loop)
    config = _config_echo(command="scaling", lengths=length_list, samples=samples,
                          seed=seed, min_loop=min_loop, out=out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "scaling.csv"
    with path.open("w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        fh.write(f"# config={json.dumps(config)}\n")
        writer = csv.writer(fh)
        writer.writerow(["length", "seed", "num_vars", "num_constraints",
                         "work_units", "wall_ms", "energy", "proven_optimal"])
        for row in rows:
            writer.writerow([row.length, row.seed, row.num_vars, row.num_constraints,
                             row.work_units, repr(row.wall_ms), repr(row.energy),
                             row.proven_optimal])
    click.echo(f"wrote {path}")


@main.command()
@_weight_options
@click.option("--sizes", default="10", show_default=True,
              help="Comma-separated problem sizes (variable counts).")
@click.option("--per-size", default=10, show_default=True, help="Sequences per size.")
@click.option("--trials", default=10, show_default=True)
@click.option("--alpha", default=0.1, show_default=True)
@click.option("--shots", default=32, show_default=True)
@click.option("--layers", default=2, show_default=True)
@click.option("--iters", default=200, show_default=True)
@click.option("--min-loop", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"),
              show_default=True)
def experiment(reward, ua_penalty, constraint_penalty, ua_term, qua_mode, energy_table,
               sizes, per_size, trials, alpha, shots, layers, iters, min_loop, seed,
               out) -> None:
    """Multi-sequence, multi-trial CVaR-VQE sweep against exact references."""
    start = time.perf_counter()
    size_list = _int_list(sizes)
    table = _load_table(energy_table)
    weights = _weights(reward, ua_penalty, constraint_penalty)
    config = _config_echo(
        command="experiment", sizes=size_list, per_size=per_size, trials=trials,
        alpha=alpha, shots=shots, layers=layers, iters=iters, min_loop=min_loop,
        reward=reward, ua_penalty=ua_penalty, constraint_penalty=constraint_penalty,
        ua_mode=ua_term, qua_mode=qua_mode, energy_table=energy_table, seed=seed,
        out=out,
    )

    master = np.random.SeedSequence(seed)
    corpus_seed, trial_seed_root = master.spawn(2)
    corpus_rng = np.random.default_rng(corpus_seed)

    size_reports = []
    csv_rows = []
    for size in size_list:
        if size < 1:
            _fail(EXIT_PARSE, f"problem size must be >= 1, got {size}")
        if size > SIMULATOR_QUBIT_CAP:
            _fail(EXIT_CAPACITY,
                  f"size {size} exceeds the dense-simulation cap of {SIMULATOR_QUBIT_CAP}")
        sequences = find_instances(size, per_size, corpus_rng, min_loop=min_loop)
        seq_seeds = trial_seed_root.spawn(per_size) if per_size else []
        entries = []
        for idx, seq in enumerate(sequences):
            problem = _compile(seq, table, weights, min_loop, qua_mode, ua_term)
            reference = (
                solve_exhaustive(problem.qubo)
                if size <= EXHAUSTIVE_CAP else solve_branch_bound(problem.program)
            )
            vqe_config = VqeConfig(
                alpha=alpha, shots=shots, layers=layers, max_iterations=iters,
                num_trials=trials, seed=int(seq_seeds[idx].generate_state(1)[0]),
            )
            result = run_experiment(problem.qubo, vqe_config, reference)
            entries.append({
                "sequence": str(seq),
                "num_vars": problem.qubo.num_vars,
                "p_succ": result.p_succ,
                "gap_avg": result.gap_avg,
                "gaps": list(result.gaps),
                "reference_energy": result.reference_energy,
            })
            csv_rows.append([size, idx, str(seq), repr(result.p_succ),
                             repr(result.gap_avg)])
        p_values = [e["p_succ"] for e in entries]
        chi_values = [e["gap_avg"] for e in entries]
        size_reports.append({
            "num_vars": size,
            "sequences": entries,
            "p_succ_mean": float(np.mean(p_values)) if p_values else None,
            "p_succ_quartiles": _quartiles(p_values),
            "chi_quartiles": _quartiles(chi_values),
        })

    out.mkdir(parents=True, exist_ok=True)
    path = out / "experiment.csv"
    with path.open("w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        fh.write(f"# config={json.dumps(config)}\n")
        writer = csv.writer(fh)
        writer.writerow(["size", "sequence_index", "sequence", "p_succ", "chi_avg"])
        writer.writerows(csv_rows)
    click.echo(f"wrote {path}")

    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "sizes": size_reports,
        "timing": {"wall_ms": (time.perf_counter() - start) * 1e3},
    }
    _write_json(out / "experiment.json", payload)


def _quartiles(values: list[float]) -> dict | None:
    if not values:
        return None
    qs = np.percentile(values, [0, 25, 50, 75, 100])
    return {
        "min": float(qs[0]), "q1": float(qs[1]), "median": float(qs[2]),
        "q3": float(qs[3]), "max": float(qs[4]),
    }


if __name__ == "__main__":
    main()

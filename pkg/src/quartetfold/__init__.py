"""RNA secondary structure prediction over stacked-pair (quartet) variables.

The pipeline: parse a sequence, enumerate quartets and their conflict /
stacking structure, attach nearest-neighbor stack energies, compile the
constrained quadratic objective and its QUBO / Ising forms, then solve either
with classical baselines (exhaustive, branch and bound, simulated annealing)
or with a shot-based CVaR-VQE simulation driven by a sequential sine-fit
optimizer.
"""

from .energy import (
    MissingStackError,
    ObjectiveWeights,
    StackTable,
    StackTableError,
    load_default_stack_table,
    load_stack_table,
    quartet_energy,
)
from .pipeline import Problem, compile_problem, find_instances
from .quartets import (
    Pair,
    Quartet,
    QuartetModel,
    build_model,
    can_stack,
    enumerate_quartets,
    pairs_conflict_on_base,
    pairs_cross,
    quartets_conflict,
)
from .qubo import (
    IsingHamiltonian,
    QuadraticProgram,
    Qubo,
    default_penalty,
    dump_qubo,
    energies_vector,
    evaluate,
    ising_energy,
    load_qubo,
    program_value,
    to_ising,
    to_qubo,
    violated_constraints,
)
from .sequence import (
    Base,
    RnaSequence,
    SequenceError,
    is_valid_pair,
    parse_fasta,
    parse_sequence,
    random_sequence,
)
from .simulator import (
    SIMULATOR_QUBIT_CAP,
    Ansatz,
    QubitCapacityError,
    SampleSet,
    build_ansatz,
    expectation,
    probabilities,
    sample,
    statevector,
)
from .solvers import (
    Solution,
    SolveMethod,
    TimingRow,
    solve_anneal,
    solve_branch_bound,
    solve_exhaustive,
    timing_study,
)
from .structure import (
    InfeasibleStructureError,
    RenderError,
    SecondaryStructure,
    decode,
    has_pseudoknot,
    to_dot_bracket,
)
from .vqe import (
    ExperimentResult,
    TrialResult,
    VqeConfig,
    circuit_budget,
    cvar,
    nft_optimize,
    nft_step,
    optimality_gap,
    run_experiment,
    run_trial,
    sample_energies,
    summarize_trials,
)

__version__ = "0.1.0"

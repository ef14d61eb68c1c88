"""Retention of particle-number-conserving circuits under depolarizing noise.

Closed-form leakage probabilities, two cross-validating simulation engines,
depth schedulers for fully-connected hardware, problem encodings for
Max-k-Colorable-Subgraph, and a symmetry-aware bit-flip correction code.
"""

from .analytic import (
    NoiseModel,
    SubsystemSpec,
    bit_persistence,
    bit_persistence_closed_form,
    feasible_probability,
    log_feasible_probability,
    mixed_state_baseline,
    reference_feasible_bits,
    subspace_weight,
)
from .circuits import (
    Gate,
    LayeredCircuit,
    build_mixer_cycle_circuit,
    build_x_qaoa_circuit,
    build_xy_qaoa_circuit,
    schedule_clique_mixer,
    schedule_edge_coloring,
)
from .encodings import (
    CalibrationFailed,
    ColoringInstance,
    InfeasibleAssignment,
    ZPolynomial,
    build_hamiltonian_n2,
    build_hamiltonian_one_hot,
    calibrate,
    cost_n_particle,
    cost_one_hot,
)
from .dense import (
    dense_run,
    feasibility_expectation,
    mixer_bound_check,
    mixer_comparison_sweep,
)
from .flipframe import RunResult, UnsupportedGate, flip_frame_run
from .graphs import Graph, random_regular_graph, read_edge_list, write_edge_list
from .qec import (
    SyndromeTable,
    build_syndrome_circuit,
    derive_syndrome_table,
    encode,
    run_corrected_segment,
    run_interleaved_qaoa,
    run_uncorrected_segment,
)

__version__ = "0.1.0"

"""Exact simulation of qubit noise channels via unitary dilation circuits.

The package compiles a Kraus-operator channel description into an
ancilla-assisted unitary circuit (prepare V, controlled unitaries,
recombine W, trace or post-select the ancilla), executes it exactly on
density matrices, and verifies the result against direct Kraus
application. It also decomposes the multi-controlled gates into
single-qubit gates and CNOTs, evaluates gate-cost models, and provides
an ensemble-readout measurement model.
"""

from .bases import (
    ChiMatrix,
    UnitaryBasis,
    chi_matrix,
    coefficient_matrix,
    decompose_operator,
    pauli_basis,
    reconstruct_channel,
    reconstruct_operator,
    weyl_basis,
)
from .channels import (
    ChannelPreset,
    KrausChannel,
    ad_split,
    analytic_output,
    apply_channel,
    channel_preset,
    random_cptp_channel,
    validate_cptp,
)
from .compiler import (
    DilationCircuit,
    SelectOutcomes,
    SimulationPlan,
    StrategyNotApplicableError,
    TraceAll,
    compile_auto,
    compile_branch,
    compile_diagonal_chi,
    compile_kraus_matched,
    compile_preset,
    complete_unitary,
    paper_preset,
    plan_from_json,
    plan_to_json,
)
from .gates import (
    Gate,
    GateList,
    LocalUnitary,
    controlled_matrix,
    cost_model,
    count_gates,
    decompose_controlled,
    gatelist_from_json,
    gatelist_to_json,
    local_sqrt,
    reconstruct,
)
from .linalg import (
    BlochVector,
    DensityMatrix,
    bloch_vector,
    fidelity,
    maximally_mixed,
    partial_trace,
    pure_state,
    state_from_bloch,
    tensor_product,
    von_neumann_entropy,
)
from .nmr import (
    deviation_metric,
    deviation_part,
    peak_expectations,
    peak_observable,
    pps_state,
    readout_z,
    thermal_state,
    tomography_reconstruct,
)
from .simulator import (
    ExecutionResult,
    assemble_total_unitary,
    branch_operator,
    run_plan,
    verify_plan,
)
from .sweep import SweepConfig, SweepRow, emit_csv, emit_json, report_costs, run_sweep

__version__ = "0.1.0"

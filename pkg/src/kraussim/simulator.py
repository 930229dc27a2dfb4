"""Exact execution of dilation plans on density matrices.

The composite register orders the system before the ancilla
(composite index = system * ancilla_dim + ancilla). Execution is exact
matrix arithmetic: expectation values are traces, never sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import KrausChannel, apply_channel
from .compiler import DilationCircuit, SimulationPlan, TraceAll
from .linalg import DensityMatrix, random_pure_state, tensor_product, unitarity_residual

TOTAL_UNITARY_ATOL = 1e-11


class Diagnostics(NamedTuple):
    unitarity_residual: float
    trace_residual: float


@dataclass(frozen=True)
class ExecutionResult:
    """System-only output plus the unnormalized per-outcome branch terms."""

    output: DensityMatrix
    branch_outputs: tuple[dict[int, np.ndarray], ...]
    diagnostics: Diagnostics


def assemble_total_unitary(circuit: DilationCircuit) -> np.ndarray:
    """(I (x) W) . (sum_i U_i (x) |i><i|) . (I (x) V) on system-major indices."""
    d_sys = circuit.system_dim
    d_anc = circuit.ancilla_dim
    controlled = np.zeros((d_sys * d_anc, d_sys * d_anc), dtype=complex)
    view = controlled.reshape(d_sys, d_anc, d_sys, d_anc)
    for i, u in enumerate(circuit.unitaries):
        view[:, i, :, i] = u
    eye_sys = np.eye(d_sys, dtype=complex)
    total = tensor_product(eye_sys, circuit.w) @ controlled @ tensor_product(eye_sys, circuit.v)
    residual = unitarity_residual(total)
    if residual > TOTAL_UNITARY_ATOL:
        raise ValueError(f"assembled circuit is not unitary (residual {residual:.3e})")
    return total


def branch_operator(circuit: DilationCircuit, k: int) -> np.ndarray:
    """Effective system operator for ancilla outcome k: sum_i W_ki V_i0 U_i."""
    if not 0 <= k < circuit.ancilla_dim:
        raise ValueError(f"outcome {k} out of range for ancilla dim {circuit.ancilla_dim}")
    op = np.zeros((circuit.system_dim, circuit.system_dim), dtype=complex)
    for i, u in enumerate(circuit.unitaries):
        op += circuit.w[k, i] * circuit.v[i, 0] * u
    return op


def _run_circuit(circuit: DilationCircuit, rho_in: DensityMatrix) -> tuple[dict[int, np.ndarray], float]:
    total = assemble_total_unitary(circuit)
    d_sys = circuit.system_dim
    d_anc = circuit.ancilla_dim
    anc0 = np.zeros((d_anc, d_anc), dtype=complex)
    anc0[0, 0] = 1.0
    rho_sa = total @ tensor_product(rho_in.matrix, anc0) @ total.conj().T
    blocks = rho_sa.reshape(d_sys, d_anc, d_sys, d_anc)
    branches = {k: np.array(blocks[:, k, :, k]) for k in range(d_anc)}
    return branches, unitarity_residual(total)


def run_plan(plan: SimulationPlan, rho_in: DensityMatrix) -> ExecutionResult:
    """Execute every circuit, extract ancilla branches, apply the policy.

    Trace-all sums every branch of the circuit; outcome selection sums
    the chosen branches scaled by their classical weights (weights carry
    the normalization, no renormalization is applied).
    """
    if rho_in.dim != plan.system_dim:
        raise ValueError(f"input dim {rho_in.dim} does not match plan system dim {plan.system_dim}")
    out = np.zeros((plan.system_dim, plan.system_dim), dtype=complex)
    all_branches = []
    worst_residual = 0.0
    for circuit, policy in zip(plan.circuits, plan.policies):
        branches, residual = _run_circuit(circuit, rho_in)
        worst_residual = max(worst_residual, residual)
        all_branches.append(branches)
        if isinstance(policy, TraceAll):
            for term in branches.values():
                out += term
        else:
            for outcome, weight in policy.outcomes:
                out += weight * branches[outcome]
    trace_residual = abs(float(np.real(np.trace(out))) - 1.0)
    return ExecutionResult(
        output=DensityMatrix(out),
        branch_outputs=tuple(all_branches),
        diagnostics=Diagnostics(worst_residual, trace_residual),
    )


def verify_plan(
    plan: SimulationPlan, ch: KrausChannel, trials: int, seed: int = 0
) -> float:
    """Max entry deviation between plan execution and direct Kraus
    application over random pure inputs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = random_pure_state(ch.dim, rng)
        simulated = run_plan(plan, rho).output.matrix
        expected = apply_channel(ch, rho).matrix
        worst = max(worst, float(np.max(np.abs(simulated - expected))))
    return worst

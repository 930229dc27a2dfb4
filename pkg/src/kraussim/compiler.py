"""Compilation of Kraus channels into executable unitary dilations.

A dilation circuit runs a channel on a system of dimension D with one
d-dimensional ancilla prepared in |0>:

    (I (x) W) . (sum_i U_i (x) |i><i|) . (I (x) V)

Reading the ancilla in outcome k applies the branch operator
``B_k = sum_i W_ki V_i0 U_i`` to the system, so any channel whose Kraus
operators can be written as such sums is realized exactly. Three
strategies are provided, tried in this order by :func:`compile_auto`:

* diagonal-chi: the channel is a probabilistic mixture of basis
  unitaries; one circuit with V_i0 = sqrt(chi_ii), W = I, trace-all.
* kraus-matched: one circuit whose branch k reproduces Kraus operator k
  exactly; needs as many Kraus operators as active basis elements with
  pairwise-orthogonal coefficient columns.
* branch: one circuit per Kraus operator, each post-selected on ancilla
  outcome 0 and recombined classically; works for every channel.

:func:`paper_preset` builds the hand-derived circuits for the pd/ad/dep
presets, including their exact V and W matrices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bases import UnitaryBasis, basis_by_name, coefficient_matrix
from .channels import ChannelPreset, KrausChannel, channel_preset
from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, UNITARITY_ATOL, unitarity_residual

CHI_DIAGONAL_ATOL = 1e-10
COLUMN_ORTHOGONALITY_ATOL = 1e-10
ACTIVE_COLUMN_NORM = 1e-12

STRATEGY_NAMES = ("auto", "diagonal", "matched", "branch", "paper")


class StrategyNotApplicableError(ValueError):
    """A compilation strategy's preconditions do not hold for the channel."""


@dataclass(frozen=True)
class TraceAll:
    """Sum every ancilla outcome: the full channel in one run."""


@dataclass(frozen=True)
class SelectOutcomes:
    """Keep chosen ancilla outcomes, weighted classically."""

    outcomes: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for outcome, weight in self.outcomes:
            if weight < 0.0:
                raise ValueError(f"negative classical weight {weight} for outcome {outcome}")
            cleaned.append((int(outcome), float(weight)))
        object.__setattr__(self, "outcomes", tuple(cleaned))


Policy = Union[TraceAll, SelectOutcomes]


@dataclass(frozen=True)
class DilationCircuit:
    """One ancilla-assisted circuit: prepare V, control U_i, recombine W."""

    system_dim: int
    ancilla_dim: int
    v: np.ndarray
    w: np.ndarray
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        d = self.ancilla_dim
        v = np.array(self.v, dtype=complex)
        w = np.array(self.w, dtype=complex)
        if v.shape != (d, d) or w.shape != (d, d):
            raise ValueError(f"V and W must be {d}x{d}")
        if unitarity_residual(v) > UNITARITY_ATOL:
            raise ValueError("V is not unitary")
        if unitarity_residual(w) > UNITARITY_ATOL:
            raise ValueError("W is not unitary")
        if len(self.unitaries) != d:
            raise ValueError(f"expected {d} controlled unitaries, got {len(self.unitaries)}")
        frozen = []
        for i, u in enumerate(self.unitaries):
            m = np.array(u, dtype=complex)
            if m.shape != (self.system_dim, self.system_dim):
                raise ValueError(f"controlled unitary {i} has shape {m.shape}")
            if unitarity_residual(m) > UNITARITY_ATOL:
                raise ValueError(f"controlled unitary {i} is not unitary")
            m.setflags(write=False)
            frozen.append(m)
        coeffs = w @ v
        if float(np.max(np.abs(coeffs[:, 0]))) > 1.0 + 1e-10:
            raise ValueError("branch coefficients (WV)_k0 exceed unit modulus")
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "unitaries", tuple(frozen))


@dataclass(frozen=True)
class SimulationPlan:
    """Dilation circuits plus the outcome policy applied to each."""

    circuits: tuple[DilationCircuit, ...]
    policies: tuple[Policy, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.circuits:
            raise ValueError("a plan needs at least one circuit")
        if len(self.circuits) != len(self.policies):
            raise ValueError("one policy per circuit required")
        dims = {c.system_dim for c in self.circuits}
        if len(dims) != 1:
            raise ValueError(f"circuits act on mixed system dims {dims}")
        for circuit, policy in zip(self.circuits, self.policies):
            if isinstance(policy, SelectOutcomes):
                for outcome, _ in policy.outcomes:
                    if not 0 <= outcome < circuit.ancilla_dim:
                        raise ValueError(f"selected outcome {outcome} out of range")

    @property
    def system_dim(self) -> int:
        return self.circuits[0].system_dim


def complete_unitary(v: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Deterministic unitary whose first column is the unit vector ``v``.

    Householder reflection carrying e0 to v, with the overall phase fixed
    by the phase of v[0]; returns the identity when v = e0.
    """
    vec = np.asarray(v, dtype=complex).reshape(-1)
    d = vec.shape[0]
    if abs(np.linalg.norm(vec) - 1.0) > atol:
        raise ValueError(f"first column must be a unit vector, norm {np.linalg.norm(vec)}")
    phase = vec[0] / abs(vec[0]) if abs(vec[0]) > 1e-12 else 1.0 + 0.0j
    aligned = np.conj(phase) * vec  # first entry now real and >= 0
    w = aligned.copy()
    w[0] -= 1.0
    norm_sq = float(np.real(np.vdot(w, w)))
    if norm_sq < 1e-24:
        u = np.eye(d, dtype=complex)
    else:
        u = np.eye(d, dtype=complex) - 2.0 * np.outer(w, w.conj()) / norm_sq
    return phase * u


def active_subbasis(
    ch: KrausChannel, basis: UnitaryBasis
) -> tuple[tuple[int, ...], np.ndarray]:
    """Basis indices actually used by the channel, plus restricted coefficients.

    A column is active when its Euclidean norm exceeds 1e-12; restricting
    to active columns shrinks the ancilla without changing the channel.
    """
    coeffs = coefficient_matrix(ch, basis)
    norms = np.linalg.norm(coeffs, axis=0)
    indices = tuple(int(i) for i in np.flatnonzero(norms > ACTIVE_COLUMN_NORM))
    if not indices:
        raise ValueError("channel has no support on the basis")
    return indices, coeffs[:, list(indices)]


def compile_diagonal_chi(ch: KrausChannel, basis: UnitaryBasis) -> SimulationPlan:
    """Single trace-all circuit for channels with a diagonal process matrix."""
    indices, coeffs = active_subbasis(ch, basis)
    chi = coeffs.T @ coeffs.conj()
    off = chi - np.diag(np.diag(chi))
    off_mass = float(np.max(np.abs(off))) if chi.shape[0] > 1 else 0.0
    if off_mass >= CHI_DIAGONAL_ATOL:
        raise StrategyNotApplicableError(
            f"process matrix has off-diagonal mass {off_mass:.3e}; "
            "the channel is not a mixture of the basis unitaries"
        )
    weights = np.clip(np.real(np.diag(chi)), 0.0, None)
    v = complete_unitary(np.sqrt(weights))
    d = len(indices)
    circuit = DilationCircuit(
        system_dim=ch.dim,
        ancilla_dim=d,
        v=v,
        w=np.eye(d, dtype=complex),
        unitaries=tuple(basis.elements[i] for i in indices),
    )
    return SimulationPlan((circuit,), (TraceAll(),), label=f"{ch.label} via diagonal-chi")


def compile_kraus_matched(ch: KrausChannel, basis: UnitaryBasis) -> SimulationPlan:
    """Single trace-all circuit whose branch k equals Kraus operator k.

    Requires exactly as many Kraus operators as active basis elements and
    pairwise-orthogonal coefficient columns; then V_i0 = ||c_:i|| and
    W_ki = c_ki / V_i0 give B_k = sum_i W_ki V_i0 U_i = E_k.
    """
    indices, coeffs = active_subbasis(ch, basis)
    n_kraus, d = coeffs.shape
    if n_kraus != d:
        raise StrategyNotApplicableError(
            f"{n_kraus} Kraus operators vs {d} active basis elements"
        )
    gram = coeffs.conj().T @ coeffs
    off = gram - np.diag(np.diag(gram))
    if d > 1 and float(np.max(np.abs(off))) >= COLUMN_ORTHOGONALITY_ATOL:
        raise StrategyNotApplicableError("coefficient columns are not orthogonal")
    col_norms = np.linalg.norm(coeffs, axis=0)
    if float(col_norms.min()) < ACTIVE_COLUMN_NORM:
        raise ValueError("degenerate coefficient column in kraus-matched compilation")
    v = complete_unitary(col_norms.astype(complex))
    w = coeffs / col_norms[np.newaxis, :]
    # gauge choice: make the first row of W real nonnegative and move the
    # column phases into the controlled unitaries; branch operators are
    # unchanged and the hand-derived circuits are reproduced verbatim
    phases = np.ones(d, dtype=complex)
    visible = np.abs(w[0, :]) > ACTIVE_COLUMN_NORM
    phases[visible] = w[0, visible] / np.abs(w[0, visible])
    w = w / phases[np.newaxis, :]
    circuit = DilationCircuit(
        system_dim=ch.dim,
        ancilla_dim=d,
        v=v,
        w=w,
        unitaries=tuple(phases[i] * basis.elements[idx] for i, idx in enumerate(indices)),
    )
    return SimulationPlan((circuit,), (TraceAll(),), label=f"{ch.label} via kraus-matched")


def compile_branch(ch: KrausChannel, basis: UnitaryBasis) -> SimulationPlan:
    """One post-selected circuit per Kraus operator; works for any channel.

    Circuit k prepares V with first column c_k / ||c_k|| and recombines
    with the Fourier adjoint (constant first row), so ancilla outcome 0
    carries E_k / (sqrt(d) ||c_k||); classical weight d ||c_k||^2 restores
    the Kraus term, and the weighted sum over circuits is the channel.
    """
    indices, coeffs = active_subbasis(ch, basis)
    d = len(indices)
    ks = np.arange(d)
    fourier_adjoint = np.exp(2j * np.pi * np.outer(ks, ks) / d) / math.sqrt(d)
    unitaries = tuple(basis.elements[i] for i in indices)

    circuits = []
    policies = []
    for k, row in enumerate(coeffs):
        s = float(np.linalg.norm(row))
        if s < 1e-14:
            raise ValueError(f"Kraus operator {k} has zero coefficient row")
        circuits.append(
            DilationCircuit(
                system_dim=ch.dim,
                ancilla_dim=d,
                v=complete_unitary(row / s),
                w=fourier_adjoint,
                unitaries=unitaries,
            )
        )
        policies.append(SelectOutcomes(((0, d * s * s),)))
    return SimulationPlan(
        tuple(circuits), tuple(policies), label=f"{ch.label} via branch"
    )


def compile_auto(ch: KrausChannel, basis: UnitaryBasis) -> SimulationPlan:
    """Try diagonal-chi, then kraus-matched, then branch."""
    for strategy in (compile_diagonal_chi, compile_kraus_matched):
        try:
            return strategy(ch, basis)
        except StrategyNotApplicableError:
            continue
    return compile_branch(ch, basis)


def _pd_vw(lam: float) -> np.ndarray:
    hi = math.sqrt((1.0 + math.sqrt(max(0.0, 1.0 - lam))) / 2.0)
    lo = math.sqrt((1.0 - math.sqrt(max(0.0, 1.0 - lam))) / 2.0)
    return np.array([[hi, lo], [lo, -hi]], dtype=complex)


_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _dep_v(p: float) -> np.ndarray:
    q = p / 4.0
    return np.array(
        [
            [
                math.sqrt(1.0 - 3.0 * q),
                -math.sqrt(q * (1.0 - 3.0 * q) / (1.0 - q)),
                -math.sqrt(q * (1.0 - 3.0 * q) / ((1.0 - q) * (1.0 - 2.0 * q))),
                -math.sqrt(p / (4.0 - 2.0 * p)),
            ],
            [math.sqrt(q), math.sqrt(1.0 - q), 0.0, 0.0],
            [
                math.sqrt(q),
                -q / math.sqrt(1.0 - q),
                math.sqrt((1.0 - 2.0 * q) / (1.0 - q)),
                0.0,
            ],
            [
                math.sqrt(q),
                -q / math.sqrt(1.0 - q),
                -q / math.sqrt((1.0 - q) * (1.0 - 2.0 * q)),
                math.sqrt((4.0 - 3.0 * p) / (4.0 - 2.0 * p)),
            ],
        ],
        dtype=complex,
    )


def paper_preset(name: str, param: float) -> SimulationPlan:
    """Hand-derived circuits for the pd/ad/dep presets.

    * pd: the explicit 2x2 V = W over controls (I, Z), trace-all.
    * ad: two post-selected circuits -- the pd setting keeping outcome 0
      with weight 1, plus a Hadamard-like setting over (X, iY) keeping
      outcome 0 with weight lam.
    * dep: the explicit 4x4 V with W = I over controls (I, X, Y, Z),
      trace-all.
    """
    spec = ChannelPreset(name, param)  # validates name and range
    if spec.kind == "pd":
        vw = _pd_vw(param)
        circuit = DilationCircuit(2, 2, vw, vw, (PAULI_I, PAULI_Z))
        return SimulationPlan((circuit,), (TraceAll(),), label=f"pd({param:g}) paper circuit")
    if spec.kind == "ad":
        first = DilationCircuit(2, 2, _pd_vw(param), _pd_vw(param), (PAULI_I, PAULI_Z))
        second = DilationCircuit(2, 2, _HADAMARD, _HADAMARD, (PAULI_X, 1j * PAULI_Y))
        return SimulationPlan(
            (first, second),
            (SelectOutcomes(((0, 1.0),)), SelectOutcomes(((0, param),))),
            label=f"ad({param:g}) paper two-step circuit",
        )
    circuit = DilationCircuit(
        2, 4, _dep_v(param), np.eye(4, dtype=complex), (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)
    )
    return SimulationPlan((circuit,), (TraceAll(),), label=f"dep({param:g}) paper circuit")


def compile_preset(
    name: str, param: float, strategy: str = "auto", basis_kind: str = "pauli"
) -> SimulationPlan:
    """Compile a named preset with the requested strategy and basis."""
    if strategy not in STRATEGY_NAMES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGY_NAMES}")
    if strategy == "paper":
        return paper_preset(name, param)  # hand-derived circuits fix their own basis
    ch = channel_preset(ChannelPreset(name, param))
    basis = basis_by_name(basis_kind, ch.dim)
    if strategy == "auto":
        return compile_auto(ch, basis)
    if strategy == "diagonal":
        return compile_diagonal_chi(ch, basis)
    if strategy == "matched":
        return compile_kraus_matched(ch, basis)
    return compile_branch(ch, basis)


def _matrix_to_lists(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _matrix_from_lists(data: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def _policy_to_dict(policy: Policy) -> dict:
    if isinstance(policy, TraceAll):
        return {"kind": "trace_all"}
    return {"kind": "select", "outcomes": [[k, w] for k, w in policy.outcomes]}


def _policy_from_dict(data: dict) -> Policy:
    if data["kind"] == "trace_all":
        return TraceAll()
    if data["kind"] == "select":
        return SelectOutcomes(tuple((int(k), float(w)) for k, w in data["outcomes"]))
    raise ValueError(f"unknown policy kind {data['kind']!r}")


def plan_to_json(plan: SimulationPlan) -> str:
    """Serialize a plan; complex entries become [re, im] pairs."""
    doc = {
        "label": plan.label,
        "circuits": [
            {
                "system_dim": c.system_dim,
                "ancilla_dim": c.ancilla_dim,
                "V": _matrix_to_lists(c.v),
                "W": _matrix_to_lists(c.w),
                "unitaries": [_matrix_to_lists(u) for u in c.unitaries],
                "policy": _policy_to_dict(p),
            }
            for c, p in zip(plan.circuits, plan.policies)
        ],
    }
    return json.dumps(doc, indent=2)


def plan_from_json(text: str) -> SimulationPlan:
    doc = json.loads(text)
    circuits = []
    policies = []
    for entry in doc["circuits"]:
        circuits.append(
            DilationCircuit(
                system_dim=int(entry["system_dim"]),
                ancilla_dim=int(entry["ancilla_dim"]),
                v=_matrix_from_lists(entry["V"]),
                w=_matrix_from_lists(entry["W"]),
                unitaries=tuple(_matrix_from_lists(u) for u in entry["unitaries"]),
            )
        )
        policies.append(_policy_from_dict(entry["policy"]))
    return SimulationPlan(tuple(circuits), tuple(policies), label=doc.get("label", ""))

"""Decomposition of multi-controlled local gates into singles and CNOTs.

Targets are tensor products of single-qubit unitaries (times a global
phase). A gate with m controls is reduced recursively: C_m(U) becomes
C_1(M), an (m-1)-controlled X, C_1(M+), the (m-1)-controlled X again and
C_{m-1}(M), where M is the factor-wise principal square root of U. The
multi-controlled X is handled by the same recursion with target X, so no
ancilla wires are ever introduced and measured gate counts grow
quadratically in m. Singly-controlled 2x2 gates expand into at most two
CNOTs plus basis-change rotations, with a phase rotation on the control
when the target's determinant is not 1; C_1(X) stays a bare CNOT.

Closed-form gate-count models for full channel constructions are exposed
by :func:`cost_model`; these are asymptotic formulas evaluated with their
leading constants, not measured tallies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import PAULI_I, PAULI_X, UNITARITY_ATOL, unitarity_residual

MAX_WIRES = 12
_IDENTITY_ATOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """Elementary gate: a single-qubit unitary or a CNOT."""

    kind: str
    wires: tuple[int, ...]
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind == "single":
            if len(self.wires) != 1:
                raise ValueError("single-qubit gate needs exactly one wire")
            m = np.array(self.matrix, dtype=complex)
            if m.shape != (2, 2) or unitarity_residual(m) > UNITARITY_ATOL:
                raise ValueError("single-qubit gate matrix must be 2x2 unitary")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        elif self.kind == "cnot":
            if len(self.wires) != 2 or self.wires[0] == self.wires[1]:
                raise ValueError("cnot needs two distinct wires")
            if self.matrix is not None:
                raise ValueError("cnot carries no matrix")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))

    @classmethod
    def single(cls, wire: int, matrix: np.ndarray) -> "Gate":
        return cls("single", (wire,), matrix)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("cnot", (control, target))


@dataclass(frozen=True)
class GateList:
    """Ordered gate sequence over a fixed wire count (first gate acts first)."""

    wire_count: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        for gate in self.gates:
            if max(gate.wires) >= self.wire_count or min(gate.wires) < 0:
                raise ValueError(f"gate wires {gate.wires} exceed wire count {self.wire_count}")


class GateCounts(NamedTuple):
    single: int
    cnot: int


@dataclass(frozen=True)
class LocalUnitary:
    """Tensor product of single-qubit unitaries times a unit global phase."""

    factors: tuple[np.ndarray, ...]
    global_phase: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a local unitary needs at least one factor")
        frozen = []
        for i, f in enumerate(self.factors):
            m = np.array(f, dtype=complex)
            if m.shape != (2, 2) or unitarity_residual(m) > UNITARITY_ATOL:
                raise ValueError(f"factor {i} must be a 2x2 unitary")
            m.setflags(write=False)
            frozen.append(m)
        if abs(abs(complex(self.global_phase)) - 1.0) > 1e-12:
            raise ValueError("global phase must have unit modulus")
        object.__setattr__(self, "factors", tuple(frozen))
        object.__setattr__(self, "global_phase", complex(self.global_phase))

    @property
    def n_wires(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        m = np.array([[self.global_phase]])
        for f in self.factors:
            m = np.kron(m, f)
        return m

    def adjoint(self) -> "LocalUnitary":
        return LocalUnitary(
            tuple(f.conj().T for f in self.factors), np.conj(self.global_phase)
        )


def _principal_phase_sqrt(z: complex) -> complex:
    theta = math.atan2(z.imag, z.real)
    if theta <= -math.pi + 1e-12:  # fold the branch cut onto +pi
        theta += 2.0 * math.pi
    return complex(math.cos(theta / 2.0), math.sin(theta / 2.0))


def _sqrt_2x2_unitary(u: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 unitary (eigenphases halved)."""
    lam = np.linalg.eigvals(u)
    lam = lam / np.abs(lam)
    mu = np.array([_principal_phase_sqrt(complex(z)) for z in lam])
    eye = np.eye(2, dtype=complex)
    if abs(lam[0] - lam[1]) < 1e-9:
        slope = 1.0 / (2.0 * mu[0])
    else:
        slope = (mu[0] - mu[1]) / (lam[0] - lam[1])
    return mu[1] * eye + slope * (u - lam[1] * eye)


def local_sqrt(u: LocalUnitary) -> LocalUnitary:
    """Factor-wise principal square root; squaring restores u exactly."""
    return LocalUnitary(
        tuple(_sqrt_2x2_unitary(f) for f in u.factors),
        _principal_phase_sqrt(u.global_phase),
    )


def _zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """Angles with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = math.atan2(det.imag, det.real) / 2.0
    su = u * np.exp(-1j * alpha)
    gamma = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[1, 0]) < 1e-12:
        beta = -2.0 * math.atan2(su[0, 0].imag, su[0, 0].real)
        delta = 0.0
    elif abs(su[0, 0]) < 1e-12:
        beta = 2.0 * math.atan2(su[1, 0].imag, su[1, 0].real)
        delta = 0.0
    else:
        phase_sum = -math.atan2(su[0, 0].imag, su[0, 0].real)  # (beta+delta)/2
        phase_diff = math.atan2(su[1, 0].imag, su[1, 0].real)  # (beta-delta)/2
        beta = phase_sum + phase_diff
        delta = phase_sum - phase_diff
    return alpha, beta, gamma, delta


def _rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=complex
    )


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _controlled_2x2(control: int, target: int, u: np.ndarray, out: list[Gate]) -> complex:
    """Emit gates for a singly-controlled 2x2 unitary; returns the phase
    that still has to be applied to the control wire."""
    if np.allclose(u, PAULI_I, atol=_IDENTITY_ATOL):
        return 1.0 + 0.0j
    if np.allclose(u, PAULI_X, atol=_IDENTITY_ATOL):
        out.append(Gate.cnot(control, target))
        return 1.0 + 0.0j
    alpha, beta, gamma, delta = _zyz_angles(u)
    gate_c = _rz((delta - beta) / 2.0)
    gate_b = _ry(-gamma / 2.0) @ _rz(-(delta + beta) / 2.0)
    gate_a = _rz(beta) @ _ry(gamma / 2.0)
    out.append(Gate.single(target, gate_c))
    out.append(Gate.cnot(control, target))
    out.append(Gate.single(target, gate_b))
    out.append(Gate.cnot(control, target))
    out.append(Gate.single(target, gate_a))
    return complex(np.exp(1j * alpha))


def _emit_controlled(
    controls: list[int], targets: list[int], u: LocalUnitary, out: list[Gate]
) -> None:
    if not controls:
        phase_left = u.global_phase
        for offset, factor in enumerate(u.factors):
            out.append(Gate.single(targets[offset], phase_left * factor))
            phase_left = 1.0 + 0.0j
        return

    if len(controls) == 1:
        control = controls[0]
        control_phase = u.global_phase
        for offset, factor in enumerate(u.factors):
            control_phase *= _controlled_2x2(control, targets[offset], factor, out)
        if abs(control_phase - 1.0) > _IDENTITY_ATOL:
            out.append(Gate.single(control, np.diag([1.0, control_phase])))
        return

    *rest, last = controls
    half = local_sqrt(u)
    x_local = LocalUnitary((PAULI_X,))
    _emit_controlled([last], targets, half, out)
    _emit_controlled(rest, [last], x_local, out)
    _emit_controlled([last], targets, half.adjoint(), out)
    _emit_controlled(rest, [last], x_local, out)
    _emit_controlled(rest, targets, half, out)


def decompose_controlled(controls: int, target: LocalUnitary) -> GateList:
    """Gate list realizing the target controlled on ``controls`` wires.

    Wires 0..controls-1 are the controls, the remaining n wires hold the
    target factors in order.
    """
    if controls < 0:
        raise ValueError(f"control count must be nonnegative, got {controls}")
    total = controls + target.n_wires
    if total > MAX_WIRES:
        raise ValueError(f"{total} wires exceed the {MAX_WIRES}-wire budget")
    out: list[Gate] = []
    _emit_controlled(
        list(range(controls)),
        list(range(controls, total)),
        target,
        out,
    )
    return GateList(total, tuple(out))


def count_gates(gates: GateList) -> GateCounts:
    """Exact per-kind tallies."""
    single = sum(1 for g in gates.gates if g.kind == "single")
    return GateCounts(single, len(gates.gates) - single)


def _embed_single(wire: int, u: np.ndarray, wire_count: int) -> np.ndarray:
    m = np.array([[1.0 + 0.0j]])
    for w in range(wire_count):
        m = np.kron(m, u if w == wire else PAULI_I)
    return m


def _embed_cnot(control: int, target: int, wire_count: int) -> np.ndarray:
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    term0 = np.array([[1.0 + 0.0j]])
    term1 = np.array([[1.0 + 0.0j]])
    for w in range(wire_count):
        term0 = np.kron(term0, p0 if w == control else PAULI_I)
        term1 = np.kron(term1, p1 if w == control else (PAULI_X if w == target else PAULI_I))
    return term0 + term1


def reconstruct(gates: GateList) -> np.ndarray:
    """Matrix of the gate sequence (first gate rightmost in the product)."""
    if gates.wire_count > MAX_WIRES:
        raise ValueError(f"{gates.wire_count} wires exceed the {MAX_WIRES}-wire budget")
    total = np.eye(2**gates.wire_count, dtype=complex)
    for gate in gates.gates:
        if gate.kind == "single":
            embedded = _embed_single(gate.wires[0], gate.matrix, gates.wire_count)
        else:
            embedded = _embed_cnot(gate.wires[0], gate.wires[1], gates.wire_count)
        total = embedded @ total
    return total


def controlled_matrix(controls: int, target: LocalUnitary) -> np.ndarray:
    """Projector-built reference matrix for the controlled target."""
    dim_c = 2**controls
    dim_t = 2**target.n_wires
    top = np.zeros((dim_c, dim_c), dtype=complex)
    top[dim_c - 1, dim_c - 1] = 1.0
    rest = np.eye(dim_c, dtype=complex) - top
    return np.kron(rest, np.eye(dim_t, dtype=complex)) + np.kron(top, target.matrix())


def cost_model(method: str, n: int) -> int:
    """Leading-order gate-count model for an n-qubit channel construction.

    ``lcu``: arbitrary 2n-qubit ancilla preparation/recombination plus the
    controlled basis operators, 8 n^3 2^{4n} + n^2 2^{2n}. ``stinespring``:
    one arbitrary unitary on the enlarged 3n-qubit space, 27 n^3 2^{6n}.
    Model values, not measured tallies.
    """
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    if method == "lcu":
        return 8 * n**3 * 2 ** (4 * n) + n**2 * 2 ** (2 * n)
    if method == "stinespring":
        return 27 * n**3 * 2 ** (6 * n)
    raise ValueError(f"unknown cost model {method!r}, expected 'lcu' or 'stinespring'")


def gatelist_to_json(gates: GateList) -> str:
    """Serialize a gate list; matrices become [re, im] pair grids."""
    entries = []
    for gate in gates.gates:
        entry: dict = {"kind": gate.kind, "wires": list(gate.wires)}
        if gate.kind == "single":
            entry["matrix"] = [
                [[float(z.real), float(z.imag)] for z in row] for row in gate.matrix
            ]
        entries.append(entry)
    return json.dumps({"wires": gates.wire_count, "gates": entries}, indent=2)


def gatelist_from_json(text: str) -> GateList:
    doc = json.loads(text)
    gates = []
    for entry in doc["gates"]:
        if entry["kind"] == "single":
            matrix = np.array(
                [[complex(re, im) for re, im in row] for row in entry["matrix"]]
            )
            gates.append(Gate.single(entry["wires"][0], matrix))
        else:
            gates.append(Gate.cnot(entry["wires"][0], entry["wires"][1]))
    return GateList(int(doc["wires"]), tuple(gates))

"""Orthogonal unitary operator bases and the process (chi) matrix.

Every operator on a D-dimensional system expands as ``E = sum_i c_i U_i``
over D^2 pairwise trace-orthogonal unitaries with ``c_i = Tr(U_i^+ E)/D``.
Two families are provided: tensor products of Pauli matrices (qubits) and
shift-and-clock Weyl operators (any D >= 2). The chi matrix
``chi_ij = sum_k c_ki conj(c_kj)`` is the representation-independent
fingerprint of a channel in a fixed basis; its shape (diagonal or not)
selects the circuit-compilation strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channels import KrausChannel
from .linalg import (
    DensityMatrix,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    UNITARITY_ATOL,
    unitarity_residual,
)

ORTHOGONALITY_ATOL = 1e-10
CHI_TRACE_ATOL = 1e-10
CHI_EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True)
class UnitaryBasis:
    """Ordered family of D^2 unitaries with Tr(U_i^+ U_j) = D delta_ij."""

    dim: int
    elements: tuple[np.ndarray, ...]
    kind: str

    def __post_init__(self) -> None:
        frozen = []
        for idx, u in enumerate(self.elements):
            m = np.array(u, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"basis element {idx} has shape {m.shape}")
            if unitarity_residual(m) > UNITARITY_ATOL:
                raise ValueError(f"basis element {idx} is not unitary")
            m.setflags(write=False)
            frozen.append(m)
        object.__setattr__(self, "elements", tuple(frozen))
        stack = np.stack(self.elements).reshape(len(self.elements), -1)
        gram = stack.conj() @ stack.T
        target = self.dim * np.eye(len(self.elements))
        if float(np.max(np.abs(gram - target))) > ORTHOGONALITY_ATOL:
            raise ValueError("basis elements are not pairwise trace-orthogonal")

    def __len__(self) -> int:
        return len(self.elements)


def pauli_basis(n: int) -> UnitaryBasis:
    """Tensor products of (I, X, Y, Z) over n qubits, lexicographic order.

    The first qubit is the major factor: for n=2 the element at index
    ``4*i + j`` is ``P_i (x) P_j``.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"pauli_basis supports 1..4 qubits, got {n}")
    singles = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)
    elements = []
    for combo in product(singles, repeat=n):
        m = combo[0]
        for factor in combo[1:]:
            m = np.kron(m, factor)
        elements.append(m)
    return UnitaryBasis(2**n, tuple(elements), "pauli")


def weyl_basis(dim: int) -> UnitaryBasis:
    """Shift-and-clock operators U_nm = sum_k w^{kn} |k><(k+m) mod D|.

    Indexed row-major over (n, m) with w = exp(2 pi i / D); U_00 = I and
    every other element is traceless.
    """
    if dim < 2:
        raise ValueError(f"weyl_basis needs dim >= 2, got {dim}")
    omega = np.exp(2j * np.pi / dim)
    ks = np.arange(dim)
    elements = []
    for n in range(dim):
        phases = omega ** (ks * n)
        for m in range(dim):
            u = np.zeros((dim, dim), dtype=complex)
            u[ks, (ks + m) % dim] = phases
            elements.append(u)
    return UnitaryBasis(dim, tuple(elements), "weyl")


def basis_by_name(name: str, dim: int) -> UnitaryBasis:
    """Look up a basis family by its config-file name."""
    if name == "pauli":
        n = int(round(np.log2(dim)))
        if 2**n != dim:
            raise ValueError(f"pauli basis needs a power-of-two dim, got {dim}")
        return pauli_basis(n)
    if name == "weyl":
        return weyl_basis(dim)
    raise ValueError(f"unknown basis kind {name!r}, expected 'pauli' or 'weyl'")


def decompose_operator(e: np.ndarray, basis: UnitaryBasis) -> np.ndarray:
    """Coefficient row c with e = sum_i c_i U_i, via c_i = Tr(U_i^+ e)/D."""
    m = np.asarray(e, dtype=complex)
    if m.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {m.shape} does not match basis dim {basis.dim}")
    return np.array(
        [np.trace(u.conj().T @ m) / basis.dim for u in basis.elements], dtype=complex
    )


def reconstruct_operator(coeffs: np.ndarray, basis: UnitaryBasis) -> np.ndarray:
    """Inverse of :func:`decompose_operator`: sum_i c_i U_i."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} coefficients, got {coeffs.shape}")
    return np.tensordot(coeffs, np.stack(basis.elements), axes=1)


def coefficient_matrix(ch: KrausChannel, basis: UnitaryBasis) -> np.ndarray:
    """K x d matrix whose row k expands Kraus operator k over the basis."""
    if ch.dim != basis.dim:
        raise ValueError(f"channel dim {ch.dim} does not match basis dim {basis.dim}")
    return np.stack([decompose_operator(op, basis) for op in ch.ops])


@dataclass(frozen=True)
class ChiMatrix:
    """Hermitian PSD process matrix of a channel in a unitary basis."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"chi matrix must be square, got {m.shape}")
        if float(np.max(np.abs(m - m.conj().T))) > 1e-10:
            raise ValueError("chi matrix is not Hermitian")
        low = float(np.linalg.eigvalsh(m).min())
        if low < CHI_EIGENVALUE_FLOOR:
            raise ValueError(f"chi matrix is not PSD (min eigenvalue {low:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def max_off_diagonal(self) -> float:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off))) if self.dim > 1 else 0.0


def chi_matrix(ch: KrausChannel, basis: UnitaryBasis) -> ChiMatrix:
    """chi_ij = sum_k c_ki conj(c_kj); invariant under Kraus gauge changes."""
    c = coefficient_matrix(ch, basis)
    chi = c.T @ c.conj()
    return ChiMatrix((chi + chi.conj().T) / 2.0)


def reconstruct_channel(
    chi: ChiMatrix, basis: UnitaryBasis, rho: DensityMatrix
) -> DensityMatrix:
    """Apply sum_ij chi_ij U_i rho U_j^+ directly from the process matrix."""
    if chi.dim != len(basis):
        raise ValueError(f"chi dim {chi.dim} does not match basis size {len(basis)}")
    if basis.dim != rho.dim:
        raise ValueError(f"basis dim {basis.dim} does not match state dim {rho.dim}")
    if abs(float(np.real(np.trace(chi.matrix))) - 1.0) > CHI_TRACE_ATOL:
        raise ValueError("chi matrix of a trace-preserving channel must have trace 1")
    stack = np.stack(basis.elements)
    out = np.einsum("ij,iab,bc,jdc->ad", chi.matrix, stack, rho.matrix, stack.conj())
    return DensityMatrix(out)

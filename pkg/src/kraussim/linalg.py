"""Dense complex linear algebra and quantum-state primitives.

Conventions shared by the whole package:

* Matrices are 2-D ``numpy.complex128`` arrays, row-major.
* Kronecker products put the first factor on the high-order index
  (composite index = ``i_a * dim_b + i_b``).
* Floating-point comparisons are absolute, with explicit tolerances.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
UNITARITY_ATOL = 1e-12

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def unitarity_residual(m: np.ndarray) -> float:
    """Max absolute entry of U†U - I."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_unitary(m: np.ndarray, atol: float = UNITARITY_ATOL) -> bool:
    return unitarity_residual(m) <= atol


class BlochVector(NamedTuple):
    """Pauli expectation values (<sx>, <sy>, <sz>) of a qubit state."""

    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)


class DensityMatrix:
    """Hermitian, positive, unit-trace matrix over a composite register.

    Validated at construction: hermiticity and trace within 1e-12,
    eigenvalues >= -1e-10. Instances are immutable.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > HERMITICITY_ATOL:
            raise ValueError(f"matrix is not Hermitian (deviation {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace must be 1, got {tr}")
        low = float(np.linalg.eigvalsh(m).min())
        if low < EIGENVALUE_FLOOR:
            raise ValueError(f"matrix is not positive (min eigenvalue {low:.3e})")
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def pure_state(amplitudes: Sequence[complex]) -> DensityMatrix:
    """Projector |psi><psi| onto the (normalized) amplitude vector."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(psi))
    if norm < 1e-12:
        raise ValueError("cannot normalize a zero state vector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()))


def basis_state(index: int, dim: int) -> DensityMatrix:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return pure_state(psi)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the major factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(
    rho: DensityMatrix, dims: Sequence[int], keep: Iterable[int]
) -> DensityMatrix:
    """Reduced state over the ``keep`` factors, in their original order.

    ``dims`` lists the factor dimensions of the composite register
    (major factor first); their product must equal ``rho.dim``.
    """
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.dim:
        raise ValueError(f"factor dims {dims} do not multiply to {rho.dim}")
    kept = sorted(set(int(k) for k in keep))
    if not kept:
        raise ValueError("keep must name at least one factor")
    if kept[0] < 0 or kept[-1] >= len(dims):
        raise ValueError(f"keep indices {kept} out of range for {len(dims)} factors")

    n = len(dims)
    arr = rho.matrix.reshape(dims + dims)
    kept_set = set(kept)
    row_labels = list(range(n))
    col_labels = [n + i if i in kept_set else i for i in range(n)]
    out_labels = kept + [n + i for i in kept]
    reduced = np.einsum(arr, row_labels + col_labels, out_labels)
    d_keep = int(np.prod([dims[k] for k in kept]))
    return DensityMatrix(reduced.reshape(d_keep, d_keep))


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Overlap fidelity Tr(ab) / sqrt(Tr(a^2) Tr(b^2))."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    purity_a = float(np.real(np.trace(a.matrix @ a.matrix)))
    purity_b = float(np.real(np.trace(b.matrix @ b.matrix)))
    if purity_a < 1e-300 or purity_b < 1e-300:
        raise ZeroDivisionError("purity factor underflow in fidelity")
    overlap = float(np.real(np.trace(a.matrix @ b.matrix)))
    return overlap / math.sqrt(purity_a * purity_b)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Spectral entropy -sum(p log2 p), with 0 log 0 := 0."""
    eigs = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, 1.0)
    nonzero = eigs[eigs > 0.0]
    return float(-np.sum(nonzero * np.log2(nonzero)) + 0.0)  # avoid -0.0


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """Pauli expectations of a single-qubit state."""
    if rho.dim != 2:
        raise ValueError(f"bloch_vector needs a qubit state, got dim {rho.dim}")
    m = rho.matrix
    return BlochVector(
        float(np.real(np.trace(m @ PAULI_X))),
        float(np.real(np.trace(m @ PAULI_Y))),
        float(np.real(np.trace(m @ PAULI_Z))),
    )


def state_from_bloch(v: BlochVector | Sequence[float]) -> DensityMatrix:
    """Qubit state (I + x sx + y sy + z sz) / 2 for |v| <= 1."""
    x, y, z = (float(c) for c in v)
    if x * x + y * y + z * z > 1.0 + 1e-10:
        raise ValueError(f"Bloch vector ({x}, {y}, {z}) lies outside the unit ball")
    return DensityMatrix(0.5 * (PAULI_I + x * PAULI_X + y * PAULI_Y + z * PAULI_Z))


def random_pure_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state of the given dimension."""
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure_state(psi)


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random mixed state (normalized Wishart matrix)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    w = g @ g.conj().T
    return DensityMatrix(w / np.trace(w))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase fix)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases

"""Ensemble readout model: pseudo-pure states, spectral peaks, tomography.

The register is ordered with the observed (system) qubit as the major
factor, so spin observables take the form ``sigma (x) P`` with P acting
on the remaining qubits. Expectation values are exact traces: ensemble
readout measures averages, so no shot noise is modeled.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import DensityMatrix, PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, tensor_product

_PEAK_SIGMA = {"x": PAULI_X, "y": PAULI_Y}  # peaks observe transverse spin only


class PeakExpectation(NamedTuple):
    m: int
    x: float
    y: float


def pps_state(n: int, epsilon: float) -> DensityMatrix:
    """Pseudo-pure state (1-eps)/2^n I + eps |0..0><0..0| on n qubits."""
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"polarization must lie in [0, 1], got {epsilon}")
    dim = 2**n
    m = np.eye(dim, dtype=complex) * ((1.0 - epsilon) / dim)
    m[0, 0] += epsilon
    return DensityMatrix(m)


def thermal_state(n: int, polarizations: Sequence[float]) -> DensityMatrix:
    """High-temperature equilibrium state I/2^n + sum_i eps_i Z_i."""
    if len(polarizations) != n:
        raise ValueError(f"expected {n} polarizations, got {len(polarizations)}")
    dim = 2**n
    m = np.eye(dim, dtype=complex) / dim
    for i, eps in enumerate(polarizations):
        factors = [PAULI_Z if j == i else PAULI_I for j in range(n)]
        term = factors[0]
        for f in factors[1:]:
            term = np.kron(term, f)
        m += float(eps) * term
    low = float(np.linalg.eigvalsh(m).min())
    if low < -1e-12:
        raise ValueError(f"polarizations too large: state not positive (min {low:.3e})")
    return DensityMatrix(m)


def peak_observable(axis: str, m: int, n: int) -> np.ndarray:
    """Spin observable of the m-th spectral peak (m = 1 .. 2^{n-1}):
    sigma_axis on the system qubit, projector |b(m-1)><b(m-1)| on the rest."""
    if axis not in _PEAK_SIGMA:
        raise ValueError(f"axis must be one of {tuple(_PEAK_SIGMA)}, got {axis!r}")
    n_rest = n - 1
    if not 1 <= m <= 2**n_rest:
        raise ValueError(f"peak index {m} out of range for {n} qubits")
    if n_rest == 0:
        return _PEAK_SIGMA[axis].copy()
    proj = np.zeros((2**n_rest, 2**n_rest), dtype=complex)
    proj[m - 1, m - 1] = 1.0  # row index is the binary word b(m-1, n-1)
    return tensor_product(_PEAK_SIGMA[axis], proj)


def peak_expectations(rho_sa: DensityMatrix, n: int) -> list[PeakExpectation]:
    """Per-peak x and y expectations; summing over peaks gives the total
    transverse magnetization <sigma (x) I>."""
    if rho_sa.dim != 2**n:
        raise ValueError(f"state dim {rho_sa.dim} does not match {n} qubits")
    rows = []
    for m in range(1, 2 ** (n - 1) + 1):
        ex = float(np.real(np.trace(rho_sa.matrix @ peak_observable("x", m, n))))
        ey = float(np.real(np.trace(rho_sa.matrix @ peak_observable("y", m, n))))
        rows.append(PeakExpectation(m, ex, ey))
    return rows


def readout_z(rho_sa: DensityMatrix, n: int) -> float:
    """z magnetization via a pi/2 rotation about y followed by an x readout.

    The pulse maps z onto x, so the returned value equals the direct
    expectation <sigma_z (x) I>.
    """
    if rho_sa.dim != 2**n:
        raise ValueError(f"state dim {rho_sa.dim} does not match {n} qubits")
    pulse_1q = np.array(
        [[math.cos(math.pi / 4), -math.sin(math.pi / 4)],
         [math.sin(math.pi / 4), math.cos(math.pi / 4)]],
        dtype=complex,
    )  # exp(-i (pi/4) sigma_y)
    pulse = tensor_product(pulse_1q, np.eye(2 ** (n - 1), dtype=complex))
    rotated = pulse @ rho_sa.matrix @ pulse.conj().T
    mx_total = tensor_product(PAULI_X, np.eye(2 ** (n - 1), dtype=complex))
    return float(np.real(np.trace(rotated @ mx_total)))


def tomography_reconstruct(
    expectations: Sequence[float], scale: float = 1.0
) -> DensityMatrix:
    """Single-qubit state from the measured (x, y, z) magnetizations.

    rho = (I + ex sx + ey sy + ez sz) / 2 after dividing raw signals by
    ``scale``; the default 1 expects true expectation values, a larger
    scale accommodates signal-amplitude conventions.
    """
    if len(expectations) != 3:
        raise ValueError("expected the three magnetizations (x, y, z)")
    ex, ey, ez = (float(e) / scale for e in expectations)
    for value in (ex, ey, ez):
        if abs(value) > 1.0 + 1e-10:
            raise ValueError(f"expectation {value} outside [-1, 1]")
    if math.sqrt(ex**2 + ey**2 + ez**2) > 1.0 + 1e-8:
        raise ValueError("magnetizations lie outside the Bloch ball")
    return DensityMatrix(
        0.5 * (PAULI_I + ex * PAULI_X + ey * PAULI_Y + ez * PAULI_Z)
    )


def deviation_metric(sim: Sequence[float], th: Sequence[float]) -> float:
    """Sample standard deviation sqrt(sum (sim-th)^2 / (M-1)) of a sweep."""
    if len(sim) != len(th):
        raise ValueError(f"series lengths differ: {len(sim)} vs {len(th)}")
    if len(sim) < 2:
        raise ValueError("need at least two sample points")
    diffs = np.asarray(sim, dtype=float) - np.asarray(th, dtype=float)
    return float(math.sqrt(float(np.sum(diffs**2)) / (len(sim) - 1)))


def deviation_part(rho: DensityMatrix) -> np.ndarray:
    """Traceless part of a state; expectation values of traceless
    observables are unchanged by dropping the uniform background."""
    return rho.matrix - np.eye(rho.dim, dtype=complex) * (1.0 / rho.dim)

"""Qubit noise channels in Kraus form.

A channel acts as ``rho -> sum_k E_k rho E_k^dagger`` with the
trace-preservation condition ``sum_k E_k^dagger E_k = I``. Direct Kraus
application (:func:`apply_channel`) is the oracle every compiled circuit
is verified against.

Built-in presets, each parameterized over [0, 1]:

* ``pd`` -- phase damping, strength ``lam``:
    E0 = [[1, 0], [0, sqrt(1-lam)]],  E1 = [[0, 0], [0, sqrt(lam)]]
* ``ad`` -- amplitude damping, strength ``lam``:
    M0 = [[1, 0], [0, sqrt(1-lam)]],  M1 = [[0, sqrt(lam)], [0, 0]]
* ``dep`` -- depolarizing, probability ``p``:
    E0 = sqrt(1-3p/4) I,  E_{1..3} = sqrt(p/4) (sx, sy, sz)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    BlochVector,
    DensityMatrix,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
)

CPTP_ATOL = 1e-10
ZERO_OP_NORM = 1e-14

PRESET_KINDS = ("pd", "ad", "dep")


@dataclass(frozen=True)
class KrausChannel:
    """Ordered Kraus operators over a ``dim``-dimensional system.

    Construction checks shapes only; trace preservation is a separate,
    reportable property (:func:`validate_cptp`) so that deliberately
    incomplete operator sets can still be represented.
    """

    dim: int
    ops: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if not self.ops:
            raise ValueError("a channel needs at least one Kraus operator")
        frozen = []
        for k, op in enumerate(self.ops):
            m = np.array(op, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ValueError(
                    f"Kraus operator {k} has shape {m.shape}, expected "
                    f"({self.dim}, {self.dim})"
                )
            m.setflags(write=False)
            frozen.append(m)
        object.__setattr__(self, "ops", tuple(frozen))


class CptpReport(NamedTuple):
    max_deviation: float
    ok: bool


@dataclass(frozen=True)
class ChannelPreset:
    """Named channel family plus its strength parameter in [0, 1]."""

    kind: str
    param: float

    def __post_init__(self) -> None:
        if self.kind not in PRESET_KINDS:
            raise ValueError(f"unknown preset kind {self.kind!r}, expected one of {PRESET_KINDS}")
        if not 0.0 <= self.param <= 1.0:
            raise ValueError(f"preset parameter must lie in [0, 1], got {self.param}")


class AdSplit(NamedTuple):
    """Amplitude damping written as M0 rho M0+ + weight * jump rho jump+."""

    m0: np.ndarray
    jump: np.ndarray
    weight: float


def validate_cptp(ch: KrausChannel) -> CptpReport:
    """Check sum_k E_k^dagger E_k = I; returns a report, never raises."""
    acc = np.zeros((ch.dim, ch.dim), dtype=complex)
    for op in ch.ops:
        acc += op.conj().T @ op
    deviation = float(np.max(np.abs(acc - np.eye(ch.dim))))
    return CptpReport(deviation, deviation < CPTP_ATOL)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Direct Kraus application sum_k E_k rho E_k^dagger (the oracle)."""
    if ch.dim != rho.dim:
        raise ValueError(f"channel dim {ch.dim} does not match state dim {rho.dim}")
    out = np.zeros_like(rho.matrix)
    for op in ch.ops:
        out += op @ rho.matrix @ op.conj().T
    return DensityMatrix(out)


def _sqrt_clamped(value: float) -> float:
    # rounding can push boundary expressions a hair below zero
    return math.sqrt(max(0.0, value))


def channel_preset(spec: ChannelPreset) -> KrausChannel:
    """Build the Kraus operators of a preset; zero operators are dropped."""
    p = spec.param
    if spec.kind == "pd":
        ops = [
            np.array([[1.0, 0.0], [0.0, _sqrt_clamped(1.0 - p)]], dtype=complex),
            np.array([[0.0, 0.0], [0.0, _sqrt_clamped(p)]], dtype=complex),
        ]
    elif spec.kind == "ad":
        ops = [
            np.array([[1.0, 0.0], [0.0, _sqrt_clamped(1.0 - p)]], dtype=complex),
            np.array([[0.0, _sqrt_clamped(p)], [0.0, 0.0]], dtype=complex),
        ]
    else:  # dep
        w0 = _sqrt_clamped(1.0 - 3.0 * p / 4.0)
        w = _sqrt_clamped(p / 4.0)
        ops = [w0 * PAULI_I, w * PAULI_X, w * PAULI_Y, w * PAULI_Z]

    kept = tuple(op for op in ops if np.linalg.norm(op) >= ZERO_OP_NORM)
    ch = KrausChannel(2, kept, label=f"{spec.kind}({p:g})")
    report = validate_cptp(ch)
    if not report.ok:
        raise AssertionError(
            f"preset {spec.kind}({p}) failed the CPTP check ({report.max_deviation:.3e})"
        )
    return ch


def ad_split(lam: float) -> AdSplit:
    """Two-piece form of amplitude damping used by the two-run protocol.

    ``M0 rho M0+ + lam * S0 rho S0+`` with S0 = [[0, 1], [0, 0]] equals
    the two-operator Kraus form for every input state.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"damping strength must lie in [0, 1], got {lam}")
    m0 = np.array([[1.0, 0.0], [0.0, _sqrt_clamped(1.0 - lam)]], dtype=complex)
    jump = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return AdSplit(m0, jump, lam)


def analytic_output(spec: ChannelPreset, v_in: BlochVector) -> BlochVector:
    """Closed-form Bloch image of a preset channel (expectation convention)."""
    x, y, z = v_in
    p = spec.param
    if spec.kind == "pd":
        damp = _sqrt_clamped(1.0 - p)
        return BlochVector(x * damp, y * damp, z)
    if spec.kind == "ad":
        damp = _sqrt_clamped(1.0 - p)
        return BlochVector(x * damp, y * damp, z * (1.0 - p) + p)
    return BlochVector(x * (1.0 - p), y * (1.0 - p), z * (1.0 - p))


def random_cptp_channel(
    dim: int, kraus_count: int, rng: np.random.Generator
) -> KrausChannel:
    """Random channel from a Haar-random isometry into dim * kraus_count."""
    if dim < 1 or kraus_count < 1:
        raise ValueError("dim and kraus_count must be positive")
    g = rng.standard_normal((dim * kraus_count, dim)) + 1j * rng.standard_normal(
        (dim * kraus_count, dim)
    )
    q, _ = np.linalg.qr(g)  # columns orthonormal: q is an isometry
    ops = tuple(q[k * dim : (k + 1) * dim, :] for k in range(kraus_count))
    return KrausChannel(dim, ops, label=f"random({dim},{kraus_count})")

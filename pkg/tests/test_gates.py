import numpy as np
import pytest

from kraussim.gates import (
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
from kraussim.linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, random_unitary

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def reference_controlled(m, target: LocalUnitary) -> np.ndarray:
    """Independent projector-built reference for C_m(U)."""
    dim_c = 2**m
    u = target.matrix()
    ref = np.kron(np.eye(dim_c, dtype=complex), np.eye(u.shape[0], dtype=complex))
    ref[-u.shape[0] :, -u.shape[0] :] = u
    return ref


class TestLocalSqrt:
    def test_identity(self):
        half = local_sqrt(LocalUnitary((PAULI_I,)))
        assert np.allclose(half.factors[0], PAULI_I, atol=1e-15)
        assert half.global_phase == pytest.approx(1.0)

    def test_z_principal_branch(self):
        half = local_sqrt(LocalUnitary((PAULI_Z,)))
        assert np.allclose(half.factors[0], np.diag([1.0, 1.0j]), atol=1e-12)

    def test_x_against_spectral_oracle(self):
        eigs, vecs = np.linalg.eigh(PAULI_X)
        oracle = vecs @ np.diag(np.exp(0.5j * np.angle(eigs.astype(complex)))) @ vecs.conj().T
        half = local_sqrt(LocalUnitary((PAULI_X,)))
        assert np.allclose(half.factors[0], oracle, atol=1e-12)
        assert np.allclose(half.factors[0], ((1 + 1j) * PAULI_I + (1 - 1j) * PAULI_X) / 2, atol=1e-12)

    def test_squaring_recovers_input_including_phase(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            u = LocalUnitary(
                (random_unitary(2, rng), random_unitary(2, rng)),
                global_phase=np.exp(1j * rng.uniform(-np.pi, np.pi)),
            )
            half = local_sqrt(u)
            squared = LocalUnitary(
                tuple(f @ f for f in half.factors), half.global_phase**2
            )
            assert np.max(np.abs(squared.matrix() - u.matrix())) < 1e-12


class TestDecomposeControlled:
    def test_single_cnot(self):
        gl = decompose_controlled(1, LocalUnitary((PAULI_X,)))
        assert len(gl.gates) == 1
        assert gl.gates[0].kind == "cnot" and gl.gates[0].wires == (0, 1)

    def test_toffoli_against_permutation_oracle(self):
        # independent oracle: permutation swapping |110> and |111>
        perm = np.eye(8, dtype=complex)
        perm[[6, 7]] = perm[[7, 6]]
        gl = decompose_controlled(2, LocalUnitary((PAULI_X,)))
        assert np.max(np.abs(reconstruct(gl) - perm)) < 1e-10

    def test_three_controls_two_target_wires(self):
        target = LocalUnitary((PAULI_Z, PAULI_X))
        gl = decompose_controlled(3, target)
        assert np.max(np.abs(reconstruct(gl) - reference_controlled(3, target))) < 1e-10

    @pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
    @pytest.mark.parametrize(
        "factors",
        [(PAULI_X,), (PAULI_Y,), (PAULI_Z,), (PAULI_I, PAULI_Y), (PAULI_Z, PAULI_X)],
    )
    def test_round_trip_on_pauli_products(self, m, factors):
        target = LocalUnitary(factors)
        gl = decompose_controlled(m, target)
        got = reconstruct(gl)
        assert np.max(np.abs(got - reference_controlled(m, target))) < 1e-10
        # library projector builder agrees with the local reference
        assert np.max(np.abs(controlled_matrix(m, target) - reference_controlled(m, target))) < 1e-15

    def test_global_phase_is_honored(self):
        target = LocalUnitary((PAULI_Y,), global_phase=1j)
        for m in (0, 1, 2):
            gl = decompose_controlled(m, target)
            assert np.max(np.abs(reconstruct(gl) - reference_controlled(m, target))) < 1e-10

    def test_generic_single_qubit_targets(self):
        rng = np.random.default_rng(7)
        for m in (1, 2):
            target = LocalUnitary((random_unitary(2, rng),))
            gl = decompose_controlled(m, target)
            assert np.max(np.abs(reconstruct(gl) - reference_controlled(m, target))) < 1e-10

    def test_controlled_single_qubit_gate_budget(self):
        # generic controlled 2x2: at most 2 CNOTs and 4 single-qubit gates
        rng = np.random.default_rng(11)
        counts = count_gates(decompose_controlled(1, LocalUnitary((random_unitary(2, rng),))))
        assert counts.cnot <= 2 and counts.single <= 4

    def test_wire_budget(self):
        with pytest.raises(ValueError, match="budget"):
            decompose_controlled(12, LocalUnitary((PAULI_X,)))

    def test_deterministic(self):
        a = decompose_controlled(3, LocalUnitary((PAULI_Y,)))
        b = decompose_controlled(3, LocalUnitary((PAULI_Y,)))
        assert len(a.gates) == len(b.gates)
        for g1, g2 in zip(a.gates, b.gates):
            assert g1.kind == g2.kind and g1.wires == g2.wires
            if g1.kind == "single":
                assert np.array_equal(g1.matrix, g2.matrix)


class TestCounts:
    def test_empty(self):
        assert count_gates(GateList(1, ())) == (0, 0)

    def test_single_cnot(self):
        assert count_gates(decompose_controlled(1, LocalUnitary((PAULI_X,)))) == (0, 1)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_recurrence_against_component_costs(self, m):
        # the m-control decomposition splits into two singly-controlled
        # square roots, two (m-1)-controlled X gates, and an (m-1)-control
        # recursion whose gate count matches the original target's
        def total(controls, target):
            c = count_gates(decompose_controlled(controls, target))
            return c.single + c.cnot

        z = LocalUnitary((PAULI_Z,))
        half = local_sqrt(z)
        t_m = total(m, z)
        t_prev = total(m - 1, z)
        delta_expected = (
            total(1, half)
            + total(1, half.adjoint())
            + 2 * total(m - 1, LocalUnitary((PAULI_X,)))
        )
        assert t_m - t_prev == delta_expected
        assert total(m - 1, half) == t_prev  # generic 2x2 targets cost alike

    def test_counts_grow_monotonically_in_controls(self):
        totals = []
        for m in range(1, 6):
            c = count_gates(decompose_controlled(m, LocalUnitary((PAULI_Z,))))
            totals.append(c.single + c.cnot)
        assert all(a < b for a, b in zip(totals, totals[1:]))


class TestCostModel:
    def test_frozen_values(self):
        assert cost_model("lcu", 1) == 132
        assert cost_model("lcu", 2) == 16448
        assert cost_model("stinespring", 1) == 1728
        assert cost_model("stinespring", 2) == 884736

    def test_ratio_strictly_increases(self):
        ratios = [cost_model("stinespring", n) / cost_model("lcu", n) for n in range(1, 7)]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))

    def test_errors(self):
        with pytest.raises(ValueError, match="unknown cost model"):
            cost_model("qsvt", 2)
        with pytest.raises(ValueError, match="positive"):
            cost_model("lcu", 0)


class TestReconstruct:
    def test_plain_cnot(self):
        expected = np.eye(4, dtype=complex)
        expected[[2, 3]] = expected[[3, 2]]
        gl = GateList(2, (Gate.cnot(0, 1),))
        assert np.max(np.abs(reconstruct(gl) - expected)) < 1e-15

    def test_bell_preparation(self):
        gl = GateList(2, (Gate.single(0, HADAMARD), Gate.cnot(0, 1)))
        state = reconstruct(gl) @ np.array([1, 0, 0, 0], dtype=complex)
        assert np.allclose(state, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-12)

    def test_controlled_y_round_trip(self):
        target = LocalUnitary((PAULI_Y,))
        gl = decompose_controlled(2, target)
        assert np.max(np.abs(reconstruct(gl) - reference_controlled(2, target))) < 1e-10

    def test_wire_budget(self):
        with pytest.raises(ValueError, match="budget"):
            reconstruct(GateList(13, ()))


class TestValidationAndJson:
    def test_single_gate_needs_unitary_matrix(self):
        with pytest.raises(ValueError, match="unitary"):
            Gate.single(0, np.array([[1, 1], [0, 1]]))

    def test_cnot_needs_distinct_wires(self):
        with pytest.raises(ValueError, match="distinct"):
            Gate.cnot(1, 1)

    def test_gatelist_checks_wire_indices(self):
        with pytest.raises(ValueError, match="exceed"):
            GateList(1, (Gate.cnot(0, 1),))

    def test_local_unitary_phase_modulus(self):
        with pytest.raises(ValueError, match="unit modulus"):
            LocalUnitary((PAULI_I,), global_phase=2.0)

    def test_json_round_trip(self):
        gl = decompose_controlled(2, LocalUnitary((PAULI_Y,)))
        back = gatelist_from_json(gatelist_to_json(gl))
        assert back.wire_count == gl.wire_count
        assert len(back.gates) == len(gl.gates)
        for g1, g2 in zip(gl.gates, back.gates):
            assert g1.kind == g2.kind and g1.wires == g2.wires
            if g1.kind == "single":
                assert np.array_equal(g1.matrix, g2.matrix)

import numpy as np
import pytest

from kraussim.bases import (
    ChiMatrix,
    chi_matrix,
    coefficient_matrix,
    decompose_operator,
    pauli_basis,
    reconstruct_channel,
    reconstruct_operator,
    weyl_basis,
)
from kraussim.channels import ChannelPreset, KrausChannel, apply_channel, channel_preset
from kraussim.linalg import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    bloch_vector,
    pure_state,
    random_density_matrix,
    random_unitary,
    tensor_product,
)


class TestPauliBasis:
    def test_single_qubit_order(self):
        basis = pauli_basis(1)
        for got, expected in zip(basis.elements, (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)):
            assert np.array_equal(got, expected)

    def test_two_qubit_lexicographic(self):
        basis = pauli_basis(2)
        assert len(basis) == 16
        assert np.array_equal(basis.elements[3], tensor_product(PAULI_I, PAULI_Z))
        assert np.array_equal(basis.elements[4], tensor_product(PAULI_X, PAULI_I))

    def test_pauli_trace_orthogonality(self):
        assert abs(np.trace(PAULI_X.conj().T @ PAULI_Y)) == 0.0

    @pytest.mark.parametrize("n", [0, 5])
    def test_range(self, n):
        with pytest.raises(ValueError, match="1..4"):
            pauli_basis(n)


class TestWeylBasis:
    def test_qubit_case_matches_paulis_up_to_order(self):
        basis = weyl_basis(2)
        assert np.array_equal(basis.elements[0], PAULI_I)
        assert np.allclose(basis.elements[1], PAULI_X, atol=1e-15)
        assert np.allclose(basis.elements[2], PAULI_Z, atol=1e-15)
        assert np.allclose(basis.elements[3], PAULI_Z @ PAULI_X, atol=1e-15)

    def test_qutrit_clock_operator(self):
        basis = weyl_basis(3)
        expected = np.diag([1.0, np.exp(2j * np.pi / 3), np.exp(4j * np.pi / 3)])
        assert np.allclose(basis.elements[3], expected, atol=1e-14)  # (n,m) = (1,0)

    @pytest.mark.parametrize("dim", [2, 3, 5])
    def test_all_traceless_except_identity(self, dim):
        basis = weyl_basis(dim)
        assert abs(np.trace(basis.elements[0]) - dim) < 1e-12
        for u in basis.elements[1:]:
            assert abs(np.trace(u)) < 1e-12

    def test_range(self):
        with pytest.raises(ValueError, match=">= 2"):
            weyl_basis(1)


class TestDecomposition:
    def test_basis_element_coefficients(self):
        coeffs = decompose_operator(PAULI_Z, pauli_basis(1))
        assert np.allclose(coeffs, [0, 0, 0, 1], atol=1e-15)

    @pytest.mark.parametrize("lam", [0.0, 0.36, 0.5, 1.0])
    def test_phase_damping_top_operator(self, lam):
        e0 = np.diag([1.0, np.sqrt(1 - lam)]).astype(complex)
        coeffs = decompose_operator(e0, pauli_basis(1))
        hi = (1 + np.sqrt(1 - lam)) / 2
        lo = (1 - np.sqrt(1 - lam)) / 2
        assert np.allclose(coeffs, [hi, 0, 0, lo], atol=1e-14)

    def test_jump_operator(self):
        s0 = np.array([[0, 1], [0, 0]], dtype=complex)
        coeffs = decompose_operator(s0, pauli_basis(1))
        assert np.allclose(coeffs, [0, 0.5, 0.5j, 0], atol=1e-15)

    @pytest.mark.parametrize("make_basis", [lambda: pauli_basis(2), lambda: weyl_basis(4)])
    def test_round_trip_on_random_operators(self, make_basis):
        basis = make_basis()
        rng = np.random.default_rng(71)
        for _ in range(5):
            op = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            back = reconstruct_operator(decompose_operator(op, basis), basis)
            assert np.allclose(back, op, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            decompose_operator(np.eye(4), pauli_basis(1))


class TestChiMatrix:
    def test_depolarizing_is_diagonal(self):
        p = 0.4
        chi = chi_matrix(channel_preset(ChannelPreset("dep", p)), pauli_basis(1))
        assert np.allclose(
            chi.matrix, np.diag([1 - 3 * p / 4, p / 4, p / 4, p / 4]), atol=1e-14
        )

    @pytest.mark.parametrize("lam", [0.2, 0.5, 0.9])
    def test_phase_damping_is_diagonal(self, lam):
        chi = chi_matrix(channel_preset(ChannelPreset("pd", lam)), pauli_basis(1))
        hi = (1 + np.sqrt(1 - lam)) / 2
        lo = (1 - np.sqrt(1 - lam)) / 2
        assert np.allclose(chi.matrix, np.diag([hi, 0, 0, lo]), atol=1e-14)
        assert chi.max_off_diagonal() < 1e-14

    def test_amplitude_damping_is_not_diagonal(self):
        chi = chi_matrix(channel_preset(ChannelPreset("ad", 0.5)), pauli_basis(1))
        assert chi.max_off_diagonal() > 0.05

    def test_invariant_under_kraus_gauge(self):
        # mixing the Kraus list with any unitary leaves the channel, and
        # therefore chi, unchanged
        rng = np.random.default_rng(73)
        ch = channel_preset(ChannelPreset("ad", 0.36))
        mix = random_unitary(2, rng)
        rotated = KrausChannel(
            2, tuple(sum(mix[j, k] * ch.ops[k] for k in range(2)) for j in range(2))
        )
        chi_a = chi_matrix(ch, pauli_basis(1))
        chi_b = chi_matrix(rotated, pauli_basis(1))
        assert np.allclose(chi_a.matrix, chi_b.matrix, atol=1e-10)

    @pytest.mark.parametrize("kind", ["pd", "ad", "dep"])
    def test_coefficient_matrix_has_unit_frobenius_norm(self, kind):
        ch = channel_preset(ChannelPreset(kind, 0.3))
        c = coefficient_matrix(ch, pauli_basis(1))
        assert abs(np.linalg.norm(c) - 1.0) < 1e-10

    def test_chi_trace_is_one_for_cptp_input(self):
        ch = channel_preset(ChannelPreset("dep", 0.7))
        chi = chi_matrix(ch, pauli_basis(1))
        assert abs(np.trace(chi.matrix).real - 1.0) < 1e-10

    def test_non_psd_rejected(self):
        with pytest.raises(ValueError, match="PSD"):
            ChiMatrix(np.diag([1.5, -0.5]))


class TestReconstructChannel:
    def test_pure_identity_weight(self):
        chi = ChiMatrix(np.diag([1.0, 0.0, 0.0, 0.0]))
        rng = np.random.default_rng(79)
        rho = random_density_matrix(2, rng)
        out = reconstruct_channel(chi, pauli_basis(1), rho)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_full_depolarizing(self):
        chi = chi_matrix(channel_preset(ChannelPreset("dep", 1.0)), pauli_basis(1))
        rho = random_density_matrix(2, np.random.default_rng(83))
        out = reconstruct_channel(chi, pauli_basis(1), rho)
        assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_phase_damping_on_plus_state(self):
        chi = chi_matrix(channel_preset(ChannelPreset("pd", 0.5)), pauli_basis(1))
        out = reconstruct_channel(chi, pauli_basis(1), pure_state([1, 1]))
        assert bloch_vector(out) == pytest.approx((np.sqrt(0.5), 0.0, 0.0), abs=1e-12)

    @pytest.mark.parametrize("kind", ["pd", "ad", "dep"])
    def test_matches_kraus_oracle(self, kind):
        rng = np.random.default_rng(89)
        ch = channel_preset(ChannelPreset(kind, 0.37))
        chi = chi_matrix(ch, pauli_basis(1))
        for _ in range(10):
            rho = random_density_matrix(2, rng)
            got = reconstruct_channel(chi, pauli_basis(1), rho)
            assert np.allclose(got.matrix, apply_channel(ch, rho).matrix, atol=1e-10)

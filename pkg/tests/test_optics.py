"""Tests for optics module."""

import cmath
import math

import numpy as np
import pytest
from fockport.errors import CutoffError, DimensionError, DomainError
from fockport.fock import PureState, make_basis_state, random_state, superpose, tensor
from fockport.optics import (
    BeamSplitterSpec,
    ModeUnitary,
    apply,
    beam_splitter,
    compose,
    embed,
    format_matrix,
    identity,
    network,
    phase_layer,
    phase_shifter,
    random_unitary,
    reck_compose,
    reck_decompose,
    reck_matrix,
    reck_pairs,
    transition_amplitude,
)

SQRT_HALF = 1 / math.sqrt(2)


class TestBeamSplitterSpec:
    """Test beam-splitter parameters."""

    def test_block(self):
        """Test the 2x2 block layout."""
        spec = BeamSplitterSpec(0.6, 0.8, 1j, -1.0)
        expected = np.array([[0.6, -0.8j], [-0.8, -0.6j]])
        assert np.allclose(spec.block(), expected)

    def test_invalid_norm(self):
        """Test that c^2 + s^2 != 1 is rejected."""
        with pytest.raises(DomainError):
            BeamSplitterSpec(0.6, 0.6)

    def test_same_modes(self):
        """Test that the two modes must differ."""
        with pytest.raises(DomainError):
            BeamSplitterSpec(0.6, 0.8, modes=(1, 1))

    def test_canonical_absorbs_negative_s(self):
        """Test that a negative s moves into the phase factors with the block unchanged."""
        eta, xi = cmath.exp(0.3j), cmath.exp(-1.1j)
        spec = BeamSplitterSpec.canonical(0.6, -0.8, eta, xi)
        raw = np.array([[0.6, 0.8 * eta], [-0.8 * xi, 0.6 * eta * xi]])
        assert spec.s == 0.8
        assert np.allclose(spec.block(), raw, atol=1e-15)

    def test_canonical_negative_c(self):
        """Test that a negative c is rejected."""
        with pytest.raises(DomainError):
            BeamSplitterSpec.canonical(-0.6, 0.8)


class TestModeUnitary:
    """Test unitary construction and composition."""

    def test_rejects_non_unitary(self):
        """Test that a non-unitary matrix is rejected."""
        with pytest.raises(DomainError):
            ModeUnitary([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        """Test that a non-square matrix is rejected."""
        with pytest.raises(DimensionError):
            ModeUnitary([[1.0, 0.0]])

    def test_read_only(self):
        """Test that the matrix cannot be modified."""
        with pytest.raises(ValueError):
            identity(2).matrix[0, 0] = 2.0

    def test_embed(self):
        """Test embedding a block into a larger network."""
        unitary = embed(BeamSplitterSpec(0.6, 0.8).block(), (0, 2), 3)
        assert unitary.matrix[1, 1] == 1.0
        assert unitary.matrix[2, 0] == pytest.approx(0.8)

    def test_compose_order(self):
        """Test that compose multiplies first @ second."""
        rng = np.random.default_rng(1)
        a, b = random_unitary(3, rng), random_unitary(3, rng)
        assert np.allclose(compose(a, b).matrix, a.matrix @ b.matrix)

    def test_compose_dimension_mismatch(self):
        """Test that unitaries of different sizes cannot be composed."""
        with pytest.raises(DimensionError):
            compose(identity(2), identity(3))

    def test_network_order(self):
        """Test that a network composes elements in optical-path order."""
        rng = np.random.default_rng(2)
        elements = [random_unitary(3, rng) for _ in range(3)]
        assert np.allclose(network(elements).matrix, elements[0].matrix @ elements[1].matrix @ elements[2].matrix)

    def test_phase_shifter(self):
        """Test a single-mode phase."""
        unitary = phase_shifter(0.5, 1, 2)
        assert unitary.matrix[1, 1] == pytest.approx(cmath.exp(0.5j))

    def test_dagger_inverts(self):
        """Test that U U^dagger is the identity."""
        unitary = random_unitary(4, np.random.default_rng(3))
        assert compose(unitary, unitary.dagger()).allclose(identity(4), 1e-12)


class TestApply:
    """Test the action of networks on states."""

    def test_single_photon_symmetric_splitter(self):
        """Test one photon on a symmetric beam splitter."""
        spec = BeamSplitterSpec(SQRT_HALF, SQRT_HALF)
        output = apply(beam_splitter(spec, 2), make_basis_state((1, 0)))
        assert output.amplitude((1, 0)) == pytest.approx(SQRT_HALF)
        assert output.amplitude((0, 1)) == pytest.approx(-SQRT_HALF)

    def test_hong_ou_mandel(self):
        """Test that |1,1> on a symmetric beam splitter never gives coincidences."""
        spec = BeamSplitterSpec(SQRT_HALF, SQRT_HALF)
        output = apply(beam_splitter(spec, 2), make_basis_state((1, 1)))
        assert abs(output.amplitude((1, 1))) < 1e-15
        assert abs(output.amplitude((2, 0))) ** 2 == pytest.approx(0.5)
        assert abs(output.amplitude((0, 2))) ** 2 == pytest.approx(0.5)

    def test_preserves_norm(self):
        """Test that apply preserves the norm of random states."""
        rng = np.random.default_rng(4)
        state = random_state(rng, 3, 2)
        output = apply(random_unitary(3, rng), state)
        assert output.norm_squared() == pytest.approx(1.0, abs=1e-12)

    def test_matches_permanent_formula(self):
        """Test apply against permanent-based transition amplitudes."""
        rng = np.random.default_rng(5)
        unitary = random_unitary(3, rng)
        output = apply(unitary, make_basis_state((2, 1, 0)))
        for pattern in [(3, 0, 0), (1, 1, 1), (0, 2, 1), (1, 0, 2)]:
            assert output.amplitude(pattern) == pytest.approx(
                transition_amplitude(unitary, (2, 1, 0), pattern), abs=1e-12
            )

    def test_on_subset_of_modes(self):
        """Test acting on listed modes leaves the others alone."""
        spec = BeamSplitterSpec(SQRT_HALF, SQRT_HALF)
        state = make_basis_state((1, 3, 0))
        output = apply(beam_splitter(spec, 2), state, (0, 2))
        assert output.amplitude((1, 3, 0)) == pytest.approx(SQRT_HALF)
        assert output.amplitude((0, 3, 1)) == pytest.approx(-SQRT_HALF)

    def test_composition_law(self):
        """Test apply(compose(a, b)) = apply(b) after apply(a)."""
        rng = np.random.default_rng(6)
        a, b = random_unitary(2, rng), random_unitary(2, rng)
        state = random_state(rng, 2, 2)
        together = apply(compose(a, b), state)
        in_turn = apply(b, apply(a, state))
        for pattern, amplitude in together.items():
            assert in_turn.amplitude(pattern) == pytest.approx(amplitude, abs=1e-12)

    def test_dimension_mismatch(self):
        """Test that the unitary must match the listed modes."""
        with pytest.raises(DimensionError):
            apply(identity(3), make_basis_state((1, 0)))

    def test_cutoff(self):
        """Test that exceeding the cutoff raises."""
        state = PureState(2, {(1, 1): 1.0}, cutoff=(1, 1))
        spec = BeamSplitterSpec(SQRT_HALF, SQRT_HALF)
        with pytest.raises(CutoffError):
            apply(beam_splitter(spec, 2), state)

    def test_identity(self):
        """Test that the identity leaves a state unchanged."""
        state = superpose({(0, 1): 0.6, (2, 0): 0.8j})
        assert dict(apply(identity(2), state).items()) == pytest.approx(dict(state.items()))


class TestTransitionAmplitude:
    """Test permanent-based amplitudes."""

    def test_photon_number_mismatch(self):
        """Test that different totals give zero."""
        assert transition_amplitude(identity(2), (1, 0), (1, 1)) == 0j

    def test_vacuum(self):
        """Test the vacuum-to-vacuum amplitude."""
        assert transition_amplitude(identity(2), (0, 0), (0, 0)) == 1.0

    def test_two_photon_bunching(self):
        """Test the |2,0> amplitude of HOM interference."""
        unitary = beam_splitter(BeamSplitterSpec(SQRT_HALF, SQRT_HALF), 2)
        assert abs(transition_amplitude(unitary, (1, 1), (2, 0))) == pytest.approx(SQRT_HALF)


class TestReck:
    """Test the two-mode block decomposition."""

    @pytest.mark.parametrize("mode_count", [2, 3, 4, 5])
    def test_round_trip(self, mode_count):
        """Test that decomposing and recomposing reproduces a random unitary."""
        unitary = random_unitary(mode_count, np.random.default_rng(mode_count))
        elements, phases = reck_decompose(unitary)
        assert len(elements) == mode_count * (mode_count - 1) // 2
        assert reck_compose(elements, phases, mode_count).allclose(unitary, 1e-10)

    def test_pairs(self):
        """Test the elimination order of mode pairs."""
        assert reck_pairs(3) == [(0, 1), (1, 2), (0, 1)]

    def test_reck_matrix_matches_compose(self):
        """Test the optimizer matrix against the checked composition."""
        unitary = random_unitary(4, np.random.default_rng(9))
        elements, phases = reck_decompose(unitary)
        thetas = np.array([math.atan2(e.s, e.c) for e in elements])
        phis = np.array([cmath.phase(e.eta) for e in elements])
        assert np.allclose(reck_matrix(thetas, phis, phases, 4), unitary.matrix, atol=1e-10)

    def test_phase_count_mismatch(self):
        """Test that the phase layer must match the mode count."""
        with pytest.raises(DimensionError):
            reck_compose([], [0.0, 0.0], 3)


class TestFormatMatrix:
    """Test the matrix text form."""

    def test_identity(self):
        """Test one row per line with 're im' entries."""
        assert format_matrix(identity(2)) == "1.0 0.0  0.0 0.0\n0.0 0.0  1.0 0.0\n"

    def test_phase_layer(self):
        """Test a diagonal phase layer."""
        text = format_matrix(phase_layer([0.0, math.pi]))
        assert text.splitlines()[1].startswith("0.0 0.0  -1.0")


class TestTensorWithNetwork:
    """Test networks acting on product states."""

    def test_vacuum_ancilla_unchanged(self):
        """Test that an identity on an ancilla leaves vacuum in place."""
        state = tensor(make_basis_state((1, 0)), make_basis_state((0,)))
        output = apply(beam_splitter(BeamSplitterSpec(SQRT_HALF, SQRT_HALF, modes=(0, 1)), 3), state)
        assert all(pattern[2] == 0 for pattern, _ in output.items())

"""Tests for resources module."""

import cmath
import math

import pytest
from fockport.errors import DomainError
from fockport.fock import equal_up_to_phase, inner_product, phase_aligned_distance
from fockport.resources import (
    GeneralizedBellSpec,
    SqueezeParams,
    custom_epr,
    generalized_bell,
    k_normalization,
    number_phase_bell,
    number_phase_state,
    omega_power,
    photon_subtracted,
    preparation_probability,
    prepare_via_swapping,
    squeezed_vacuum,
    swapping_outcome_table,
    swapping_tail,
    truncated_maximal_epr_state,
)

GRID = (0.3, 0.5, 0.7)


class TestSqueezedVacuum:
    """Test the truncated two-mode squeezed vacuum."""

    def test_truncation_length(self):
        """Test that lambda=0.7 keeps k = 0..38 at the default tail bound."""
        state = squeezed_vacuum(0.7)
        assert len(state) == 39
        assert max(p[0] for p, _ in state.items()) == 38

    def test_amplitudes(self):
        """Test sqrt(1 - lam^2) lam^k on |k, k>."""
        state = squeezed_vacuum(0.5)
        assert state.amplitude((2, 2)) == pytest.approx(math.sqrt(0.75) * 0.25)

    def test_tail_below_bound(self):
        """Test that the dropped weight is below the tail bound."""
        state = squeezed_vacuum(0.7, 1e-8)
        assert 1.0 - state.norm_squared() < 1e-8

    def test_vacuum_limit(self):
        """Test that lambda = 0 gives the two-mode vacuum."""
        assert len(squeezed_vacuum(0.0)) == 1

    def test_invalid_lambda(self):
        """Test that lambda >= 1 is rejected."""
        with pytest.raises(DomainError):
            squeezed_vacuum(1.0)

    @pytest.mark.parametrize("tail_epsilon", [0.0, -1e-12, 1.0, float("nan")])
    def test_invalid_tail_bound(self, tail_epsilon):
        """Test that a tail bound outside (0, 1) is rejected instead of looping."""
        with pytest.raises(DomainError):
            squeezed_vacuum(0.5, tail_epsilon)

    def test_photon_subtracted_tail_bound(self):
        """Test the same check on the photon-subtracted resource."""
        with pytest.raises(DomainError):
            photon_subtracted(0.5, 0.0)

    def test_swapping_tail_parameters(self):
        """Test that the analytic tail checks its squeezing parameters."""
        with pytest.raises(DomainError):
            swapping_tail(1.2, 0.5, 3)
        with pytest.raises(DomainError):
            swapping_tail(0.5, 0.5, -1)


class TestPhotonSubtracted:
    """Test the photon-subtracted squeezed vacuum."""

    def test_amplitudes(self):
        """Test A (k + 1) lam^k with A^2 = (1 - lam^2)^3 / (1 + lam^2)."""
        lam = 0.4
        prefactor = math.sqrt((1 - lam ** 2) ** 3 / (1 + lam ** 2))
        state = photon_subtracted(lam)
        assert state.amplitude((3, 3)) == pytest.approx(prefactor * 4 * lam ** 3)

    def test_nearly_normalized(self):
        """Test that the truncated state has almost unit norm."""
        assert photon_subtracted(0.6).norm_squared() == pytest.approx(1.0, abs=1e-11)


class TestBellStates:
    """Test number-sum / phase-difference states."""

    def test_omega_power(self):
        """Test (omega*)^{mk} with reduction modulo N + 1."""
        assert omega_power(1, 1, 1) == pytest.approx(-1.0)
        assert omega_power(2, 3, 2) == pytest.approx(1.0)

    def test_number_phase_bell_normalized(self):
        """Test that |N, phi_m> is normalized."""
        assert number_phase_bell(3, 2).norm_squared() == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_orthonormal(self, n):
        """Test that the N + 1 phase states are orthonormal."""
        states = [number_phase_bell(n, m) for m in range(n + 1)]
        for i, a in enumerate(states):
            for j, b in enumerate(states):
                assert inner_product(a, b) == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)

    def test_m_reduced(self):
        """Test that m is taken modulo N + 1."""
        assert equal_up_to_phase(number_phase_bell(2, 4), number_phase_bell(2, 1))

    def test_reference_phase(self):
        """Test the phase-shifter reference phase on the second mode."""
        state = number_phase_bell(1, 0, math.pi / 2)
        assert state.amplitude((0, 1)) == pytest.approx(1j / math.sqrt(2))

    def test_number_phase_state(self):
        """Test the detector projector |N, phi> with e^{-ik phi}."""
        state = number_phase_state(2, 0.3)
        assert state.amplitude((0, 2)) == pytest.approx(cmath.exp(-0.6j) / math.sqrt(3))

    def test_generalized_bell_ratio(self):
        """Test that consecutive amplitudes of |N, 0, r> differ by r."""
        state = generalized_bell(GeneralizedBellSpec(2, 0, 0.5))
        assert state.amplitude((1, 1)) / state.amplitude((2, 0)) == pytest.approx(0.5)
        assert state.norm_squared() == pytest.approx(1.0)

    def test_generalized_bell_from_squeezing(self):
        """Test that both constructions agree."""
        from_r = generalized_bell(GeneralizedBellSpec(3, 1, 0.7 / 0.3))
        from_lam = generalized_bell(GeneralizedBellSpec.from_squeezing(3, 1, 0.3, 0.7))
        assert phase_aligned_distance(from_r, from_lam) < 1e-12

    def test_spec_rejects_mismatched_ratio(self):
        """Test that r must equal lambda'/lambda when both are given."""
        with pytest.raises(DomainError):
            GeneralizedBellSpec(2, 0, 2.0, SqueezeParams(0.3, 0.5))

    def test_phase_eigenvalue(self):
        """Test phi_m = 2 pi m / (N + 1)."""
        assert GeneralizedBellSpec(3, 1).phase_eigenvalue == pytest.approx(math.pi / 2)

    def test_ratio_undefined_for_zero_lambda(self):
        """Test that r is undefined for lambda = 0."""
        with pytest.raises(DomainError):
            SqueezeParams(0.0, 0.5).r


class TestCustomEPR:
    """Test user-supplied EPR profiles."""

    def test_sum_kind(self):
        """Test sum_k d_k |N-k, k>."""
        state = custom_epr("sum", [0.6, 0.8])
        assert state.amplitude((1, 0)) == 0.6
        assert state.amplitude((0, 1)) == 0.8

    def test_difference_kind(self):
        """Test sum_k d_k |k, k>."""
        state = custom_epr("difference", [0.6, 0.8])
        assert state.amplitude((1, 1)) == 0.8

    def test_unknown_kind(self):
        """Test that only sum and difference kinds exist."""
        with pytest.raises(DomainError):
            custom_epr("product", [1.0])

    def test_unnormalized(self):
        """Test that the profile must be normalized."""
        with pytest.raises(DomainError):
            custom_epr("sum", [1.0, 1.0])


class TestKNormalization:
    """Test K and the preparation probability."""

    def test_closed_form(self):
        """Test K^2 against the geometric sum."""
        lam, lam_prime, n = 0.3, 0.7, 4
        expected = sum(lam ** (2 * (n - k)) * lam_prime ** (2 * k) for k in range(n + 1))
        assert k_normalization(lam, lam_prime, n) ** 2 == pytest.approx(expected, rel=1e-12)

    def test_equal_limit(self):
        """Test K^2 = (N + 1) lam^{2N} for equal squeezing."""
        assert k_normalization(0.5, 0.5, 3) ** 2 == pytest.approx(4 * 0.5 ** 6)

    def test_near_equal_continuity(self):
        """Test continuity across the limit switch."""
        lam, n = 0.6, 3
        limit = (n + 1) * lam ** (2 * n)
        assert k_normalization(lam, lam + 1e-10, n) ** 2 == pytest.approx(limit, rel=1e-8)
        geometric = sum(lam ** (2 * (n - k)) * (lam + 1e-6) ** (2 * k) for k in range(n + 1))
        assert k_normalization(lam, lam + 1e-6, n) ** 2 == pytest.approx(geometric, rel=1e-8)

    def test_preparation_probability(self):
        """Test P(N) = (1 - lam^2)(1 - lam'^2) K^2 / (N + 1) times p."""
        probability = preparation_probability(1, 0.49, 0.7, 0.5)
        expected = (1 - 0.49 ** 2) * (1 - 0.49) * (0.49 ** 2 + 0.49) / 2 * 0.5
        assert probability == pytest.approx(expected)

    def test_symmetric(self):
        """Test that P(N, lam, lam') = P(N, lam', lam)."""
        assert preparation_probability(2, 0.3, 0.6) == pytest.approx(preparation_probability(2, 0.6, 0.3))


class TestSwapping:
    """Test entanglement swapping."""

    @pytest.mark.parametrize("lam", GRID)
    @pytest.mark.parametrize("lam_prime", GRID)
    def test_grid(self, lam, lam_prime):
        """Test probability and conditional state for N <= 3 and every m."""
        for n in range(4):
            for m in range(n + 1):
                state, probability = prepare_via_swapping(lam, lam_prime, n, m)
                expected = generalized_bell(GeneralizedBellSpec.from_squeezing(n, m, lam, lam_prime))
                assert probability == pytest.approx(preparation_probability(n, lam, lam_prime), abs=1e-10)
                assert phase_aligned_distance(state, expected) < 1e-10

    def test_detector_success_factor(self):
        """Test that the detector success multiplies the probability."""
        _, ideal = prepare_via_swapping(0.5, 0.7, 2, 0)
        _, scaled = prepare_via_swapping(0.5, 0.7, 2, 0, detector_success=0.375)
        assert scaled == pytest.approx(0.375 * ideal)

    def test_completeness(self):
        """Test that outcome probabilities and the tail sum to one."""
        table, tail = swapping_outcome_table(0.5, 0.7, 4)
        assert len(table) == 15
        assert math.fsum(table.values()) + tail == pytest.approx(1.0, abs=1e-10)

    def test_tail_equal_squeezing(self):
        """Test the equal-squeezing tail against a direct sum."""
        q = 0.25
        direct = 1.0 - sum((1 - q) ** 2 * (n + 1) * q ** n for n in range(3))
        assert swapping_tail(0.5, 0.5, 2) == pytest.approx(direct)


class TestTruncatedMaximalEPR:
    """Test the closed-form truncated maximal EPR state."""

    def test_uniform_amplitudes(self):
        """Test equal weights on |n, n> for n = N1..N2."""
        state = truncated_maximal_epr_state(1, 3)
        assert len(state) == 3
        assert state.amplitude((2, 2)) == pytest.approx(1 / math.sqrt(3))

    def test_invalid_window(self):
        """Test that N2 < N1 is rejected."""
        with pytest.raises(DomainError):
            truncated_maximal_epr_state(3, 1)

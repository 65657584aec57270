"""Tests for validators module."""

import math

import pytest
from fockport.validators import (
    is_normalized,
    validate_accept_pattern,
    validate_beam_splitter,
    validate_mode_pair,
    validate_occupation,
    validate_photon_number,
    validate_profile,
    validate_squeeze_parameter,
    validate_tail_epsilon,
    validate_tolerance,
)


class TestValidateSqueezeParameter:
    """Test squeezing-parameter validation."""

    def test_valid_parameter(self):
        """Test validation of a parameter inside [0, 1)."""
        is_valid, error = validate_squeeze_parameter(0.7)
        assert is_valid is True
        assert error == ""

    def test_zero_is_valid(self):
        """Test that zero squeezing is accepted."""
        is_valid, _ = validate_squeeze_parameter(0.0)
        assert is_valid is True

    def test_one_is_rejected(self):
        """Test that lambda = 1 is rejected."""
        is_valid, error = validate_squeeze_parameter(1.0)
        assert is_valid is False
        assert "0 <= lambda < 1" in error

    def test_negative_is_rejected(self):
        """Test that a negative parameter is rejected."""
        is_valid, _ = validate_squeeze_parameter(-0.1)
        assert is_valid is False

    @pytest.mark.parametrize("value", [math.nan, math.inf, None])
    def test_non_finite(self, value):
        """Test that non-finite values are rejected."""
        is_valid, error = validate_squeeze_parameter(value)
        assert is_valid is False
        assert "finite" in error

    def test_name_in_message(self):
        """Test that the parameter name appears in the message."""
        _, error = validate_squeeze_parameter(1.2, "lambda''")
        assert "lambda''" in error


class TestValidateTailEpsilon:
    """Test tail-bound validation."""

    def test_valid(self):
        """Test a small positive bound."""
        assert validate_tail_epsilon(1e-12) == (True, "")

    @pytest.mark.parametrize("value", [0.0, -1e-9, 1.0, math.nan, math.inf, None])
    def test_rejected(self, value):
        """Test that bounds outside (0, 1) are rejected."""
        is_valid, error = validate_tail_epsilon(value, "--tail-eps")
        assert is_valid is False
        assert "--tail-eps" in error


class TestValidateTolerance:
    """Test tolerance validation."""

    def test_valid(self):
        """Test a positive tolerance."""
        assert validate_tolerance(1e-10) == (True, "")

    @pytest.mark.parametrize("value", [0.0, -1.0, math.nan])
    def test_rejected(self, value):
        """Test that non-positive or non-finite tolerances are rejected."""
        is_valid, _ = validate_tolerance(value)
        assert is_valid is False


class TestValidateOccupation:
    """Test occupation-pattern validation."""

    def test_valid_pattern(self):
        """Test a pattern of non-negative integers."""
        assert validate_occupation((0, 2, 1)) == (True, "")

    def test_empty_pattern(self):
        """Test that an empty pattern is rejected."""
        is_valid, error = validate_occupation(())
        assert is_valid is False
        assert "at least one mode" in error

    def test_negative_count(self):
        """Test that negative counts are rejected."""
        is_valid, error = validate_occupation((1, -1))
        assert is_valid is False
        assert "non-negative" in error

    def test_fractional_count(self):
        """Test that a fractional count is rejected rather than truncated."""
        is_valid, _ = validate_occupation((1.7, 0))
        assert is_valid is False


class TestValidatePhotonNumber:
    """Test photon-number validation."""

    def test_valid(self):
        """Test a valid photon number."""
        assert validate_photon_number(3) == (True, "")

    def test_negative(self):
        """Test that a negative photon number is rejected."""
        is_valid, error = validate_photon_number(-1, "N~")
        assert is_valid is False
        assert "N~" in error

    def test_fractional(self):
        """Test that a fractional photon number is rejected."""
        is_valid, _ = validate_photon_number(1.5)
        assert is_valid is False


class TestValidateBeamSplitter:
    """Test beam-splitter validation."""

    def test_symmetric(self):
        """Test the symmetric beam splitter."""
        s = 1 / math.sqrt(2)
        assert validate_beam_splitter(s, s, 1.0, 1.0) == (True, "")

    def test_negative_reflection(self):
        """Test that s < 0 is rejected in canonical form."""
        is_valid, error = validate_beam_splitter(0.6, -0.8, 1.0, 1.0)
        assert is_valid is False
        assert "s >= 0" in error

    def test_not_unit_norm(self):
        """Test that c^2 + s^2 != 1 is rejected."""
        is_valid, error = validate_beam_splitter(0.6, 0.7, 1.0, 1.0)
        assert is_valid is False
        assert "c^2 + s^2" in error

    def test_phase_not_unimodular(self):
        """Test that phase factors must have unit modulus."""
        is_valid, error = validate_beam_splitter(0.6, 0.8, 1.1, 1.0)
        assert is_valid is False
        assert "unit modulus" in error


class TestValidateModePair:
    """Test mode-index validation."""

    def test_valid(self):
        """Test distinct in-range modes."""
        assert validate_mode_pair((0, 2), 3) == (True, "")

    def test_repeated(self):
        """Test that repeated modes are rejected."""
        is_valid, error = validate_mode_pair((1, 1), 3)
        assert is_valid is False
        assert "distinct" in error

    def test_out_of_range(self):
        """Test that an out-of-range mode is rejected."""
        is_valid, error = validate_mode_pair((0, 3), 3)
        assert is_valid is False
        assert "outside" in error


class TestValidateProfile:
    """Test EPR profile validation."""

    def test_normalized(self):
        """Test a normalized profile."""
        assert validate_profile([0.6, 0.8j]) == (True, "")

    def test_not_normalized(self):
        """Test that an unnormalized profile is rejected."""
        is_valid, error = validate_profile([1.0, 1.0])
        assert is_valid is False
        assert "normalized" in error

    def test_empty(self):
        """Test that an empty profile is rejected."""
        is_valid, _ = validate_profile([])
        assert is_valid is False


class TestValidateAcceptPattern:
    """Test detector accept-pattern validation."""

    def test_valid(self):
        """Test the one-ancilla N~=2 pattern."""
        assert validate_accept_pattern([0, 1, 1], 2, 3) == (True, "")

    def test_wrong_length(self):
        """Test that the pattern must cover every port."""
        is_valid, error = validate_accept_pattern([1, 1], 2, 3)
        assert is_valid is False
        assert "3 entries" in error

    def test_two_photons_in_one_port(self):
        """Test that zero-one detectors cannot register two photons."""
        is_valid, error = validate_accept_pattern([2, 0, 0], 2, 3)
        assert is_valid is False
        assert "0 or 1" in error

    def test_wrong_total(self):
        """Test that the pattern must register N~ photons."""
        is_valid, error = validate_accept_pattern([1, 0, 0], 2, 3)
        assert is_valid is False
        assert "2 photons" in error


class TestIsNormalized:
    """Test squared-norm checks."""

    def test_within_tolerance(self):
        """Test a squared norm within tolerance."""
        assert is_normalized(1.0 + 1e-13, 1e-12) is True

    def test_outside_tolerance(self):
        """Test a squared norm outside tolerance."""
        assert is_normalized(0.99, 1e-12) is False

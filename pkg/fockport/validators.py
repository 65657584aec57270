"""Parameter validation rules."""

import math
from typing import Iterable, Sequence, Tuple


def validate_squeeze_parameter(value: float, name: str = "lambda") -> Tuple[bool, str]:
    """
    Validate a squeezing parameter.

    Rules:
    - Must be a finite real number
    - Must satisfy 0 <= value < 1

    Args:
        value: The squeezing parameter
        name: Parameter name used in the error message

    Returns:
        Tuple of (is_valid, error_message)
    """
    if value is None or not math.isfinite(value):
        return False, f"{name} must be a finite number"

    if value < 0 or value >= 1:
        return False, f"{name} must satisfy 0 <= {name} < 1, got {value}"

    return True, ""


def validate_tail_epsilon(value: float, name: str = "tail_epsilon") -> Tuple[bool, str]:
    """
    Validate a truncation bound on dropped probability.

    Rules:
    - Must be a finite real number
    - Must satisfy 0 < value < 1

    Returns:
        Tuple of (is_valid, error_message)
    """
    if value is None or not math.isfinite(value):
        return False, f"{name} must be a finite number"

    if value <= 0 or value >= 1:
        return False, f"{name} must satisfy 0 < {name} < 1, got {value}"

    return True, ""


def validate_tolerance(value: float, name: str = "tolerance") -> Tuple[bool, str]:
    """Validate a comparison tolerance: finite and strictly positive."""
    if value is None or not math.isfinite(value) or value <= 0:
        return False, f"{name} must be a positive finite number, got {value}"
    return True, ""


def validate_occupation(pattern: Iterable[int]) -> Tuple[bool, str]:
    """
    Validate an occupation pattern.

    Args:
        pattern: Photon counts, one per mode

    Returns:
        Tuple of (is_valid, error_message)
    """
    counts = list(pattern)
    if not counts:
        return False, "Occupation pattern must name at least one mode"

    for count in counts:
        if int(count) != count or count < 0:
            return False, f"Photon counts must be non-negative integers, got {counts}"

    return True, ""


def validate_photon_number(value: int, name: str = "N") -> Tuple[bool, str]:
    """Validate a total photon number."""
    if int(value) != value or value < 0:
        return False, f"{name} must be a non-negative integer, got {value}"
    return True, ""


def validate_beam_splitter(c: float, s: float, eta: complex, xi: complex, tolerance: float = 1e-12) -> Tuple[bool, str]:
    """
    Validate beam-splitter parameters in canonical form.

    Rules:
    - c, s >= 0 with c^2 + s^2 = 1
    - eta and xi have unit modulus

    Args:
        c: Transmission amplitude
        s: Reflection amplitude
        eta: First phase factor
        xi: Second phase factor
        tolerance: Absolute tolerance for the unit-norm checks

    Returns:
        Tuple of (is_valid, error_message)
    """
    if c < 0 or s < 0:
        return False, f"Beam splitter needs c >= 0 and s >= 0, got c={c}, s={s}"

    if abs(c * c + s * s - 1.0) > tolerance:
        return False, f"Beam splitter needs c^2 + s^2 = 1, got {c * c + s * s}"

    if abs(abs(eta) - 1.0) > tolerance or abs(abs(xi) - 1.0) > tolerance:
        return False, "Beam splitter phase factors eta and xi must have unit modulus"

    return True, ""


def validate_mode_pair(modes: Sequence[int], mode_count: int) -> Tuple[bool, str]:
    """Validate that modes are distinct indices inside 0..mode_count-1."""
    if len(set(modes)) != len(modes):
        return False, f"Modes must be distinct, got {tuple(modes)}"

    for mode in modes:
        if mode < 0 or mode >= mode_count:
            return False, f"Mode {mode} is outside 0..{mode_count - 1}"

    return True, ""


def validate_profile(profile: Sequence[complex], tolerance: float = 1e-10) -> Tuple[bool, str]:
    """
    Validate an EPR amplitude profile.

    Args:
        profile: Amplitudes d_0..d_N
        tolerance: Allowed deviation of the squared norm from 1

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not profile:
        return False, "Profile must contain at least one amplitude"

    norm_sq = sum(abs(d) ** 2 for d in profile)
    if abs(norm_sq - 1.0) > tolerance:
        return False, f"Profile must be normalized, squared norm is {norm_sq}"

    return True, ""


def validate_accept_pattern(pattern: Sequence[int], n_tilde: int, mode_count: int) -> Tuple[bool, str]:
    """
    Validate a detector accept pattern for zero-one-photon detectors.

    Args:
        pattern: Photon counts registered at the output ports
        n_tilde: Total photon number the detector must herald
        mode_count: Number of output ports

    Returns:
        Tuple of (is_valid, error_message)
    """
    if len(pattern) != mode_count:
        return False, f"Accept pattern needs {mode_count} entries, got {len(pattern)}"

    if any(count not in (0, 1) for count in pattern):
        return False, "Zero-one-photon detectors register 0 or 1 photon per port"

    if sum(pattern) != n_tilde:
        return False, f"Accept pattern must register {n_tilde} photons, got {sum(pattern)}"

    return True, ""


def is_normalized(norm_squared: float, tolerance: float) -> bool:
    """
    Check whether a squared norm equals one.

    Args:
        norm_squared: The squared norm
        tolerance: Absolute tolerance

    Returns:
        True if normalized, False otherwise
    """
    return abs(norm_squared - 1.0) <= tolerance

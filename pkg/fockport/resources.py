"""Entangled two-mode resources and their preparation by entanglement swapping."""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from fockport.config import settings
from fockport.errors import DomainError
from fockport.fock import PureState, project_onto_state, tensor
from fockport.validators import (
    validate_photon_number,
    validate_profile,
    validate_squeeze_parameter,
    validate_tail_epsilon,
)

logger = logging.getLogger(__name__)


def _require(result: Tuple[bool, str]):
    is_valid, error = result
    if not is_valid:
        raise DomainError(error)


def omega_power(m: int, k: int, n: int) -> complex:
    """(omega*)^{mk} with omega = exp(2 pi i / (n + 1)), reduced modulo n + 1."""
    return cmath.exp(-2j * math.pi * ((m * k) % (n + 1)) / (n + 1))


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing parameters of the two sources consumed by entanglement swapping."""
    lam: float
    lam_prime: float

    def __post_init__(self):
        _require(validate_squeeze_parameter(self.lam, "lambda"))
        _require(validate_squeeze_parameter(self.lam_prime, "lambda'"))

    @property
    def r(self) -> float:
        if self.lam == 0:
            raise DomainError("r = lambda'/lambda is undefined for lambda = 0")
        return self.lam_prime / self.lam

    def swapped(self) -> "SqueezeParams":
        return SqueezeParams(self.lam_prime, self.lam)


@dataclass(frozen=True)
class GeneralizedBellSpec:
    """|N, m, r> = sum_k (omega*)^{mk} r^k |N-k, k> up to normalization."""
    n: int
    m: int = 0
    r: float = 1.0
    squeezing: Optional[SqueezeParams] = None

    def __post_init__(self):
        _require(validate_photon_number(self.n, "N"))
        object.__setattr__(self, "m", self.m % (self.n + 1))
        if not math.isfinite(self.r) or self.r < 0:
            raise DomainError(f"r must be a finite non-negative number, got {self.r}")
        if self.squeezing is not None and abs(self.squeezing.r - self.r) > 1e-12 * max(1.0, self.r):
            raise DomainError(f"r={self.r} does not match lambda'/lambda={self.squeezing.r}")

    @classmethod
    def from_squeezing(cls, n: int, m: int, lam: float, lam_prime: float) -> "GeneralizedBellSpec":
        params = SqueezeParams(lam, lam_prime)
        return cls(n, m, params.r, params)

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi / (self.n + 1))

    @property
    def phase_eigenvalue(self) -> float:
        """phi_m = 2 pi m / (N + 1)."""
        return 2 * math.pi * self.m / (self.n + 1)

    @property
    def k_norm(self) -> float:
        if self.squeezing is None:
            raise DomainError("K is defined only for resources built from squeezing parameters")
        return k_normalization(self.squeezing.lam, self.squeezing.lam_prime, self.n)


def squeezed_vacuum(lam: float, tail_epsilon: Optional[float] = None) -> PureState:
    """
    Truncated two-mode squeezed vacuum sqrt(1 - lam^2) sum_k lam^k |k, k>.

    Terms stop at the smallest K_max whose dropped tail lam^{2(K_max+1)}
    is below ``tail_epsilon``; amplitudes are not renormalized.
    """
    _require(validate_squeeze_parameter(lam, "lambda"))
    tail_epsilon = settings.tail_epsilon if tail_epsilon is None else tail_epsilon
    _require(validate_tail_epsilon(tail_epsilon))
    prefactor = math.sqrt(1.0 - lam * lam)
    amplitudes = {}
    k, tail = 0, lam * lam
    amplitudes[(0, 0)] = prefactor
    while tail >= tail_epsilon:
        k += 1
        amplitudes[(k, k)] = prefactor * lam ** k
        tail *= lam * lam
    logger.debug(f"Squeezed vacuum lambda={lam} truncated at K_max={k}")
    return PureState(2, amplitudes)


def photon_subtracted(lam: float, tail_epsilon: Optional[float] = None) -> PureState:
    """Truncated photon-subtracted squeezed vacuum A sum_k (k+1) lam^k |k, k>."""
    _require(validate_squeeze_parameter(lam, "lambda"))
    tail_epsilon = settings.tail_epsilon if tail_epsilon is None else tail_epsilon
    _require(validate_tail_epsilon(tail_epsilon))
    prefactor = math.sqrt((1.0 - lam * lam) ** 3 / (1.0 + lam * lam))
    amplitudes = {}
    captured = 0.0
    k = 0
    while True:
        amplitude = prefactor * (k + 1) * lam ** k
        amplitudes[(k, k)] = amplitude
        captured += amplitude * amplitude
        if 1.0 - captured < tail_epsilon or amplitude == 0.0:
            break
        k += 1
    return PureState(2, amplitudes)


def number_phase_state(n: int, phi: float) -> PureState:
    """|N, phi> = sum_k e^{-ik phi} |N-k, k> / sqrt(N+1)."""
    _require(validate_photon_number(n, "N"))
    scale = 1.0 / math.sqrt(n + 1)
    return PureState(2, {(n - k, k): cmath.exp(-1j * k * phi) * scale for k in range(n + 1)})


def number_phase_bell(n: int, m: int = 0, phase: float = 0.0) -> PureState:
    """
    Number-sum / phase-difference Bell state |N, phi_m>.

    Args:
        n: Total photon number N
        m: Phase index, reduced modulo N + 1
        phase: Reference phase of a shifter on the second mode

    Returns:
        Two-mode PureState
    """
    _require(validate_photon_number(n, "N"))
    m %= n + 1
    scale = 1.0 / math.sqrt(n + 1)
    return PureState(
        2,
        {(n - k, k): omega_power(m, k, n) * cmath.exp(1j * k * phase) * scale for k in range(n + 1)},
    )


def generalized_bell(spec: GeneralizedBellSpec, phase: float = 0.0) -> PureState:
    """Normalized |N, m, r>; built from lam^{N-k} lam'^k / K when squeezing is attached."""
    n, m = spec.n, spec.m
    if spec.squeezing is not None:
        lam, lam_prime = spec.squeezing.lam, spec.squeezing.lam_prime
        k_norm = spec.k_norm
        magnitudes = [lam ** (n - k) * lam_prime ** k / k_norm for k in range(n + 1)]
    else:
        weights = [spec.r ** k for k in range(n + 1)]
        norm = math.sqrt(math.fsum(w * w for w in weights))
        magnitudes = [w / norm for w in weights]
    return PureState(
        2,
        {
            (n - k, k): omega_power(m, k, n) * cmath.exp(1j * k * phase) * magnitudes[k]
            for k in range(n + 1)
            if magnitudes[k] != 0.0
        },
    )


def custom_epr(kind: str, profile: Sequence[complex]) -> PureState:
    """
    EPR state with an arbitrary normalized amplitude profile.

    Args:
        kind: "sum" for sum_k d_k |N-k, k>, "difference" for sum_k d_k |k, k>
        profile: Amplitudes d_0..d_N

    Returns:
        Two-mode PureState
    """
    values = [complex(d) for d in profile]
    _require(validate_profile(values, settings.state_tolerance))
    n = len(values) - 1
    if kind == "sum":
        return PureState(2, {(n - k, k): d for k, d in enumerate(values) if d != 0})
    if kind == "difference":
        return PureState(2, {(k, k): d for k, d in enumerate(values) if d != 0})
    raise DomainError(f"EPR kind must be 'sum' or 'difference', got {kind!r}")


def k_normalization(lam: float, lam_prime: float, n: int, switch: Optional[float] = None) -> float:
    """
    K with K^2 = (lam^{2(N+1)} - lam'^{2(N+1)}) / (lam^2 - lam'^2).

    Below ``switch`` in |lam^2 - lam'^2| the limit K^2 = (N+1) lam^{2N} is used.
    """
    switch = settings.k_limit_switch if switch is None else switch
    a, b = lam * lam, lam_prime * lam_prime
    if abs(a - b) < switch:
        return math.sqrt((n + 1) * a ** n)
    return math.sqrt((a ** (n + 1) - b ** (n + 1)) / (a - b))


def preparation_probability(n: int, lam: float, lam_prime: float, detector_success: float = 1.0) -> float:
    """P(N, lam, lam') = (1 - lam^2)(1 - lam'^2) K^2 / (N+1), times the detector success."""
    _require(validate_squeeze_parameter(lam, "lambda"))
    _require(validate_squeeze_parameter(lam_prime, "lambda'"))
    _require(validate_photon_number(n, "N"))
    k_norm = k_normalization(lam, lam_prime, n)
    return (1.0 - lam * lam) * (1.0 - lam_prime * lam_prime) * k_norm * k_norm / (n + 1) * detector_success


def prepare_via_swapping(
    lam: float,
    lam_prime: float,
    n: int,
    m: int = 0,
    tail_epsilon: Optional[float] = None,
    detector_success: float = 1.0,
) -> Tuple[Optional[PureState], float]:
    """
    Simulate |lam>_13 |lam'>_24 with modes 3, 4 projected onto |N, -m>.

    Returns:
        Conditional state of modes (1, 2), equal to |N, m, r>, and the outcome
        probability times ``detector_success``
    """
    first = squeezed_vacuum(lam, tail_epsilon)
    second = squeezed_vacuum(lam_prime, tail_epsilon)
    # mode order after tensor: 1, 3, 2, 4
    joint = tensor(first, second)
    state, probability = project_onto_state(joint, (1, 3), number_phase_bell(n, -m))
    logger.debug(f"Swapping outcome N={n}, m={m}: probability {probability:.6e}")
    return state, probability * detector_success


def swapping_tail(lam: float, lam_prime: float, n_cut: int) -> float:
    """Probability that the swapping measurement registers more than n_cut photons in total."""
    _require(validate_squeeze_parameter(lam, "lambda"))
    _require(validate_squeeze_parameter(lam_prime, "lambda'"))
    _require(validate_photon_number(n_cut, "n_cut"))
    a, b = lam * lam, lam_prime * lam_prime
    if abs(a - b) < settings.k_limit_switch:
        return a ** (n_cut + 1) * (1.0 + (n_cut + 1) * (1.0 - a))
    return (a ** (n_cut + 2) * (1.0 - b) - b ** (n_cut + 2) * (1.0 - a)) / (a - b)


def swapping_outcome_table(
    lam: float,
    lam_prime: float,
    n_cut: int,
    tail_epsilon: Optional[float] = None,
) -> Tuple[Dict[Tuple[int, int], float], float]:
    """
    Simulated probabilities of every swapping outcome (N, m) with N <= n_cut.

    Returns:
        Map (N, m) -> probability and the analytic probability of N > n_cut
    """
    table = {}
    for n in range(n_cut + 1):
        for m in range(n + 1):
            table[(n, m)] = prepare_via_swapping(lam, lam_prime, n, m, tail_epsilon)[1]
    return table, swapping_tail(lam, lam_prime, n_cut)


def truncated_maximal_epr_state(n_low: int, n_high: int) -> PureState:
    """sum_{n=n_low}^{n_high} |n, n> / sqrt(n_high - n_low + 1)."""
    if n_low < 0 or n_high < n_low:
        raise DomainError(f"Need 0 <= N1 <= N2, got N1={n_low}, N2={n_high}")
    scale = 1.0 / math.sqrt(n_high - n_low + 1)
    return PureState(2, {(n, n): scale for n in range(n_low, n_high + 1)})

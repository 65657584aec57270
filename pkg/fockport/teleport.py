"""Teleportation-based manipulation of photon-number states.

One stage tensors the current state with an EPR resource, Bell-measures the
teleported mode together with the first EPR mode onto |N~, 0>, and leaves
the manipulated amplitudes on the second EPR mode, which takes the place of
the teleported mode.

Coefficient maps of the stages (input c_n, output up to normalization):

    reversal_scaling     d_n = sqrt(1 - lam^2) lam^n       c_n -> d_n c_{N~ - n}
    reversal_derivative  d_n = A (n + 1) lam^n             c_n -> d_n c_{N~ - n}
    number_shift         |N, 0, r = 1>                     c_n -> c_{n + N~ - N}
    scaling              |N, 0, r>, N = N~                 c_n -> r^n c_n
    custom_epr           sum_k d_k |N-k, k> or |k, k>
"""

import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import ClassVar, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from fockport.bell import BellMeasurementSpec, DetectorDesign, conditional_bell_measure, ideal_bell_project
from fockport.config import Settings, settings
from fockport.errors import DomainError, FockportError, ZeroProbabilityError
from fockport.fock import Projection, PureState, make_basis_state, permute_modes, tensor
from fockport.metrics import run_metrics
from fockport.models import StageProbability
from fockport.resources import (
    GeneralizedBellSpec,
    custom_epr,
    generalized_bell,
    photon_subtracted,
    preparation_probability,
    squeezed_vacuum,
)
from fockport.storage import DesignStore
from fockport.validators import validate_photon_number, validate_squeeze_parameter

logger = logging.getLogger(__name__)

Factors = List[Tuple[str, float]]


def _require(result: Tuple[bool, str]):
    is_valid, error = result
    if not is_valid:
        raise DomainError(error)


@dataclass(frozen=True)
class SuccessModel:
    """Detector success probabilities p(N~) used by the ledger.

    With ``designs`` set, stages run the linear-optical detectors themselves;
    otherwise they use the ideal projector and multiply in ``table`` values.
    """
    name: str
    table: Mapping[int, float] = field(default_factory=dict)
    default: Optional[float] = None
    designs: Optional[DesignStore] = None

    @classmethod
    def ideal(cls) -> "SuccessModel":
        return cls("ideal", default=1.0)

    @classmethod
    def quoted(cls) -> "SuccessModel":
        """p(0) = p(1) = 1 and p(2) = 3/8."""
        return cls("quoted", MappingProxyType({0: 1.0, 1: 1.0, 2: 3.0 / 8.0}))

    @classmethod
    def from_designs(cls, store: DesignStore, name: str = "designs") -> "SuccessModel":
        return cls(name, designs=store)

    @property
    def physical(self) -> bool:
        return self.designs is not None

    def design(self, n_tilde: int) -> Optional[DetectorDesign]:
        if self.designs is None:
            return None
        detector = self.designs.get(n_tilde)
        if detector is None:
            raise DomainError(f"No detector design for N~={n_tilde}", {"n_tilde": n_tilde})
        return detector

    def p(self, n_tilde: int) -> float:
        if self.designs is not None:
            return self.design(n_tilde).success_probability
        if n_tilde in self.table:
            return self.table[n_tilde]
        if self.default is not None:
            return self.default
        raise DomainError(f"No detector success probability for N~={n_tilde} in the '{self.name}' model")


def _populations(values: Union[PureState, Sequence[complex], Mapping[int, float]], mode: int = 0) -> Dict[int, float]:
    """Normalized photon-number distribution of the teleported mode."""
    if isinstance(values, PureState):
        return values.mode_populations(mode)
    if isinstance(values, Mapping):
        return dict(values)
    weights = [abs(complex(c)) ** 2 for c in values]
    total = math.fsum(weights)
    if total == 0.0:
        raise DomainError("Amplitude list has zero norm")
    return {n: w / total for n, w in enumerate(weights) if w}


def _swap_factors(n: int, lam: Optional[float], lam_prime: Optional[float], success: SuccessModel) -> Factors:
    if lam is None:
        return []
    return [
        (f"EPR preparation P(N={n})", preparation_probability(n, lam, lam_prime)),
        (f"swapping detector p({n})", success.p(n)),
    ]


@dataclass(frozen=True)
class ReversalScaling:
    """Teleport through |lam>: c_n -> sqrt(1 - lam^2) lam^n c_{N~ - n}."""
    lam: float
    n_tilde: int
    mode: int = 0
    kind: ClassVar[str] = "reversal_scaling"

    def __post_init__(self):
        _require(validate_squeeze_parameter(self.lam, "lambda"))
        _require(validate_photon_number(self.n_tilde, "N~"))

    @property
    def label(self) -> str:
        return f"reversal+scaling lambda={self.lam:g} N~={self.n_tilde}"

    def resource(self, tail_epsilon: Optional[float] = None) -> PureState:
        return squeezed_vacuum(self.lam, tail_epsilon)

    def preparation(self, success: SuccessModel) -> Factors:
        return []

    def projection_probability(self, populations: Mapping[int, float]) -> float:
        lam2 = self.lam * self.lam
        total = math.fsum(lam2 ** n * populations.get(self.n_tilde - n, 0.0) for n in range(self.n_tilde + 1))
        return (1.0 - lam2) / (self.n_tilde + 1) * total

    def uniform_probability(self) -> float:
        """Projection probability for a uniform input on 0..N~."""
        return (1.0 - self.lam ** (2 * (self.n_tilde + 1))) / (self.n_tilde + 1) ** 2


@dataclass(frozen=True)
class ReversalDerivative:
    """Teleport through the photon-subtracted state: c_n -> A (n+1) lam^n c_{N~ - n}."""
    lam: float
    n_tilde: int
    mode: int = 0
    kind: ClassVar[str] = "reversal_derivative"

    def __post_init__(self):
        _require(validate_squeeze_parameter(self.lam, "lambda"))
        _require(validate_photon_number(self.n_tilde, "N~"))

    @property
    def label(self) -> str:
        return f"reversal+derivative lambda={self.lam:g} N~={self.n_tilde}"

    def resource(self, tail_epsilon: Optional[float] = None) -> PureState:
        return photon_subtracted(self.lam, tail_epsilon)

    def preparation(self, success: SuccessModel) -> Factors:
        return []

    def _prefactor(self) -> float:
        lam2 = self.lam * self.lam
        return (1.0 - lam2) ** 3 / ((self.n_tilde + 1) * (1.0 + lam2))

    def projection_probability(self, populations: Mapping[int, float]) -> float:
        lam2 = self.lam * self.lam
        total = math.fsum(
            (n + 1) ** 2 * lam2 ** n * populations.get(self.n_tilde - n, 0.0) for n in range(self.n_tilde + 1)
        )
        return self._prefactor() * total

    def uniform_probability(self) -> float:
        lam2 = self.lam * self.lam
        total = math.fsum((n + 1) ** 2 * lam2 ** n for n in range(self.n_tilde + 1))
        return self._prefactor() * total / (self.n_tilde + 1)


def _sum_resource_probability(n: int, n_tilde: int, weights: Sequence[float], populations: Mapping[int, float]) -> float:
    """sum_{n0 <= k <= N} w_k q_{k + N~ - N} / (N~ + 1) for a number-sum resource with |d_k|^2 = w_k."""
    shift = n_tilde - n
    start = max(0, -shift)
    total = math.fsum(weights[k] * populations.get(k + shift, 0.0) for k in range(start, n + 1))
    return total / (n_tilde + 1)


@dataclass(frozen=True)
class NumberShift:
    """Teleport through |N, 0, r=1>: c_n -> c_{n + N~ - N} for max(0, N - N~) <= n <= N."""
    n: int
    n_tilde: int
    lam: Optional[float] = None
    mode: int = 0
    kind: ClassVar[str] = "number_shift"

    def __post_init__(self):
        _require(validate_photon_number(self.n, "N"))
        _require(validate_photon_number(self.n_tilde, "N~"))
        if self.lam is not None:
            _require(validate_squeeze_parameter(self.lam, "lambda"))

    @property
    def shift(self) -> int:
        return self.n_tilde - self.n

    @property
    def label(self) -> str:
        return f"number shift dN={self.shift} (N={self.n}, N~={self.n_tilde})"

    def resource(self, tail_epsilon: Optional[float] = None) -> PureState:
        return generalized_bell(GeneralizedBellSpec(self.n, 0, 1.0))

    def preparation(self, success: SuccessModel) -> Factors:
        return _swap_factors(self.n, self.lam, self.lam, success)

    def projection_probability(self, populations: Mapping[int, float]) -> float:
        weights = [1.0 / (self.n + 1)] * (self.n + 1)
        return _sum_resource_probability(self.n, self.n_tilde, weights, populations)

    def uniform_probability(self) -> float:
        start = max(0, -self.shift)
        return (1.0 - start / (self.n + 1)) / (self.n_tilde + 1) ** 2


@dataclass(frozen=True)
class Scaling:
    """Teleport through |N, 0, r> with N = N~: c_n -> r^n c_n."""
    n: int
    r: Optional[float] = None
    lam: Optional[float] = None
    lam_prime: Optional[float] = None
    mode: int = 0
    kind: ClassVar[str] = "scaling"

    def __post_init__(self):
        _require(validate_photon_number(self.n, "N"))
        if (self.lam is None) != (self.lam_prime is None):
            raise DomainError("Scaling needs both lambda and lambda' or neither")
        if self.lam is not None:
            spec = GeneralizedBellSpec.from_squeezing(self.n, 0, self.lam, self.lam_prime)
            if self.r is not None and abs(self.r - spec.r) > 1e-12 * max(1.0, self.r):
                raise DomainError(f"r={self.r} does not match lambda'/lambda={spec.r}")
            object.__setattr__(self, "r", spec.r)
        elif self.r is None:
            raise DomainError("Scaling needs r or a (lambda, lambda') pair")
        elif not math.isfinite(self.r) or self.r < 0:
            raise DomainError(f"r must be a finite non-negative number, got {self.r}")

    @property
    def n_tilde(self) -> int:
        return self.n

    @property
    def label(self) -> str:
        return f"scaling r={self.r:g} N={self.n}"

    def spec(self) -> GeneralizedBellSpec:
        if self.lam is not None:
            return GeneralizedBellSpec.from_squeezing(self.n, 0, self.lam, self.lam_prime)
        return GeneralizedBellSpec(self.n, 0, self.r)

    def resource(self, tail_epsilon: Optional[float] = None) -> PureState:
        return generalized_bell(self.spec())

    def preparation(self, success: SuccessModel) -> Factors:
        return _swap_factors(self.n, self.lam, self.lam_prime, success)

    def projection_probability(self, populations: Mapping[int, float]) -> float:
        raw = [self.r ** (2 * k) for k in range(self.n + 1)]
        total = math.fsum(raw)
        return _sum_resource_probability(self.n, self.n, [w / total for w in raw], populations)

    def uniform_probability(self) -> float:
        return 1.0 / (self.n + 1) ** 2


@dataclass(frozen=True)
class CustomEPR:
    """Teleport through a user-supplied amplitude profile."""
    profile: Tuple[complex, ...]
    n_tilde: int
    epr_kind: str = "sum"
    mode: int = 0
    kind: ClassVar[str] = "custom_epr"

    def __post_init__(self):
        object.__setattr__(self, "profile", tuple(complex(d) for d in self.profile))
        _require(validate_photon_number(self.n_tilde, "N~"))
        custom_epr(self.epr_kind, self.profile)

    @property
    def label(self) -> str:
        return f"custom {self.epr_kind} EPR N={len(self.profile) - 1} N~={self.n_tilde}"

    def resource(self, tail_epsilon: Optional[float] = None) -> PureState:
        return custom_epr(self.epr_kind, self.profile)

    def preparation(self, success: SuccessModel) -> Factors:
        return []

    def projection_probability(self, populations: Mapping[int, float]) -> float:
        weights = [abs(d) ** 2 for d in self.profile]
        if self.epr_kind == "sum":
            return _sum_resource_probability(len(weights) - 1, self.n_tilde, weights, populations)
        total = math.fsum(
            weights[n] * populations.get(self.n_tilde - n, 0.0)
            for n in range(min(self.n_tilde, len(weights) - 1) + 1)
        )
        return total / (self.n_tilde + 1)

    def uniform_probability(self) -> float:
        uniform = {n: 1.0 / (self.n_tilde + 1) for n in range(self.n_tilde + 1)}
        return self.projection_probability(uniform)


ManipulationStep = Union[ReversalScaling, ReversalDerivative, NumberShift, Scaling, CustomEPR]


def projection_probability(step: ManipulationStep, values, mode: Optional[int] = None) -> float:
    """Closed-form Bell-projection probability of one stage, without detector or preparation factors."""
    return step.projection_probability(_populations(values, step.mode if mode is None else mode))


def analytic_probability(step: ManipulationStep, values, success: Optional[SuccessModel] = None, mode: Optional[int] = None) -> float:
    """
    Closed-form success probability of one stage.

    Args:
        step: The manipulation
        values: Input state, amplitude list or photon-number distribution of the teleported mode
        success: Detector success model supplying p(N~) and the swapping p(N)
        mode: Teleported mode of a PureState input (defaults to step.mode)

    Returns:
        Projection probability times p(N~) times the EPR preparation factors
    """
    success = success or SuccessModel.ideal()
    probability = projection_probability(step, values, mode) * success.p(step.n_tilde)
    for _, factor in step.preparation(success):
        probability *= factor
    return probability


def uniform_probability(step: ManipulationStep, success: Optional[SuccessModel] = None) -> float:
    """Success probability for an input spread uniformly over 0..N~, including p(N~)."""
    success = success or SuccessModel.ideal()
    return step.uniform_probability() * success.p(step.n_tilde)


def teleport(
    state: PureState,
    input_mode: int,
    epr: PureState,
    n_tilde: int,
    detector: Union[str, DetectorDesign] = "ideal",
) -> Projection:
    """
    Teleport one mode of ``state`` through a two-mode EPR resource.

    The output mode takes the place of ``input_mode``; the probability is the
    Bell-projection probability, times p(N~) when a detector design is used.
    """
    if input_mode < 0 or input_mode >= state.mode_count:
        raise DomainError(f"Mode {input_mode} is outside 0..{state.mode_count - 1}")
    mode_count = state.mode_count
    joint = tensor(state, epr)
    measured = (input_mode, mode_count)
    if isinstance(detector, DetectorDesign):
        if detector.n_tilde != n_tilde:
            raise DomainError(f"Detector heralds N~={detector.n_tilde}, stage needs N~={n_tilde}")
        outcome = conditional_bell_measure(joint, measured, detector)
    else:
        outcome = ideal_bell_project(joint, measured, BellMeasurementSpec(n_tilde))
    run_metrics.record_teleportation()

    if outcome.state is None:
        return Projection(None, outcome.probability if outcome.probability > 0 else 0.0)

    # remaining modes: the other input modes in order, then the output mode last
    order = list(range(mode_count - 1))
    order.insert(input_mode, mode_count - 1)
    return Projection(permute_modes(outcome.state, order), outcome.probability)


@dataclass(frozen=True)
class PipelineResult:
    """Final state and the labelled probability factors of every stage."""
    output: Optional[PureState]
    stage_probabilities: Tuple[StageProbability, ...]
    net_probability: float


def run_pipeline(
    state: PureState,
    steps: Sequence[ManipulationStep],
    success: Optional[SuccessModel] = None,
    config: Optional[Settings] = None,
    check_analytic: bool = True,
    allow_zero: bool = False,
) -> PipelineResult:
    """
    Run teleportation stages in order.

    Each stage records its preparation factors, the detector factor and the
    projection probability; the simulated product is compared with
    ``analytic_probability``.

    Raises:
        ZeroProbabilityError: A stage heralds with probability zero and allow_zero is False
        FockportError: Simulated and closed-form probabilities disagree
    """
    success = success or SuccessModel.ideal()
    config = config or settings
    current = state.normalized()
    ledger: List[StageProbability] = []

    for index, step in enumerate(steps, start=1):
        prefix = f"stage {index} {step.label}"
        factors = list(step.preparation(success))
        detector = success.design(step.n_tilde) if success.physical else "ideal"
        outcome = teleport(current, step.mode, step.resource(config.tail_epsilon), step.n_tilde, detector)
        if success.physical:
            factors.append((f"linear-optical Bell measurement N~={step.n_tilde}", outcome.probability))
        else:
            factors.append((f"Bell detector p({step.n_tilde})", success.p(step.n_tilde)))
            factors.append(("Bell projection", outcome.probability))
        ledger.extend(StageProbability(label=f"{prefix}: {name}", probability=value) for name, value in factors)

        if check_analytic:
            simulated = math.prod(value for _, value in factors)
            expected = analytic_probability(step, current, success)
            if abs(simulated - expected) > config.state_tolerance:
                raise FockportError(
                    f"{prefix}: simulated probability {simulated:.12e} differs from closed form {expected:.12e}",
                    {"stage": prefix, "simulated": simulated, "analytic": expected},
                    code="ANALYTIC_MISMATCH",
                )

        heralded = outcome.state is not None and outcome.probability > 0.0
        run_metrics.record_stage(step.kind, heralded)
        if not heralded:
            logger.warning(f"{prefix} heralds with probability zero")
            if allow_zero:
                return PipelineResult(None, tuple(ledger), 0.0)
            raise ZeroProbabilityError(prefix)
        logger.info(f"{prefix}: stage probability {math.prod(v for _, v in factors):.6e}")
        current = outcome.state

    net = math.prod(entry.probability for entry in ledger)
    return PipelineResult(current, tuple(ledger), net)


@dataclass(frozen=True)
class Pipeline:
    """Named sequence of stages, with an input state when the composite is a source."""
    name: str
    steps: Tuple[ManipulationStep, ...]
    input_state: Optional[PureState] = None

    def run(
        self,
        state: Optional[PureState] = None,
        success: Optional[SuccessModel] = None,
        config: Optional[Settings] = None,
        allow_zero: bool = False,
    ) -> PipelineResult:
        state = state if state is not None else self.input_state
        if state is None:
            raise DomainError(f"Pipeline '{self.name}' needs an input state")
        return run_pipeline(state, self.steps, success, config, allow_zero=allow_zero)


def _squeezer_pair(lam: Optional[float], lam_prime: Optional[float], target_r: float) -> Tuple[Optional[float], Optional[float]]:
    """Order (lam, lam') so that lam'/lam equals target_r; P(N, lam, lam') is symmetric."""
    if lam is None and lam_prime is None:
        return None, None
    if lam is None or lam_prime is None:
        raise DomainError("Give both squeezing parameters of the swapping sources or neither")
    if lam > 0 and math.isclose(lam_prime / lam, target_r, rel_tol=1e-9):
        return lam, lam_prime
    if lam_prime > 0 and math.isclose(lam / lam_prime, target_r, rel_tol=1e-9):
        logger.info(f"Assigning squeezers as lambda={lam_prime}, lambda'={lam} to reach r={target_r:g}")
        return lam_prime, lam
    raise DomainError(
        f"Squeezers ({lam}, {lam_prime}) give neither ratio r={target_r:g}",
        {"lambda": lam, "lambda_prime": lam_prime, "r": target_r},
    )


def reversal(n_tilde: int, lam_second: float, lam: Optional[float] = None, lam_prime: Optional[float] = None, mode: int = 0) -> Pipeline:
    """
    Pure reversal c_n -> c_{N~ - n}.

    Teleport through |lam''> and then scale by r = 1/lam''; the optional
    (lam, lam') pair prepares the scaling resource by swapping.
    """
    _require(validate_squeeze_parameter(lam_second, "lambda''"))
    if lam_second == 0:
        raise DomainError("Reversal needs lambda'' > 0")
    first, second = _squeezer_pair(lam, lam_prime, 1.0 / lam_second)
    if first is None:
        scaling = Scaling(n_tilde, r=1.0 / lam_second, mode=mode)
    else:
        scaling = Scaling(n_tilde, lam=first, lam_prime=second, mode=mode)
    return Pipeline("reversal", (ReversalScaling(lam_second, n_tilde, mode), scaling))


def scissors(n: int, lam: Optional[float] = None, mode: int = 0) -> Pipeline:
    """Truncate at N: keep c_0..c_N."""
    return Pipeline("scissors", (NumberShift(n, n, lam, mode),))


def two_sided_scissors(n_low: int, n_high: int, lam: Optional[float] = None, mode: int = 0) -> Pipeline:
    """Keep c_{N1}..c_{N2}: shift down by N1, truncate, shift back up."""
    if n_low < 0 or n_high < n_low:
        raise DomainError(f"Need 0 <= N1 <= N2, got N1={n_low}, N2={n_high}")
    width = n_high - n_low
    return Pipeline(
        "two_sided_scissors",
        (NumberShift(width, n_high, lam, mode), NumberShift(n_high, width, lam, mode)),
    )


def extractor(n: int, lam: Optional[float] = None, mode: int = 0) -> Pipeline:
    """Project onto |N>: succeeds iff c_N != 0."""
    pipeline = two_sided_scissors(n, n, lam, mode)
    return Pipeline("extractor", pipeline.steps)


def n_photon_source(n: int, lam: Optional[float] = None) -> Pipeline:
    """|0> -> |N> with a number shift of -N."""
    return Pipeline("n_photon_source", (NumberShift(n, 0, lam),), make_basis_state((0,)))


def differentiate(
    n_tilde: int,
    lam: float,
    lam_second: float,
    lam_pair: Optional[Tuple[float, float]] = None,
    lam_shift: Optional[float] = None,
) -> Pipeline:
    """
    c_n -> (n + 1) lam^n c_{n+1} for an input supported on 0..N~.

    Shift down by one, reverse, then teleport through the photon-subtracted
    state, which multiplies by (n + 1) lam^n and reverses again.
    """
    if n_tilde < 1:
        raise DomainError("Differentiation needs N~ >= 1")
    top = n_tilde - 1
    pair = lam_pair or (None, None)
    reverse = reversal(top, lam_second, pair[0], pair[1])
    steps = (NumberShift(top, n_tilde, lam_shift),) + reverse.steps + (ReversalDerivative(lam, top),)
    return Pipeline("differentiate", steps)


def truncated_maximal_epr(n_high: int, lam: float, lam_prime: float, lam_second: float, n_low: int = 0) -> Pipeline:
    """
    |lam> -> sum_{n=N1}^{N2} |n, n> / sqrt(N2 - N1 + 1).

    Mode 1 of the squeezed vacuum is scaled by r = lam''/lam' = 1/lam with
    N = N2; a window N1 > 0 adds the two-sided scissors on the same mode.
    """
    _require(validate_squeeze_parameter(lam, "lambda"))
    if lam == 0:
        raise DomainError("Truncated maximal EPR needs lambda > 0")
    first, second = _squeezer_pair(lam_prime, lam_second, 1.0 / lam)
    steps: Tuple[ManipulationStep, ...] = (Scaling(n_high, lam=first, lam_prime=second, mode=1),)
    if n_low > 0:
        steps += two_sided_scissors(n_low, n_high, mode=1).steps
    return Pipeline("truncated_maximal_epr", steps, squeezed_vacuum(lam))


def filter_number(n_blocked: int, n: int) -> Pipeline:
    """Suppress |N1> and truncate above N with a sum-kind EPR, d_{N1} = 0."""
    if not 0 <= n_blocked <= n or n < 1:
        raise DomainError(f"Need 0 <= N1 <= N and N >= 1, got N1={n_blocked}, N={n}")
    weight = 1.0 / math.sqrt(n)
    profile = tuple(0.0 if k == n_blocked else weight for k in range(n + 1))
    return Pipeline("filter", (CustomEPR(profile, n, "sum"),))


def number_pair_source(n: int, shift: int, lam: float, lam_shift: Optional[float] = None) -> Pipeline:
    """|lam> -> |N>|N> -> |N - dN>|N>: extract N on mode 1, then shift mode 0 by dN."""
    if n - shift < 0:
        raise DomainError(f"Shift dN={shift} would leave a negative photon number on mode 0")
    steps = extractor(n, lam_shift, mode=1).steps + (NumberShift(n - shift, n, lam_shift, mode=0),)
    return Pipeline("number_pair_source", steps, squeezed_vacuum(lam))

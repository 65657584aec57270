"""Bell measurements in the number-sum / phase-difference basis.

An ideal measurement projects two modes onto |N~, phi>. A linear-optical
detector mixes the two modes with vacuum ancillas in a passive network and
heralds on one photon-count pattern; it succeeds with probability |g_0|^2
whenever the other Bell states of the same total photon number never
produce that pattern.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fockport.config import settings
from fockport.errors import DimensionError, DomainError
from fockport.fock import (
    Projection,
    PureState,
    make_basis_state,
    phase_aligned_distance,
    project_modes,
    project_modes_scalar,
    project_onto_state,
    random_state,
    tensor,
)
from fockport.models import BeamSplitterDocument, DetectorDesignDocument, VerificationReport, from_pair, to_pair
from fockport.optics import (
    BeamSplitterSpec,
    ModeUnitary,
    apply,
    beam_splitter,
    compose,
    identity,
    phase_layer,
)
from fockport.resources import number_phase_bell, number_phase_state
from fockport.validators import validate_accept_pattern, validate_mode_pair

logger = logging.getLogger(__name__)

FIFTY_FIFTY = BeamSplitterSpec(1 / math.sqrt(2), 1 / math.sqrt(2), 1.0, 1.0, (0, 1))
OUTCOME_00 = "bell_00"
OUTCOME_10 = "bell_10"
OUTCOME_11 = "bell_11"
OUTCOME_OTHER = "other"


@dataclass(frozen=True)
class BellMeasurementSpec:
    """Projection onto |N~, phase>; the teleporter uses phase 0."""
    n_tilde: int
    phase: float = 0.0

    def __post_init__(self):
        if self.n_tilde < 0:
            raise DomainError(f"N~ must be non-negative, got {self.n_tilde}")


@dataclass(frozen=True)
class DetectorDesign:
    """Passive network on (mode 0, mode 1, ancillas...) with an accept pattern.

    ``amplitudes[m]`` is g_m, the amplitude of the accept pattern for input
    |N~, m> with vacuum ancillas.
    """
    n_tilde: int
    ancilla_count: int
    unitary: ModeUnitary
    accept_pattern: Tuple[int, ...]
    amplitudes: Tuple[complex, ...]
    elements: Tuple[BeamSplitterSpec, ...] = ()
    input_phases: Tuple[float, ...] = ()
    note: str = field(default="", compare=False)

    @property
    def mode_count(self) -> int:
        return 2 + self.ancilla_count

    @property
    def success_probability(self) -> float:
        return abs(self.amplitudes[0]) ** 2

    @property
    def cross_talk(self) -> float:
        return max((abs(g) for g in self.amplitudes[1:]), default=0.0)

    def is_valid(self, tolerance: Optional[float] = None) -> bool:
        tolerance = settings.cross_talk_tolerance if tolerance is None else tolerance
        return self.cross_talk < tolerance and self.success_probability > 0.0


def outcome_amplitudes(design: DetectorDesign, m: int) -> Dict[Tuple[int, ...], complex]:
    """Every detector-pattern amplitude for input |N~, m> with vacuum ancillas."""
    state = number_phase_bell(design.n_tilde, m)
    if design.ancilla_count:
        state = tensor(state, make_basis_state((0,) * design.ancilla_count))
    return dict(apply(design.unitary, state).items())


def build_design(
    n_tilde: int,
    ancilla_count: int,
    unitary: ModeUnitary,
    accept_pattern: Sequence[int],
    elements: Sequence[BeamSplitterSpec] = (),
    input_phases: Sequence[float] = (),
    note: str = "",
) -> DetectorDesign:
    """
    Compute g_0..g_N~ for a network and wrap it as a DetectorDesign.

    Raises:
        DomainError: Accept pattern is inconsistent with N~ or the mode count
        DimensionError: Unitary size differs from 2 + ancilla_count
    """
    accept_pattern = tuple(int(n) for n in accept_pattern)
    is_valid, error = validate_accept_pattern(accept_pattern, n_tilde, 2 + ancilla_count)
    if not is_valid:
        raise DomainError(error)
    if unitary.dim != 2 + ancilla_count:
        raise DimensionError(f"Detector needs a {2 + ancilla_count}-mode unitary, got {unitary.dim}")

    skeleton = DetectorDesign(n_tilde, ancilla_count, unitary, accept_pattern, (0j,))
    amplitudes = tuple(
        complex(outcome_amplitudes(skeleton, m).get(accept_pattern, 0j)) for m in range(n_tilde + 1)
    )
    return DetectorDesign(
        n_tilde,
        ancilla_count,
        unitary,
        accept_pattern,
        amplitudes,
        tuple(elements),
        tuple(input_phases),
        note,
    )


def design_from_elements(
    n_tilde: int,
    ancilla_count: int,
    elements: Sequence[BeamSplitterSpec],
    accept_pattern: Sequence[int],
    input_phases: Optional[Sequence[float]] = None,
    note: str = "",
) -> DetectorDesign:
    """Detector built from an input phase layer followed by beam splitters in optical-path order."""
    mode_count = 2 + ancilla_count
    phases = tuple(input_phases) if input_phases else (0.0,) * mode_count
    unitary = phase_layer(phases)
    for spec in elements:
        unitary = compose(unitary, beam_splitter(spec, mode_count))
    return build_design(n_tilde, ancilla_count, unitary, accept_pattern, elements, phases, note)


def trivial_design() -> DetectorDesign:
    """N~ = 0: no photons in, none registered."""
    return build_design(0, 0, identity(2), (0, 0), note="vacuum outcome of any passive network")


def fifty_fifty_design() -> DetectorDesign:
    """N~ = 1: a symmetric beam splitter heralding one photon in output 0."""
    return design_from_elements(1, 0, [FIFTY_FIFTY], (1, 0), note="symmetric beam splitter")


def n2_detector(
    elements: Sequence[BeamSplitterSpec],
    accept_pattern: Sequence[int] = (0, 1, 1),
    note: str = "three beam splitters, one ancilla",
) -> DetectorDesign:
    """
    N~ = 2 detector on modes (0, 1, a) from three beam splitters.

    Elements are listed in optical-path order, so (U_(0a), U_(1a), U_(01))
    gives the network U_(0a) U_(1a) U_(01).

    Raises:
        DimensionError: Not exactly three elements
        DomainError: Accept pattern does not register two photons on three ports
    """
    if len(elements) != 3:
        raise DimensionError(f"N~=2 detector takes three beam splitters, got {len(elements)}")
    return design_from_elements(2, 1, elements, accept_pattern, note=note)


def one_ancilla_n2_design() -> DetectorDesign:
    """The N~ = 2 detector with the shipped beam-splitter parameters, heralding (0, 1, 1)."""
    return n2_detector(
        [
            BeamSplitterSpec(1 / math.sqrt(2), 1 / math.sqrt(2), 1.0, 1.0, (0, 2)),
            BeamSplitterSpec(math.sqrt(2 / 3), 1 / math.sqrt(3), 1.0, (1 + 1j) / math.sqrt(2), (1, 2)),
            BeamSplitterSpec.canonical(math.sqrt(3 / 8), -math.sqrt(5 / 8), 1.0, (3 + 1j) / math.sqrt(10), (0, 1)),
        ]
    )


def design_to_document(design: DetectorDesign) -> DetectorDesignDocument:
    return DetectorDesignDocument(
        n_tilde=design.n_tilde,
        ancilla_count=design.ancilla_count,
        accept_pattern=list(design.accept_pattern),
        input_phases=list(design.input_phases),
        elements=[
            BeamSplitterDocument(c=e.c, s=e.s, eta=to_pair(e.eta), xi=to_pair(e.xi), modes=e.modes)
            for e in design.elements
        ],
        unitary=[[to_pair(z) for z in row] for row in design.unitary.matrix],
        amplitudes=[to_pair(g) for g in design.amplitudes],
        success_probability=design.success_probability,
        note=design.note,
    )


def design_from_document(document: DetectorDesignDocument) -> DetectorDesign:
    """
    Rebuild a design, recomputing g_m from the network.

    The stored unitary is used when present; otherwise the network is
    rebuilt from the input phases and elements.
    """
    elements = [
        BeamSplitterSpec.canonical(e.c, e.s, from_pair(e.eta), from_pair(e.xi), e.modes) for e in document.elements
    ]
    if document.unitary is not None:
        unitary = ModeUnitary([[from_pair(z) for z in row] for row in document.unitary])
        design = build_design(
            document.n_tilde,
            document.ancilla_count,
            unitary,
            document.accept_pattern,
            elements,
            document.input_phases,
            document.note,
        )
    else:
        design = design_from_elements(
            document.n_tilde,
            document.ancilla_count,
            elements,
            document.accept_pattern,
            document.input_phases or None,
            document.note,
        )

    if document.success_probability is not None and abs(document.success_probability - design.success_probability) > 1e-9:
        logger.warning(
            f"Stored success probability {document.success_probability} differs from recomputed "
            f"{design.success_probability} for N~={design.n_tilde}"
        )
    return design


def ideal_bell_project(state: PureState, modes: Sequence[int], spec: BellMeasurementSpec) -> Projection:
    """Project modes (i, j) onto |N~, phase>; mode i carries N~ - k photons, mode j carries k."""
    return project_onto_state(state, modes, number_phase_state(spec.n_tilde, spec.phase))


@dataclass(frozen=True)
class FiftyFiftyOutcome:
    """Outcome probabilities and conditional states of the symmetric-beam-splitter measurement."""
    probabilities: Dict[str, float]
    states: Dict[str, Optional[PureState]]


_FIFTY_FIFTY_PATTERNS = {(0, 0): OUTCOME_00, (1, 0): OUTCOME_10, (0, 1): OUTCOME_11}


def fifty_fifty_measure(state: PureState, modes: Sequence[int]) -> FiftyFiftyOutcome:
    """
    Symmetric beam splitter on (i, j) then photon counting.

    Counts (0,0), (1,0) and (0,1) herald |0,0>_B, |1,0>_B and |1,1>_B;
    every other count is reported as "other".
    """
    modes = tuple(modes)
    is_valid, error = validate_mode_pair(modes, state.mode_count)
    if not is_valid or len(modes) != 2:
        raise DimensionError(error or "Symmetric beam-splitter measurement needs two modes")

    mixed = apply(beam_splitter(FIFTY_FIFTY, 2), state, modes)
    probabilities: Dict[str, float] = {}
    states: Dict[str, Optional[PureState]] = {}
    for pattern, label in _FIFTY_FIFTY_PATTERNS.items():
        if state.mode_count == 2:
            probabilities[label] = project_modes_scalar(mixed, pattern)
            states[label] = None
        else:
            outcome = project_modes(mixed, modes, pattern)
            probabilities[label] = outcome.probability
            states[label] = outcome.state
    probabilities[OUTCOME_OTHER] = max(0.0, mixed.norm_squared() - math.fsum(probabilities.values()))
    states[OUTCOME_OTHER] = None
    return FiftyFiftyOutcome(probabilities, states)


def _number_sector(state: PureState, modes: Tuple[int, ...], total: int) -> Optional[PureState]:
    """Components whose measured modes hold ``total`` photons; None when there are none."""
    sector = {p: a for p, a in state.items() if sum(p[i] for i in modes) == total}
    if not sector:
        return None
    return PureState(state.mode_count, sector, state.cutoff)


def _measure_with_design(state: PureState, modes: Tuple[int, ...], design: DetectorDesign) -> Projection:
    sector = _number_sector(state, modes, design.n_tilde)
    if sector is None:
        return Projection(None, 0.0)

    mode_count = state.mode_count
    if design.ancilla_count:
        sector = tensor(sector, make_basis_state((0,) * design.ancilla_count))
    ancillas = tuple(range(mode_count, mode_count + design.ancilla_count))
    network_modes = modes + ancillas
    output = apply(design.unitary, sector, network_modes)

    if output.mode_count == len(network_modes):
        return Projection(None, project_modes_scalar(output, design.accept_pattern))
    return project_modes(output, network_modes, design.accept_pattern)


def conditional_bell_measure(state: PureState, modes: Sequence[int], design: DetectorDesign) -> Projection:
    """
    Run a linear-optical Bell detector on modes (i, j).

    Returns:
        Conditional state of the unmeasured modes and the heralding probability,
        equal to p(N~) times the ideal projection probability

    Raises:
        DomainError: The design has cross-talk above the design tolerance
    """
    modes = tuple(modes)
    is_valid, error = validate_mode_pair(modes, state.mode_count)
    if not is_valid or len(modes) != 2:
        raise DimensionError(error or "Bell measurement needs two modes")
    if not design.is_valid():
        raise DomainError(
            f"Detector for N~={design.n_tilde} has cross-talk {design.cross_talk:.3e}",
            {"n_tilde": design.n_tilde, "cross_talk": design.cross_talk},
        )
    return _measure_with_design(state, modes, design)


def verify_design(
    design: DetectorDesign,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> VerificationReport:
    """
    Compare the detector with the ideal projector on random three-mode inputs.

    Each trial measures modes (0, 1) of a random state and records the
    phase-aligned distance between the conditional states and the deviation
    of the heralding probability from p(N~) times the ideal probability.
    """
    trials = settings.random_trials if trials is None else trials
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    spec = BellMeasurementSpec(design.n_tilde)
    p = design.success_probability
    max_state, max_probability = 0.0, 0.0

    for _ in range(trials):
        state = random_state(rng, 3, design.n_tilde + 1)
        ideal = ideal_bell_project(state, (0, 1), spec)
        measured = _measure_with_design(state, (0, 1), design)
        max_probability = max(max_probability, abs(measured.probability - p * ideal.probability))
        if ideal.state is not None and measured.state is not None:
            max_state = max(max_state, phase_aligned_distance(measured.state, ideal.state))

    logger.info(
        f"Verified N~={design.n_tilde} detector on {trials} inputs: "
        f"state deviation {max_state:.3e}, probability deviation {max_probability:.3e}"
    )
    return VerificationReport(
        n_tilde=design.n_tilde,
        trials=trials,
        success_probability=p,
        max_state_deviation=max_state,
        max_probability_deviation=max_probability,
    )

"""Sparse multimode photon-number states.

A ``PureState`` maps occupation patterns (one photon count per mode) to
complex amplitudes. Patterns are kept in lexicographic order so that every
derived quantity is computed in a deterministic order.
"""

import logging
import math
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from fockport.config import settings
from fockport.errors import CutoffError, DimensionError, DomainError
from fockport.validators import is_normalized, validate_mode_pair, validate_occupation

logger = logging.getLogger(__name__)

Pattern = Tuple[int, ...]


class Projection(NamedTuple):
    """Normalized conditional state on the unmeasured modes and its probability.

    ``state`` is None when the probability is zero or no mode is left.
    """
    state: Optional["PureState"]
    probability: float


class PureState:
    """Immutable sparse pure state over a fixed number of modes."""

    __slots__ = ("_mode_count", "_amplitudes", "_cutoff", "_norm_squared")

    def __init__(
        self,
        mode_count: int,
        amplitudes: Mapping[Sequence[int], complex],
        cutoff: Optional[Sequence[int]] = None,
    ):
        """
        Build a state, pruning amplitudes below the configured threshold.

        Args:
            mode_count: Number of modes
            amplitudes: Map from occupation pattern to amplitude
            cutoff: Per-mode maximum photon number

        Raises:
            DomainError: No amplitude survives, counts are invalid or the norm exceeds 1
            DimensionError: A pattern has the wrong length
            CutoffError: A pattern exceeds the cutoff
        """
        if mode_count < 1:
            raise DomainError(f"mode_count must be positive, got {mode_count}")

        summed: Dict[Pattern, complex] = {}
        for raw_pattern, raw_amplitude in amplitudes.items():
            is_valid, error = validate_occupation(raw_pattern)
            if not is_valid:
                raise DomainError(error)
            pattern = tuple(int(n) for n in raw_pattern)
            if len(pattern) != mode_count:
                raise DimensionError(
                    f"Pattern {pattern} has {len(pattern)} modes, state has {mode_count}",
                    {"pattern": list(pattern)},
                )
            amplitude = complex(raw_amplitude)
            if not (math.isfinite(amplitude.real) and math.isfinite(amplitude.imag)):
                raise DomainError(f"Amplitude of {pattern} is not finite")
            summed[pattern] = summed.get(pattern, 0j) + amplitude
        kept = {p: a for p, a in summed.items() if abs(a) >= settings.prune_threshold}

        if not kept:
            raise DomainError("State has no nonzero amplitude")

        if cutoff is None:
            cutoff = tuple(
                max(settings.max_photons, max(pattern[i] for pattern in kept)) for i in range(mode_count)
            )
        else:
            cutoff = tuple(int(c) for c in cutoff)
            if len(cutoff) != mode_count:
                raise DimensionError(f"Cutoff has {len(cutoff)} entries, state has {mode_count} modes")
            for pattern in kept:
                if any(n > c for n, c in zip(pattern, cutoff)):
                    raise CutoffError(f"Pattern {pattern} exceeds cutoff {cutoff}", {"pattern": list(pattern)})

        norm_squared = math.fsum(abs(a) ** 2 for a in kept.values())
        if norm_squared > 1.0 + settings.tolerance:
            raise DomainError(f"Squared norm {norm_squared} exceeds 1; normalize the amplitudes")

        self._mode_count = mode_count
        self._amplitudes = MappingProxyType(dict(sorted(kept.items())))
        self._cutoff = cutoff
        self._norm_squared = norm_squared

    @property
    def mode_count(self) -> int:
        return self._mode_count

    @property
    def cutoff(self) -> Tuple[int, ...]:
        return self._cutoff

    @property
    def amplitudes(self) -> Mapping[Pattern, complex]:
        return self._amplitudes

    @property
    def is_normalized(self) -> bool:
        return is_normalized(self._norm_squared, settings.tolerance)

    def items(self) -> Iterator[Tuple[Pattern, complex]]:
        return iter(self._amplitudes.items())

    def amplitude(self, pattern: Sequence[int]) -> complex:
        """Amplitude of a pattern, zero when absent."""
        return self._amplitudes.get(tuple(pattern), 0j)

    def norm_squared(self) -> float:
        return self._norm_squared

    def normalized(self) -> "PureState":
        """Return the state rescaled to unit norm."""
        if self.is_normalized:
            return self
        return self.scaled(1.0 / math.sqrt(self._norm_squared))

    def scaled(self, factor: complex) -> "PureState":
        return PureState(
            self._mode_count,
            {pattern: amplitude * factor for pattern, amplitude in self.items()},
            self._cutoff,
        )

    def photon_numbers(self) -> Tuple[int, ...]:
        """Sorted total photon numbers present in the support."""
        return tuple(sorted({sum(pattern) for pattern in self._amplitudes}))

    def mode_populations(self, mode: int) -> Dict[int, float]:
        """Marginal photon-number distribution of one mode, for the normalized state."""
        if mode < 0 or mode >= self._mode_count:
            raise DimensionError(f"Mode {mode} is outside 0..{self._mode_count - 1}")
        populations: Dict[int, float] = {}
        for pattern, amplitude in self.items():
            populations[pattern[mode]] = populations.get(pattern[mode], 0.0) + abs(amplitude) ** 2
        return {n: p / self._norm_squared for n, p in sorted(populations.items())}

    def __len__(self) -> int:
        return len(self._amplitudes)

    def __repr__(self) -> str:
        return f"PureState(mode_count={self._mode_count}, terms={len(self)}, norm_squared={self._norm_squared:.12g})"


def make_basis_state(counts: Sequence[int], cutoff: Optional[Sequence[int]] = None) -> PureState:
    """Occupation-number basis state |n1, ..., nM>."""
    counts = tuple(counts)
    return PureState(len(counts), {counts: 1.0}, cutoff)


def single_mode_state(amplitudes: Sequence[complex], normalize: bool = True) -> PureState:
    """
    Build sum_n c_n |n> from an amplitude list indexed by photon number.

    Args:
        amplitudes: Coefficients c_0, c_1, ...
        normalize: Rescale to unit norm

    Returns:
        Single-mode PureState
    """
    values = [complex(a) for a in amplitudes]
    norm_squared = math.fsum(abs(a) ** 2 for a in values)
    if norm_squared == 0.0:
        raise DomainError("Amplitude list has zero norm")
    scale = 1.0 / math.sqrt(norm_squared) if normalize else 1.0
    return PureState(1, {(n,): a * scale for n, a in enumerate(values) if a != 0})


def superpose(
    terms: Union[Mapping[Sequence[int], complex], Iterable[Tuple[Sequence[int], complex]]],
    normalize: bool = False,
) -> PureState:
    """
    Superposition of basis patterns with the given amplitudes.

    Args:
        terms: (pattern, amplitude) pairs or a pattern -> amplitude map;
            amplitudes of a repeated pattern are added
        normalize: Rescale to unit norm

    Raises:
        DomainError: No terms, or every amplitude cancels
        DimensionError: Patterns disagree on the mode count
    """
    pairs = list(terms.items()) if isinstance(terms, Mapping) else [(p, a) for p, a in terms]
    if not pairs:
        raise DomainError("Superposition needs at least one term")
    mode_count = len(pairs[0][0])
    summed: Dict[Tuple[int, ...], complex] = {}
    for pattern, amplitude in pairs:
        if len(pattern) != mode_count:
            raise DimensionError(f"Pattern {tuple(pattern)} has {len(pattern)} modes, expected {mode_count}")
        key = tuple(pattern)
        summed[key] = summed.get(key, 0j) + complex(amplitude)
    norm_squared = math.fsum(abs(a) ** 2 for a in summed.values())
    if norm_squared < settings.prune_threshold ** 2:
        raise DomainError("Superposition amplitudes cancel to zero")
    if normalize:
        scale = 1.0 / math.sqrt(norm_squared)
        summed = {pattern: a * scale for pattern, a in summed.items()}
    return PureState(mode_count, summed)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.mode_count != b.mode_count:
        raise DimensionError(f"Cannot take <a|b> of {a.mode_count}-mode and {b.mode_count}-mode states")
    total = 0j
    for pattern, amplitude in a.items():
        other = b.amplitudes.get(pattern)
        if other is not None:
            total += amplitude.conjugate() * other
    return total


def fidelity(a: PureState, b: PureState) -> float:
    return abs(inner_product(a, b)) ** 2 / (a.norm_squared() * b.norm_squared())


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; modes of ``a`` come first."""
    product = {
        pattern_a + pattern_b: amp_a * amp_b
        for pattern_a, amp_a in a.items()
        for pattern_b, amp_b in b.items()
    }
    return PureState(a.mode_count + b.mode_count, product, a.cutoff + b.cutoff)


def permute_modes(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder modes so that new mode k is old mode order[k]."""
    if sorted(order) != list(range(state.mode_count)):
        raise DimensionError(f"{tuple(order)} is not a permutation of {state.mode_count} modes")
    return PureState(
        state.mode_count,
        {tuple(pattern[i] for i in order): amplitude for pattern, amplitude in state.items()},
        tuple(state.cutoff[i] for i in order),
    )


def _check_modes(state: PureState, modes: Sequence[int]) -> Tuple[int, ...]:
    modes = tuple(modes)
    is_valid, error = validate_mode_pair(modes, state.mode_count)
    if not is_valid:
        raise DimensionError(error)
    return modes


def _contract(state: PureState, modes: Tuple[int, ...], weights: Mapping[Pattern, complex]) -> Projection:
    """Contract the measured modes against conj(weights) and renormalize the rest."""
    rest_modes = tuple(i for i in range(state.mode_count) if i not in modes)
    remaining: Dict[Pattern, complex] = {}
    for pattern, amplitude in state.items():
        weight = weights.get(tuple(pattern[i] for i in modes))
        if weight is None:
            continue
        key = tuple(pattern[i] for i in rest_modes)
        remaining[key] = remaining.get(key, 0j) + weight.conjugate() * amplitude

    probability = math.fsum(abs(a) ** 2 for a in remaining.values())
    if not rest_modes or probability == 0.0:
        return Projection(None, probability)

    scale = 1.0 / math.sqrt(probability)
    survivors = {pattern: a * scale for pattern, a in remaining.items() if abs(a * scale) >= settings.prune_threshold}
    if not survivors:
        return Projection(None, probability)
    return Projection(
        PureState(len(rest_modes), survivors, tuple(state.cutoff[i] for i in rest_modes)),
        probability,
    )


def project_modes(state: PureState, modes: Sequence[int], pattern: Sequence[int]) -> Projection:
    """
    Project the listed modes onto a number pattern.

    Args:
        state: State to measure
        modes: Distinct measured modes
        pattern: Photon counts registered on those modes

    Returns:
        Projection with the normalized state of the remaining modes (ascending order)
        and the squared norm of the projected component
    """
    modes = _check_modes(state, modes)
    if len(pattern) != len(modes):
        raise DimensionError(f"Pattern {tuple(pattern)} does not match modes {modes}")
    if len(modes) == state.mode_count:
        raise DomainError("Every mode is measured; use project_modes_scalar")
    return _contract(state, modes, {tuple(pattern): 1.0 + 0j})


def project_modes_scalar(state: PureState, pattern: Sequence[int]) -> float:
    """Probability of registering ``pattern`` on every mode."""
    if len(pattern) != state.mode_count:
        raise DimensionError(f"Pattern {tuple(pattern)} does not cover {state.mode_count} modes")
    return abs(state.amplitude(pattern)) ** 2


def project_onto_state(state: PureState, modes: Sequence[int], target: PureState) -> Projection:
    """Project the listed modes onto ``target`` (a state of len(modes) modes)."""
    modes = _check_modes(state, modes)
    if target.mode_count != len(modes):
        raise DimensionError(f"Target has {target.mode_count} modes, measuring {len(modes)}")
    return _contract(state, modes, dict(target.items()))


def phase_aligned_distance(a: PureState, b: PureState) -> float:
    """Largest amplitude difference between normalized a and b after the best global phase."""
    if a.mode_count != b.mode_count:
        raise DimensionError(f"Cannot compare {a.mode_count}-mode and {b.mode_count}-mode states")
    a, b = a.normalized(), b.normalized()
    overlap = inner_product(a, b)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    patterns = set(a.amplitudes) | set(b.amplitudes)
    return max(abs(phase * a.amplitude(p) - b.amplitude(p)) for p in patterns)


def equal_up_to_phase(a: PureState, b: PureState, tolerance: Optional[float] = None) -> bool:
    tolerance = settings.state_tolerance if tolerance is None else tolerance
    return phase_aligned_distance(a, b) <= tolerance


def random_state(rng: np.random.Generator, mode_count: int, max_photons: int) -> PureState:
    """Normalized state with Gaussian random amplitudes on every pattern up to max_photons per mode."""
    patterns = list(np.ndindex(*([max_photons + 1] * mode_count)))
    values = rng.normal(size=len(patterns)) + 1j * rng.normal(size=len(patterns))
    values /= np.linalg.norm(values)
    return PureState(mode_count, {tuple(int(n) for n in p): complex(v) for p, v in zip(patterns, values)})


def format_state(state: PureState) -> str:
    """Canonical text form: one 'n1 ... nM  re  im' line per term, lexicographic order."""
    lines = []
    for pattern, amplitude in state.items():
        counts = " ".join(str(n) for n in pattern)
        lines.append(f"{counts}  {amplitude.real!r}  {amplitude.imag!r}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> PureState:
    """Inverse of format_state; blank lines and '#' comments are ignored."""
    terms: Dict[Pattern, complex] = {}
    mode_count = None
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 3:
            raise DomainError(f"Line {number}: expected 'n1 ... nM re im'", {"line": number})
        try:
            pattern = tuple(int(t) for t in tokens[:-2])
            amplitude = complex(float(tokens[-2]), float(tokens[-1]))
        except ValueError as exc:
            raise DomainError(f"Line {number}: {exc}", {"line": number}) from exc
        if mode_count is None:
            mode_count = len(pattern)
        elif len(pattern) != mode_count:
            raise DimensionError(f"Line {number}: expected {mode_count} modes", {"line": number})
        terms[pattern] = amplitude
    if mode_count is None:
        raise DomainError("No state terms found")
    return PureState(mode_count, terms)


"""Passive linear optics on photon-number states.

Unitaries act on creation operators: a_i^dagger -> sum_j U_ij b_j^dagger.
``compose(first, second)`` is the network in which ``first`` is met first
along the optical path, and equals ``first.matrix @ second.matrix``.
"""

import cmath
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group
from thewalrus import perm

from fockport.config import settings
from fockport.errors import CutoffError, DimensionError, DomainError
from fockport.fock import Pattern, PureState
from fockport.validators import validate_beam_splitter, validate_mode_pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Two-mode block [[c, -s*eta], [s*xi, c*eta*xi]] acting on ``modes``."""
    c: float
    s: float
    eta: complex = 1.0
    xi: complex = 1.0
    modes: Tuple[int, int] = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "xi", complex(self.xi))
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        is_valid, error = validate_beam_splitter(self.c, self.s, self.eta, self.xi, settings.tolerance)
        if not is_valid:
            raise DomainError(error)
        if len(self.modes) != 2 or self.modes[0] == self.modes[1] or min(self.modes) < 0:
            raise DomainError(f"Beam splitter needs two distinct non-negative modes, got {self.modes}")

    @classmethod
    def canonical(cls, c: float, s: float, eta: complex = 1.0, xi: complex = 1.0, modes: Tuple[int, int] = (0, 1)) -> "BeamSplitterSpec":
        """
        Build a spec from parameters that may carry a negative s.

        A negative s is absorbed by flipping the signs of both eta and xi,
        which leaves the 2x2 block unchanged.

        Raises:
            DomainError: c < 0, which has no block-preserving canonical form
        """
        if c < 0:
            raise DomainError("c < 0 has no canonical form with the same block; add a phase shifter instead")
        if s < 0:
            return cls(c, -s, -complex(eta), -complex(xi), modes)
        return cls(c, s, eta, xi, modes)

    def block(self) -> np.ndarray:
        return np.array(
            [
                [self.c, -self.s * self.eta],
                [self.s * self.xi, self.c * self.eta * self.xi],
            ],
            dtype=complex,
        )


class ModeUnitary:
    """Immutable unitary matrix over a fixed number of modes."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix, check: bool = True):
        array = np.array(matrix, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise DimensionError(f"Unitary must be square, got shape {array.shape}")
        if check:
            deviation = np.max(np.abs(array.conj().T @ array - np.eye(array.shape[0])))
            if deviation > settings.tolerance * 10:
                raise DomainError(f"Matrix is not unitary (max |U^dagger U - 1| = {deviation:.3e})")
        array.setflags(write=False)
        self._matrix = array

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self._matrix.conj().T, check=False)

    def allclose(self, other: "ModeUnitary", tolerance: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.max(np.abs(self._matrix - other._matrix)) <= tolerance)

    def __repr__(self) -> str:
        return f"ModeUnitary(dim={self.dim})"


def identity(mode_count: int) -> ModeUnitary:
    return ModeUnitary(np.eye(mode_count), check=False)


def embed(block: np.ndarray, modes: Sequence[int], mode_count: int) -> ModeUnitary:
    """Identity on mode_count modes with ``block`` acting on ``modes``."""
    is_valid, error = validate_mode_pair(modes, mode_count)
    if not is_valid:
        raise DimensionError(error)
    matrix = np.eye(mode_count, dtype=complex)
    matrix[np.ix_(modes, modes)] = block
    return ModeUnitary(matrix)


def beam_splitter(spec: BeamSplitterSpec, mode_count: int) -> ModeUnitary:
    return embed(spec.block(), spec.modes, mode_count)


def phase_shifter(phi: float, mode: int, mode_count: int) -> ModeUnitary:
    """a_mode^dagger -> e^{i phi} a_mode^dagger."""
    return embed(np.array([[cmath.exp(1j * phi)]]), (mode,), mode_count)


def phase_layer(phases: Sequence[float]) -> ModeUnitary:
    return ModeUnitary(np.diag(np.exp(1j * np.asarray(phases, dtype=float))), check=False)


def compose(first: ModeUnitary, second: ModeUnitary) -> ModeUnitary:
    """Network in which ``first`` acts before ``second`` along the optical path."""
    if first.dim != second.dim:
        raise DimensionError(f"Cannot compose {first.dim}-mode and {second.dim}-mode unitaries")
    return ModeUnitary(first.matrix @ second.matrix)


def network(elements: Sequence[ModeUnitary]) -> ModeUnitary:
    """Compose a sequence listed in optical-path order."""
    if not elements:
        raise DomainError("Network needs at least one element")
    return reduce(compose, elements)


def _row_expansion(row: np.ndarray, photons: int) -> Dict[Pattern, complex]:
    """Multinomial expansion of (sum_j row_j b_j^dagger)^photons as count-vector -> coefficient."""
    terms: Dict[Pattern, complex] = {}
    size = len(row)
    for combination in itertools.combinations_with_replacement(range(size), photons):
        counts = Counter(combination)
        pattern = tuple(counts.get(j, 0) for j in range(size))
        coefficient = math.factorial(photons)
        value = 1.0 + 0j
        for j, k in counts.items():
            coefficient //= math.factorial(k)
            value *= row[j] ** k
        terms[pattern] = coefficient * value
    return terms


def _expand_pattern(matrix: np.ndarray, inputs: Pattern) -> Dict[Pattern, complex]:
    """Output patterns and amplitudes produced by one input basis pattern."""
    size = len(inputs)
    partial: Dict[Pattern, complex] = {(0,) * size: 1.0 + 0j}
    input_factorials = 1
    for i, photons in enumerate(inputs):
        if photons == 0:
            continue
        input_factorials *= math.factorial(photons)
        row_terms = _row_expansion(matrix[i], photons)
        combined: Dict[Pattern, complex] = {}
        for base, base_value in partial.items():
            for counts, value in row_terms.items():
                key = tuple(a + b for a, b in zip(base, counts))
                combined[key] = combined.get(key, 0j) + base_value * value
        partial = combined

    return {
        counts: value * math.sqrt(math.prod(math.factorial(k) for k in counts) / input_factorials)
        for counts, value in partial.items()
    }


def apply(unitary: ModeUnitary, state: PureState, modes: Optional[Sequence[int]] = None) -> PureState:
    """
    Transform a state through a passive linear network.

    Args:
        unitary: Network acting on ``modes``
        state: Input state
        modes: Modes the network acts on (all modes when omitted)

    Returns:
        Output state with the same mode count and cutoff

    Raises:
        DimensionError: The unitary does not match the listed modes
        CutoffError: An output pattern exceeds the per-mode cutoff
    """
    if modes is None:
        modes = tuple(range(state.mode_count))
    modes = tuple(modes)
    is_valid, error = validate_mode_pair(modes, state.mode_count)
    if not is_valid:
        raise DimensionError(error)
    if unitary.dim != len(modes):
        raise DimensionError(f"{unitary.dim}-mode unitary applied to {len(modes)} modes")

    matrix = unitary.matrix
    cache: Dict[Pattern, Dict[Pattern, complex]] = {}
    output: Dict[Pattern, complex] = {}
    for pattern, amplitude in state.items():
        inputs = tuple(pattern[m] for m in modes)
        if inputs not in cache:
            cache[inputs] = _expand_pattern(matrix, inputs)
        for counts, value in cache[inputs].items():
            new_pattern = list(pattern)
            for index, mode in enumerate(modes):
                if counts[index] > state.cutoff[mode]:
                    raise CutoffError(
                        f"Mode {mode} would hold {counts[index]} photons, cutoff is {state.cutoff[mode]}",
                        {"mode": mode, "photons": counts[index]},
                    )
                new_pattern[mode] = counts[index]
            key = tuple(new_pattern)
            output[key] = output.get(key, 0j) + amplitude * value

    return PureState(state.mode_count, output, state.cutoff)


def transition_amplitude(unitary: ModeUnitary, in_pattern: Sequence[int], out_pattern: Sequence[int]) -> complex:
    """<out| U |in> = per(U[in rows, out cols]) / sqrt(prod n_i! prod m_j!)."""
    if len(in_pattern) != unitary.dim or len(out_pattern) != unitary.dim:
        raise DimensionError("Patterns must cover every mode of the unitary")
    if sum(in_pattern) != sum(out_pattern):
        return 0j
    rows = [i for i, n in enumerate(in_pattern) for _ in range(n)]
    cols = [j for j, m in enumerate(out_pattern) for _ in range(m)]
    if not rows:
        return 1.0 + 0j
    submatrix = np.ascontiguousarray(unitary.matrix[np.ix_(rows, cols)])
    norm = math.prod(math.factorial(n) for n in in_pattern) * math.prod(math.factorial(m) for m in out_pattern)
    return complex(perm(submatrix)) / math.sqrt(norm)


def reck_pairs(mode_count: int) -> List[Tuple[int, int]]:
    """Mode pairs of the elimination sequence, in elimination order."""
    return [(col, col + 1) for row in range(mode_count - 1, 0, -1) for col in range(row)]


def mzi_block(theta: float, phi: float, modes: Tuple[int, int]) -> BeamSplitterSpec:
    """Block with c = cos(theta), s = sin(theta), eta = e^{i phi}, xi = 1; theta in [0, pi/2]."""
    return BeamSplitterSpec(math.cos(theta), math.sin(theta), cmath.exp(1j * phi), 1.0, modes)


def reck_decompose(unitary: ModeUnitary) -> Tuple[List[BeamSplitterSpec], np.ndarray]:
    """
    Factor U = D . T_K ... T_1 into two-mode blocks and a diagonal phase layer.

    Each T_k nulls one entry below the diagonal, row by row from the bottom.

    Returns:
        Blocks T_1..T_K in elimination order and the phases of D
    """
    work = np.array(unitary.matrix, dtype=complex)
    elements: List[BeamSplitterSpec] = []
    for row in range(unitary.dim - 1, 0, -1):
        for col in range(row):
            col_next = col + 1
            x, y = work[row, col], work[row, col_next]
            theta = float(np.arctan2(abs(x), abs(y)))
            phi = float(np.angle(y) - np.angle(x))
            spec = mzi_block(theta, phi, (col, col_next))
            work[:, [col, col_next]] = work[:, [col, col_next]] @ spec.block().conj().T
            elements.append(spec)
    return elements, np.angle(np.diag(work))


def reck_compose(elements: Sequence[BeamSplitterSpec], phases: Sequence[float], mode_count: int) -> ModeUnitary:
    """Inverse of reck_decompose: D . T_K ... T_1."""
    result = phase_layer(phases)
    if result.dim != mode_count:
        raise DimensionError(f"{len(phases)} phases given for {mode_count} modes")
    for spec in reversed(elements):
        result = compose(result, beam_splitter(spec, mode_count))
    return result


def reck_matrix(thetas: np.ndarray, phis: np.ndarray, phases: np.ndarray, mode_count: int) -> np.ndarray:
    """Unchecked matrix of reck_compose for optimizer parameters."""
    matrix = np.diag(np.exp(1j * phases))
    pairs = reck_pairs(mode_count)
    for index in range(len(pairs) - 1, -1, -1):
        i, j = pairs[index]
        c, s = math.cos(thetas[index]), math.sin(thetas[index])
        eta = cmath.exp(1j * phis[index])
        block = np.array([[c, -s * eta], [s, c * eta]], dtype=complex)
        matrix[:, [i, j]] = matrix[:, [i, j]] @ block
    return matrix


def random_unitary(mode_count: int, rng: np.random.Generator) -> ModeUnitary:
    """Haar-random unitary."""
    return ModeUnitary(unitary_group.rvs(mode_count, random_state=rng))


def format_matrix(unitary: ModeUnitary) -> str:
    """Row-major text form, one row per line, each entry as 're im'."""
    rows = []
    for row in unitary.matrix:
        rows.append("  ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row))
    return "\n".join(rows) + "\n"

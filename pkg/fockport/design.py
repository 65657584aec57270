"""Search for linear-optical Bell detectors.

The network is parameterized as an input phase layer followed by the
two-mode blocks of a Reck elimination, so every unitary is reachable. Each
restart maximizes |g_0|^2 under a growing cross-talk penalty, then polishes
the cross-talk with a least-squares solve at fixed success probability.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.optimize

from fockport.bell import DetectorDesign, design_from_elements, design_to_document
from fockport.config import Settings, settings
from fockport.metrics import run_metrics
from fockport.models import DesignProblem, DesignReport, DesignSweep
from fockport.optics import ModeUnitary, mzi_block, reck_matrix, reck_pairs, transition_amplitude
from fockport.resources import omega_power

logger = logging.getLogger(__name__)

MIN_SUCCESS = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    """Optimizer settings resolved from a problem and the application settings."""
    cross_talk_tolerance: float
    restarts: int
    max_iterations: int
    penalty_start: float
    penalty_rounds: int
    seed: int
    workers: int

    @classmethod
    def resolve(cls, problem: DesignProblem, config: Optional[Settings] = None) -> "SearchConfig":
        config = config or settings

        def pick(value, default):
            return default if value is None else value

        return cls(
            cross_talk_tolerance=pick(problem.cross_talk_tolerance, config.cross_talk_tolerance),
            restarts=pick(problem.restarts, config.design_restarts),
            max_iterations=pick(problem.max_iterations, config.design_max_iterations),
            penalty_start=pick(problem.penalty_start, config.design_penalty_start),
            penalty_rounds=pick(problem.penalty_rounds, config.design_penalty_rounds),
            seed=pick(problem.seed, config.seed),
            workers=pick(problem.workers, config.design_workers),
        )


@dataclass(frozen=True)
class RestartResult:
    index: int
    parameters: np.ndarray
    success_probability: float
    cross_talk: float
    evaluations: int


class DetectorObjective:
    """g_m(parameters) for one problem, evaluated with permanents."""

    def __init__(self, problem: DesignProblem):
        self.n_tilde = problem.n_tilde
        self.mode_count = 2 + problem.ancilla_count
        self.accept_pattern = tuple(problem.accept_pattern)
        self.block_count = len(reck_pairs(self.mode_count))
        n = self.n_tilde
        self._bell = np.array(
            [[omega_power(m, k, n) / math.sqrt(n + 1) for k in range(n + 1)] for m in range(n + 1)]
        )
        self._inputs = [(n - k, k) + (0,) * problem.ancilla_count for k in range(n + 1)]

    @property
    def size(self) -> int:
        return 2 * self.block_count + self.mode_count

    def bounds(self):
        lower = np.concatenate(
            [np.zeros(self.block_count), np.full(self.block_count, -2 * math.pi), np.full(self.mode_count, -2 * math.pi)]
        )
        upper = np.concatenate(
            [np.full(self.block_count, math.pi / 2), np.full(self.block_count, 2 * math.pi), np.full(self.mode_count, 2 * math.pi)]
        )
        return lower, upper

    def split(self, parameters: np.ndarray):
        k = self.block_count
        return parameters[:k], parameters[k:2 * k], parameters[2 * k:]

    def unitary(self, parameters: np.ndarray) -> ModeUnitary:
        thetas, phis, phases = self.split(parameters)
        return ModeUnitary(reck_matrix(thetas, phis, phases, self.mode_count), check=False)

    def amplitudes(self, parameters: np.ndarray) -> np.ndarray:
        unitary = self.unitary(parameters)
        raw = np.array([transition_amplitude(unitary, p, self.accept_pattern) for p in self._inputs])
        return self._bell @ raw

    def penalized(self, parameters: np.ndarray, weight: float) -> float:
        g = self.amplitudes(parameters)
        return float(-abs(g[0]) ** 2 + weight * np.sum(np.abs(g[1:]) ** 2))

    def residuals(self, parameters: np.ndarray, target: float) -> np.ndarray:
        g = self.amplitudes(parameters)
        return np.concatenate([g[1:].real, g[1:].imag, [abs(g[0]) ** 2 - target]])

    def measure(self, parameters: np.ndarray):
        g = self.amplitudes(parameters)
        return abs(g[0]) ** 2, float(np.max(np.abs(g[1:]))) if len(g) > 1 else 0.0

    def design(self, parameters: np.ndarray, ancilla_count: int) -> DetectorDesign:
        """Detector with the phase layer first and the blocks in optical-path order."""
        thetas, phis, phases = self.split(parameters)
        pairs = reck_pairs(self.mode_count)
        blocks = [mzi_block(float(t), float(p), pair) for t, p, pair in zip(thetas, phis, pairs)]
        return design_from_elements(
            self.n_tilde,
            ancilla_count,
            list(reversed(blocks)),
            self.accept_pattern,
            [float(v) for v in phases],
            note="optimizer",
        )


def _run_restart(objective: DetectorObjective, search: SearchConfig, index: int, seed_sequence) -> RestartResult:
    rng = np.random.default_rng(seed_sequence)
    lower, upper = objective.bounds()
    k = objective.block_count
    parameters = np.concatenate(
        [
            rng.uniform(0.0, math.pi / 2, k),
            rng.uniform(-math.pi, math.pi, k),
            rng.uniform(-math.pi, math.pi, objective.mode_count),
        ]
    )
    evaluations = 0
    weight = search.penalty_start
    bounds = list(zip(lower, upper))

    for round_index in range(search.penalty_rounds):
        result = scipy.optimize.minimize(
            objective.penalized,
            parameters,
            args=(weight,),
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": search.max_iterations},
        )
        parameters = result.x
        evaluations += result.nfev
        success, cross_talk = objective.measure(parameters)
        logger.debug(
            f"Restart {index} round {round_index}: weight={weight:.1e}, "
            f"|g0|^2={success:.6f}, cross-talk={cross_talk:.3e}"
        )
        if cross_talk < search.cross_talk_tolerance:
            break
        weight *= 10

    success, cross_talk = objective.measure(parameters)
    if success > MIN_SUCCESS and cross_talk > 0.0:
        polish = scipy.optimize.least_squares(
            objective.residuals,
            np.clip(parameters, lower, upper),
            args=(success,),
            jac="3-point",
            bounds=(lower, upper),
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=search.max_iterations,
        )
        evaluations += polish.nfev
        polished_success, polished_cross_talk = objective.measure(polish.x)
        if polished_cross_talk < cross_talk and polished_success > MIN_SUCCESS:
            parameters, success, cross_talk = polish.x, polished_success, polished_cross_talk

    return RestartResult(index, parameters, success, cross_talk, evaluations)


def _best_restart(results: Sequence[RestartResult], tolerance: float) -> RestartResult:
    feasible = [r for r in results if r.cross_talk < tolerance and r.success_probability > MIN_SUCCESS]
    if feasible:
        return min(feasible, key=lambda r: (-r.success_probability, r.index))
    return min(results, key=lambda r: (r.cross_talk, -r.success_probability, r.index))


def _history(results: Sequence[RestartResult], tolerance: float) -> List[float]:
    best, history = 0.0, []
    for result in results:
        if result.cross_talk < tolerance and result.success_probability > MIN_SUCCESS:
            best = max(best, result.success_probability)
        history.append(best)
    return history


def design(problem: DesignProblem, config: Optional[Settings] = None) -> DesignReport:
    """
    Search for a detector with zero cross-talk and maximal |g_0|^2.

    Restarts are seeded from one SeedSequence and reduced by
    (|g_0|^2, restart index), so the result does not depend on the
    number of workers.

    Args:
        problem: N~, ancilla count and accept pattern
        config: Settings supplying defaults for unset optimizer fields

    Returns:
        DesignReport; ``feasible`` is True only when the best design has
        cross-talk below tolerance and nonzero success probability
    """
    search = SearchConfig.resolve(problem, config)

    if problem.n_tilde == 0:
        document = design_to_document(
            design_from_elements(0, problem.ancilla_count, [], problem.accept_pattern, note="no elements")
        )
        run_metrics.record_design(0, True)
        return DesignReport(
            problem=problem,
            feasible=True,
            success_probability=1.0,
            max_cross_talk=0.0,
            restarts=0,
            best_restart=0,
            evaluations=0,
            history=[],
            design=document,
        )

    objective = DetectorObjective(problem)
    seeds = np.random.SeedSequence(search.seed).spawn(search.restarts)
    logger.info(
        f"Searching N~={problem.n_tilde} detector with {problem.ancilla_count} ancillas, "
        f"{search.restarts} restarts, {objective.size} parameters"
    )
    with ThreadPoolExecutor(max_workers=search.workers) as pool:
        results = list(pool.map(lambda i: _run_restart(objective, search, i, seeds[i]), range(search.restarts)))

    best = _best_restart(results, search.cross_talk_tolerance)
    detector = objective.design(best.parameters, problem.ancilla_count)
    feasible = detector.cross_talk < search.cross_talk_tolerance and detector.success_probability > MIN_SUCCESS
    run_metrics.record_design(search.restarts, feasible)

    if feasible:
        logger.info(
            f"Found N~={problem.n_tilde} detector: |g0|^2={detector.success_probability:.6f}, "
            f"cross-talk={detector.cross_talk:.3e} (restart {best.index})"
        )
    else:
        logger.warning(
            f"No feasible N~={problem.n_tilde} detector with {problem.ancilla_count} ancillas; "
            f"best cross-talk {detector.cross_talk:.3e}"
        )

    return DesignReport(
        problem=problem,
        feasible=feasible,
        success_probability=detector.success_probability,
        max_cross_talk=detector.cross_talk,
        restarts=search.restarts,
        best_restart=best.index,
        evaluations=sum(r.evaluations for r in results),
        history=_history(results, search.cross_talk_tolerance),
        design=design_to_document(detector),
    )


def default_accept_pattern(n_tilde: int, ancilla_count: int) -> Optional[List[int]]:
    """One photon in each of the ports after port 0, or in every port when N~ fills them all."""
    ports = 2 + ancilla_count
    if n_tilde > ports:
        return None
    if n_tilde == ports:
        return [1] * ports
    return [0] + [1] * n_tilde + [0] * (ports - 1 - n_tilde)


def sweep_ancillas(problem: DesignProblem, ancilla_counts: Sequence[int], config: Optional[Settings] = None) -> DesignSweep:
    """Run ``design`` for each ancilla count with the default accept pattern."""
    reports = []
    for ancilla_count in ancilla_counts:
        pattern = default_accept_pattern(problem.n_tilde, ancilla_count)
        if pattern is None:
            logger.warning(f"N~={problem.n_tilde} cannot be registered on {2 + ancilla_count} zero-one detectors")
            continue
        variant = problem.model_copy(update={"ancilla_count": ancilla_count, "accept_pattern": pattern})
        reports.append(design(variant, config))
    return DesignSweep(reports=reports)

"""Run metrics for pipelines, detector designs and reproduction rows."""

from threading import Lock
from typing import Dict
from collections import defaultdict
from datetime import datetime, timezone
import logging

logger = logging.getLogger(__name__)


class RunMetrics:
    """Thread-safe counters collected while the toolkit runs."""

    def __init__(self):
        """Initialize metrics."""
        self._lock = Lock()
        self.reset()

    def reset(self):
        """Zero every counter."""
        with self._lock:
            self.stages_executed = 0
            self.stages_by_kind: Dict[str, int] = defaultdict(int)
            self.zero_probability_aborts = 0
            self.teleportations = 0
            self.design_restarts = 0
            self.feasible_designs = 0
            self.infeasible_designs = 0
            self.rows_by_status: Dict[str, int] = defaultdict(int)
            self.start_time = datetime.now(timezone.utc)

    def record_stage(self, kind: str, success: bool):
        """
        Record a pipeline stage.

        Args:
            kind: Manipulation kind of the stage
            success: Whether the stage heralded with nonzero probability
        """
        with self._lock:
            self.stages_executed += 1
            self.stages_by_kind[kind] += 1
            if not success:
                self.zero_probability_aborts += 1

    def record_teleportation(self):
        """Record one simulated teleportation."""
        with self._lock:
            self.teleportations += 1

    def record_design(self, restarts: int, feasible: bool):
        """
        Record a finished detector-design search.

        Args:
            restarts: Number of optimizer restarts used
            feasible: Whether a design met the cross-talk tolerance
        """
        with self._lock:
            self.design_restarts += restarts
            if feasible:
                self.feasible_designs += 1
            else:
                self.infeasible_designs += 1

    def record_row(self, status: str):
        """Record a reproduction row by status."""
        with self._lock:
            self.rows_by_status[status] += 1

    def get_metrics(self) -> dict:
        """
        Get all metrics.

        Returns:
            Dictionary of metrics
        """
        with self._lock:
            return {
                "stages_executed": self.stages_executed,
                "stages_by_kind": dict(self.stages_by_kind),
                "zero_probability_aborts": self.zero_probability_aborts,
                "teleportations": self.teleportations,
                "design_restarts": self.design_restarts,
                "feasible_designs": self.feasible_designs,
                "infeasible_designs": self.infeasible_designs,
                "rows_by_status": dict(self.rows_by_status),
                "uptime_seconds": (datetime.now(timezone.utc) - self.start_time).total_seconds(),
            }

    def get_stage_success_rate(self) -> float:
        """
        Calculate the share of stages that heralded.

        Returns:
            Success rate as a percentage (0-100)
        """
        with self._lock:
            if self.stages_executed == 0:
                return 0.0
            return (self.stages_executed - self.zero_probability_aborts) / self.stages_executed * 100

    def log_summary(self):
        """Log a summary of metrics."""
        metrics = self.get_metrics()
        logger.info(
            "Metrics Summary: "
            f"Stages={metrics['stages_executed']}, "
            f"Teleportations={metrics['teleportations']}, "
            f"Zero-probability aborts={metrics['zero_probability_aborts']}, "
            f"Stage Success Rate={self.get_stage_success_rate():.2f}%, "
            f"Designs={metrics['feasible_designs']}/{metrics['feasible_designs'] + metrics['infeasible_designs']}"
        )


run_metrics = RunMetrics()

"""Tests for design module."""

import pytest
from fockport.bell import design_from_document, verify_design
from fockport.config import Settings
from fockport.design import SearchConfig, default_accept_pattern, design, sweep_ancillas
from fockport.metrics import run_metrics
from fockport.models import DesignProblem


@pytest.fixture(autouse=True)
def reset_metrics():
    """Reset metrics before and after each test."""
    run_metrics.reset()
    yield
    run_metrics.reset()


class TestSearchConfig:
    """Test optimizer setting resolution."""

    def test_defaults_from_settings(self):
        """Test that unset problem fields fall back to the settings."""
        config = Settings(design_restarts=3, seed=9)
        search = SearchConfig.resolve(DesignProblem(n_tilde=1, accept_pattern=[1, 0]), config)
        assert search.restarts == 3
        assert search.seed == 9

    def test_problem_overrides(self):
        """Test that problem fields win over the settings."""
        problem = DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=5, seed=1)
        search = SearchConfig.resolve(problem, Settings(design_restarts=3, seed=9))
        assert (search.restarts, search.seed) == (5, 1)


class TestDesign:
    """Test detector search."""

    def test_vacuum_detector(self):
        """Test that N~ = 0 needs no search."""
        report = design(DesignProblem(n_tilde=0, accept_pattern=[0, 0]))
        assert report.feasible
        assert report.success_probability == 1.0
        assert report.restarts == 0

    def test_n1_without_ancilla(self):
        """Test that the N~ = 1 search reaches the symmetric beam splitter."""
        problem = DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=4, seed=2003)
        report = design(problem)
        assert report.feasible
        assert report.success_probability >= 0.49
        assert report.max_cross_talk < 1e-8

    def test_n2_with_one_ancilla(self):
        """Test that one ancilla admits an N~ = 2 detector."""
        problem = DesignProblem(n_tilde=2, ancilla_count=1, accept_pattern=[0, 1, 1], restarts=8, seed=2003)
        report = design(problem)
        assert report.feasible
        assert report.success_probability >= 0.3

    def test_design_document_is_usable(self):
        """Test that the returned document rebuilds a verified detector."""
        report = design(DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=4, seed=2003))
        detector = design_from_document(report.design)
        assert verify_design(detector, trials=20, seed=1).max_deviation < 1e-8

    def test_history_is_monotone(self):
        """Test that the best-so-far history never decreases."""
        report = design(DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=4, seed=7))
        assert len(report.history) == 4
        assert all(a <= b for a, b in zip(report.history, report.history[1:]))

    def test_independent_of_workers(self):
        """Test that the result does not depend on the worker count."""
        base = DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=3, seed=11)
        serial = design(base.model_copy(update={"workers": 1}))
        parallel = design(base.model_copy(update={"workers": 3}))
        assert serial.best_restart == parallel.best_restart
        assert serial.success_probability == parallel.success_probability

    def test_records_metrics(self):
        """Test that a search is counted."""
        design(DesignProblem(n_tilde=1, accept_pattern=[1, 0], restarts=2, seed=3))
        metrics = run_metrics.get_metrics()
        assert metrics["design_restarts"] == 2
        assert metrics["feasible_designs"] + metrics["infeasible_designs"] == 1


class TestAncillaSweep:
    """Test ancilla sweeps."""

    @pytest.mark.parametrize(
        "n_tilde, ancilla_count, expected",
        [
            (1, 0, [0, 1]),
            (2, 1, [0, 1, 1]),
            (2, 0, [1, 1]),
            (3, 2, [0, 1, 1, 1]),
            (3, 0, None),
        ],
    )
    def test_default_accept_pattern(self, n_tilde, ancilla_count, expected):
        """Test the zero-one accept pattern for each port count."""
        assert default_accept_pattern(n_tilde, ancilla_count) == expected

    def test_sweep_skips_impossible_counts(self):
        """Test that counts with too few ports are skipped."""
        problem = DesignProblem(
            n_tilde=3, ancilla_count=2, accept_pattern=[0, 1, 1, 1], restarts=1, seed=1, max_iterations=5, penalty_rounds=1
        )
        sweep = sweep_ancillas(problem, [0, 1])
        assert [r.problem.ancilla_count for r in sweep.reports] == [1]
        assert sweep.reports[0].problem.accept_pattern == [1, 1, 1]

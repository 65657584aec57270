"""Tests for metrics module."""

import pytest
from fockport.metrics import RunMetrics


@pytest.fixture
def metrics():
    """Create fresh metrics for each test."""
    return RunMetrics()


class TestRunMetrics:
    """Test run counters."""

    def test_initial_state(self, metrics):
        """Test that every counter starts at zero."""
        data = metrics.get_metrics()
        assert data["stages_executed"] == 0
        assert data["rows_by_status"] == {}
        assert metrics.get_stage_success_rate() == 0.0

    def test_record_stage(self, metrics):
        """Test stage counts by kind and zero-probability aborts."""
        metrics.record_stage("scaling", True)
        metrics.record_stage("scaling", True)
        metrics.record_stage("number_shift", False)
        data = metrics.get_metrics()
        assert data["stages_executed"] == 3
        assert data["stages_by_kind"] == {"scaling": 2, "number_shift": 1}
        assert data["zero_probability_aborts"] == 1

    def test_stage_success_rate(self, metrics):
        """Test the heralded share of stages."""
        for success in (True, True, True, False):
            metrics.record_stage("reversal_scaling", success)
        assert metrics.get_stage_success_rate() == 75.0

    def test_record_design(self, metrics):
        """Test design counts and restarts."""
        metrics.record_design(8, True)
        metrics.record_design(4, False)
        data = metrics.get_metrics()
        assert data["design_restarts"] == 12
        assert (data["feasible_designs"], data["infeasible_designs"]) == (1, 1)

    def test_record_row(self, metrics):
        """Test reproduction rows by status."""
        metrics.record_row("pass")
        metrics.record_row("pass")
        metrics.record_row("deviation")
        assert metrics.get_metrics()["rows_by_status"] == {"pass": 2, "deviation": 1}

    def test_reset(self, metrics):
        """Test that reset zeroes the counters."""
        metrics.record_teleportation()
        metrics.reset()
        assert metrics.get_metrics()["teleportations"] == 0

    def test_log_summary(self, metrics, caplog):
        """Test the summary log line."""
        metrics.record_stage("scaling", True)
        with caplog.at_level("INFO", logger="fockport.metrics"):
            metrics.log_summary()
        assert "Stages=1" in caplog.text
        assert "Stage Success Rate=100.00%" in caplog.text

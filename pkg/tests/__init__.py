"""Tests for fockport."""

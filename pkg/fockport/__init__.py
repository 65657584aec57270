"""Teleportation-based photon-number-state manipulation toolkit."""

__version__ = "1.0.0"
__author__ = "Quantum Optics Group"
__description__ = "Simulate linear-optical manipulation of photon-number states by teleportation"

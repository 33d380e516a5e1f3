"""Simulation and error budgeting for time-frequency GKP photonic qubits."""

__version__ = "0.1.0"

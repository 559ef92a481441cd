"""Hybrid GPP estimation: process-model simulation, ML surrogates and VI baselines."""

__version__ = "0.1.0"

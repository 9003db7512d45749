"""Certified energy bounds for the shifted spiked harmonic oscillator."""

__version__ = "0.1.0"

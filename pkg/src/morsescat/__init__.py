"""Bound states and s-wave scattering for the Morse potential."""

__version__ = "0.1.0"

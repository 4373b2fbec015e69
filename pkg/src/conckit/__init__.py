"""Discretized concentration operators and numerical checks of uncertainty
principles for time-band and volume-to-volume signal concentration."""

__version__ = "0.1.0"

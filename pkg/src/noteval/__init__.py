"""Blinded human evaluation of clinical notes on the PDQI-9 rubric."""

__version__ = "0.1.0"

"""Figure rendering for Bose-Hubbard reservoir benchmark outputs."""

__version__ = "0.1.0"

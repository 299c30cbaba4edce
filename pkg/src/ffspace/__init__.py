"""ffspace: numerical laboratory for Finsleroid-Finsler spaces."""

__version__ = "0.1.0"

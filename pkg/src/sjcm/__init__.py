"""Critical quantum sensing with the squeezed Jaynes-Cummings model."""

__version__ = "0.1.0"

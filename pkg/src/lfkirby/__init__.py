"""Lefschetz fibration monodromies, Kirby diagrams on surfaces, and handle cancellation."""

__version__ = "0.1.0"

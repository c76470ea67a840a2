"""soliton-forge - numerical toolkit for Kähler gradient Ricci solitons."""

__version__ = "0.3.0"

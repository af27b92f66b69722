"""Hyperbolicity certificates for one-relator groups and the angled-complex
toolkit behind them."""

__version__ = "0.1.0"

"""Translation hyperovals in semifield planes of order 2^n, by exhaustive rank search."""

__version__ = "0.1.0"

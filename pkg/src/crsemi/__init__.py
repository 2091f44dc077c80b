"""Completely simple semigroup discrete-log ciphers and their supporting algebra."""

__version__ = "0.1.0"

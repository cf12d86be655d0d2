from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NumericalError(ArithmeticError):
    """A numerical routine failed (factorization, degenerate design, ...)."""


class FitError(NumericalError):
    """A fit did not converge or its design was degenerate.

    ``best`` holds the best-so-far estimate when one exists.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class ConfigError(ValueError):
    """Invalid run configuration. ``key`` is the dotted path of the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key

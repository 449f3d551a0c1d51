"""Exception types and the global capacity configuration."""

from __future__ import annotations

from dataclasses import dataclass


class CapacityError(ValueError):
    """A request exceeds one of the configured computation caps."""


class DivergenceError(ArithmeticError):
    """A series that must be summed does not converge for these parameters."""


class ValidityError(ValueError):
    """Parameters fall outside the region where a formula is valid."""


@dataclass
class Caps:
    enum: int = 10              # largest n for which all n! permutations are enumerated
    partition: int = 60         # largest n for explicit partition sums (p(60) = 966467)
    weights: int = 2 ** 24      # largest length of a convolved bias vector


CAPS = Caps()

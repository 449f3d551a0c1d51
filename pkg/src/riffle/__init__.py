"""Exact and asymptotic mixing rates of biased riffle shuffles."""

__version__ = "0.1.0"

from .errors import CAPS, CapacityError, DivergenceError, ValidityError  # noqa: E402
from .perm_core import Permutation  # noqa: E402
from .shuffle_measure import BiasVector  # noqa: E402

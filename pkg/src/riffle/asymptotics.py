"""Large-n approximation of ``ell(k, n) = n! P^{*k}(id)`` and the cutoff location."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DivergenceError, ValidityError

SERIES_TOL = 1e-15
MAX_TERMS = 100_000


def theta_j(theta, j) -> float:
    """``theta**j + (1 - theta)**j``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return theta ** j + (1 - theta) ** j


def _log_term(n, theta, k, j) -> float:
    return j * math.log(n) + k * math.log(theta_j(float(theta), j))


@dataclass(frozen=True)
class SeriesSum:
    value: float
    terms: int          # last index j included
    tail_bound: float   # rigorous bound on the omitted tail


def _series(n, theta, k, weight, tol) -> SeriesSum:
    """``sum_{j>=2} weight(j) n^j theta_j^k`` with a certified truncation.

    The ratio of consecutive ``n^j theta_j^k`` increases with j towards
    ``r = n * max(theta, 1-theta)^k``, so the series converges iff r < 1 and
    the tail after index J is at most ``term_J * r / (1 - r)``.
    """
    theta = float(theta)
    if n < 2:
        raise ValueError("n must be >= 2")
    big = max(theta, 1 - theta)
    log_r = math.log(n) + k * math.log(big) if big > 0 else -math.inf
    if log_r >= 0:
        raise DivergenceError(
            f"sum_j n^j theta_j^k diverges for n={n}, theta={theta}, k={k}: "
            f"n*max(theta,1-theta)^k = {math.exp(min(log_r, 700.0)):.4g} >= 1; increase k")
    r = math.exp(log_r)
    terms = []
    prev = math.inf
    rises = 0
    for j in range(2, MAX_TERMS):
        t = math.exp(_log_term(n, theta, k, j))
        rises = rises + 1 if t > prev else 0
        if rises >= 3:
            raise DivergenceError(f"series terms grew at three consecutive j (n={n}, k={k})")
        w = weight(j)
        terms.append(w * t)
        total = math.fsum(terms)
        tail = t * r / (1 - r) * w
        if t <= prev and t < tol * total and tail < tol * max(total, 1e-300):
            return SeriesSum(total, j, tail)
        if t == 0.0:
            return SeriesSum(total, j, 0.0)
        prev = t
    raise DivergenceError(f"series not converged after {MAX_TERMS} terms")


def big_M(n: int, theta, k, tol: float = SERIES_TOL) -> SeriesSum:
    """``M(k, n) = sum_{j>=2} n^j theta_j^k``."""
    return _series(n, theta, k, lambda j: 1.0, tol)


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    theta: float
    k: float
    M: float
    log_ell: float           # sum_{j>=2} n^j theta_j^k / j
    ell_approx: float
    valid: bool              # M <= sqrt(n) / (10 log n)
    terms: int
    tail_bound: float

    @property
    def linf_approx(self) -> float:
        return self.ell_approx - 1

    @property
    def validity_threshold(self) -> float:
        return validity_threshold(self.n)


def validity_threshold(n: int) -> float:
    return math.sqrt(n) / (10 * math.log(n))


def ell_approx(n: int, theta, k, tol: float = SERIES_TOL) -> AsymptoticEstimate:
    """``exp(sum_{j>=2} n^j theta_j^k / j)``, accurate to ``1 + O((1 + M)/sqrt(n))``.

    The result approximates ``ell(k, n) = n! P^{*k}(id)``, i.e. L-infinity + 1.
    """
    M = big_M(n, theta, k, tol)
    S = _series(n, theta, k, lambda j: 1.0 / j, tol)
    ell = math.exp(S.value) if S.value < 700 else math.inf
    return AsymptoticEstimate(n, float(theta), k, M.value, S.value, ell,
                              M.value <= validity_threshold(n), S.terms,
                              max(S.tail_bound, M.tail_bound))


def cutoff_k(n: int, theta, c) -> int:
    """``floor((2 log n - log 2 + c) / -log(theta^2 + (1-theta)^2))``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    theta = float(theta)
    if not 0 < theta < 1:
        raise ValidityError(f"theta must lie strictly inside (0, 1), got {theta}")
    return math.floor((2 * math.log(n) - math.log(2) + c) / -math.log(theta_j(theta, 2)))


def extreme_k(n: int, c) -> float:
    """Number of shuffles ``n log n + c n`` used with theta = 1 - 1/n."""
    return n * math.log(n) + c * n


@dataclass(frozen=True)
class RegimePrediction:
    regime: str
    c: float
    ell: float
    linf: float
    sep: float | None = None


def regime_prediction(regime: str, c: float, kappa: float | None = None) -> RegimePrediction:
    """Limiting ``ell(k, n)`` (and derived distances) in the three regimes.

    * ``"fixed"``: theta fixed, k = cutoff_k(n, theta, c).
    * ``"kappa"``: (1 - theta) log n = kappa, same k; needs c > log 2 - kappa.
    * ``"extreme"``: theta = 1 - 1/n, k = n log n + c n; needs c > 0.
    """
    if regime == "fixed":
        ell = math.exp(math.exp(-c))
        return RegimePrediction(regime, c, ell, ell - 1, 1 - math.exp(-math.exp(-c)))
    if regime == "kappa":
        if kappa is None or kappa < 0:
            raise ValidityError("kappa regime needs kappa >= 0")
        if not c > math.log(2) - kappa:
            raise ValidityError(
                f"kappa regime requires c > log 2 - kappa = {math.log(2) - kappa:.6g}, got c={c}")
        r = math.exp(0.5 * (-kappa + math.log(2) - c))
        # sum_{j>=3} r^j / j
        tail = -math.log1p(-r) - r - r * r / 2
        ell = math.exp(math.exp(-c) + tail)
        return RegimePrediction(regime, c, ell, ell - 1)
    if regime == "extreme":
        if not c > 0:
            raise ValidityError(f"extreme regime requires c > 0, got c={c}")
        ell = math.exp(-math.exp(-c)) / (1 - math.exp(-c))
        return RegimePrediction(regime, c, ell, ell - 1)
    raise ValidityError(f"unknown regime {regime!r}; expected fixed, kappa or extreme")


def egf_coefficients(xs: Sequence, n: int) -> list:
    """``m! [z^m] exp(sum_{j=1}^{n} x_j z^j / j)`` for m = 0..n.

    Computed as the truncated Taylor series of exp applied to the
    polynomial, independent of the cycle-type recurrence.
    """
    g = [Fraction(0)] + [Fraction(xs[j]) / j for j in range(1, n + 1)]
    result = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n      # g^0
    fact = 1
    for p in range(0, n + 1):
        if p:
            new = [Fraction(0)] * (n + 1)
            for i, a in enumerate(power):
                if a:
                    for j in range(1, n + 1 - i):
                        if g[j]:
                            new[i + j] += a * g[j]
            power = new
            fact *= p
        for m in range(n + 1):
            result[m] += power[m] / fact
    return [math.factorial(m) * result[m] for m in range(n + 1)]

"""The theta-shuffle measure: exact laws, convolution, and samplers.

Orientation: ``theta[0]`` weighs the packet cut from the top of the deck
(the cards with the smallest labels).  In the inverse shuffle the cards
whose digit is 0 are lifted, in order, to the top of the deck.  With this
choice the law of one shuffle is ``P(w) = Q_{iDes(w)}(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CAPS, CapacityError
from .perm_core import Permutation, enumerate_sn, ides
from .qsym import _is_exact, eval_fundamental

FLOAT_TOL = 1e-12


def to_fraction(v) -> Fraction:
    """Exact rational from ``Fraction``, ``int`` or a string like ``"3/10"``/``"0.3"``."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"exact backend needs a rational value, got {v!r}; pass a string or Fraction")


@dataclass(frozen=True)
class BiasVector:
    """Probability vector ``(theta_1, ..., theta_a)`` used to cut the deck."""

    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        if not w:
            raise ValueError("bias vector must have at least one entry")
        if any(v < 0 or v > 1 for v in w):
            raise ValueError(f"bias weights must lie in [0, 1]: {w}")
        if _is_exact(w):
            w = tuple(Fraction(v) for v in w)
            if sum(w) != 1:
                raise ValueError(f"exact bias weights must sum to 1, got {sum(w)}")
        else:
            w = tuple(float(v) for v in w)
            if abs(math.fsum(w) - 1.0) > FLOAT_TOL * max(1, len(w)):
                raise ValueError(f"bias weights must sum to 1, got {math.fsum(w)}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def two_pile(cls, theta) -> "BiasVector":
        if isinstance(theta, str):
            theta = to_fraction(theta)
        return cls((theta, 1 - theta))

    @classmethod
    def coerce(cls, theta) -> "BiasVector":
        """Accept a BiasVector, a scalar two-pile bias, or a sequence of weights."""
        if isinstance(theta, cls):
            return theta
        if isinstance(theta, (int, float, Fraction, str)):
            return cls.two_pile(theta)
        return cls(tuple(theta))

    @property
    def a(self) -> int:
        return len(self.weights)

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def power_sum(self, j: int):
        if self.exact:
            return sum(v ** j for v in self.weights)
        return math.fsum(v ** j for v in self.weights)


def convolve(theta: BiasVector, eta: BiasVector) -> BiasVector:
    """``(t1*e1, ..., t1*eb, t2*e1, ..., ta*eb)``, the bias of a theta- then eta-shuffle."""
    theta, eta = BiasVector.coerce(theta), BiasVector.coerce(eta)
    return BiasVector(tuple(t * e for t in theta.weights for e in eta.weights))


def convolve_power(theta: BiasVector, k: int, cap: int | None = None) -> BiasVector:
    theta = BiasVector.coerce(theta)
    cap = CAPS.weights if cap is None else cap
    if k < 0:
        raise ValueError("k must be >= 0")
    if theta.a ** k > cap:
        raise CapacityError(
            f"convolution power has {theta.a}**{k} weights, above the cap of {cap}; lower k")
    one = Fraction(1) if theta.exact else 1.0
    out = BiasVector((one,))
    for _ in range(k):
        out = convolve(out, theta)
    return out


def exact_prob(w: Permutation, theta: BiasVector):
    """Probability of ``w`` after one theta-shuffle of an ordered deck."""
    theta = BiasVector.coerce(theta)
    return eval_fundamental(ides(w), theta.weights)


@dataclass
class ShuffleLaw:
    n: int
    probs: dict                 # word tuple -> probability
    provenance: str = "closed-form"

    def __getitem__(self, w):
        key = w.word if isinstance(w, Permutation) else tuple(w)
        return self.probs.get(key, 0)

    def total(self):
        vals = list(self.probs.values())
        if vals and isinstance(vals[0], float):
            return math.fsum(vals)
        return sum(vals)

    def tv(self, other: "ShuffleLaw"):
        keys = set(self.probs) | set(other.probs)
        diffs = [abs(self[k] - other[k]) for k in keys]
        if any(isinstance(d, float) for d in diffs):
            return 0.5 * math.fsum(diffs)
        return Fraction(sum(diffs), 2)

    def convolve(self, other: "ShuffleLaw") -> "ShuffleLaw":
        """Law of ``v * u`` with ``v`` from self then ``u`` from other."""
        out = {}
        for vw, pv in self.probs.items():
            if not pv:
                continue
            for uw, pu in other.probs.items():
                if not pu:
                    continue
                key = tuple(vw[i - 1] for i in uw)
                out[key] = out.get(key, 0) + pv * pu
        return ShuffleLaw(self.n, out, "convolved")


def exact_law(n: int, theta: BiasVector, cap: int | None = None) -> ShuffleLaw:
    """The full law of one theta-shuffle, one fundamental evaluation per iDes class."""
    theta = BiasVector.coerce(theta)
    cache = {}
    probs = {}
    for w in enumerate_sn(n, cap):
        d = ides(w)
        if d not in cache:
            cache[d] = eval_fundamental(d, theta.weights)
        probs[w.word] = cache[d]
    return ShuffleLaw(n, probs, "closed-form")


def _weights_array(theta: BiasVector) -> np.ndarray:
    p = np.array([float(v) for v in theta.weights])
    return p / p.sum()


def forward_sample(n: int, theta: BiasVector, rng: np.random.Generator) -> Permutation:
    """One theta-shuffle of an ordered deck, following the physical description.

    Packet sizes are multinomial; cards are then dropped one at a time from
    the bottom of a packet chosen with probability proportional to its
    current size, building the new deck from the bottom up.
    """
    theta = BiasVector.coerce(theta)
    sizes = rng.multinomial(n, _weights_array(theta))
    packets, start = [], 1
    for s in sizes:
        packets.append(list(range(start, start + s)))
        start += s
    remaining = [int(s) for s in sizes]
    left = n
    deck = [0] * n
    for pos in range(n - 1, -1, -1):
        u = rng.random() * left
        i = 0
        while u >= remaining[i] or remaining[i] == 0:
            u -= remaining[i]
            i += 1
        deck[pos] = packets[i].pop()
        remaining[i] -= 1
        left -= 1
    return Permutation(tuple(deck))


def forward_sample_batch(n: int, theta: BiasVector, trials: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Vectorized :func:`forward_sample`; returns a ``(trials, n)`` array of words."""
    theta = BiasVector.coerce(theta)
    p = _weights_array(theta)
    a = len(p)
    sizes = rng.multinomial(n, p, size=trials)                  # (trials, a)
    tops = np.cumsum(sizes, axis=1)                             # label of each packet's bottom card
    remaining = sizes.copy()
    deck = np.empty((trials, n), dtype=np.int64)
    rows = np.arange(trials)
    for pos in range(n - 1, -1, -1):
        left = pos + 1
        u = rng.random(trials) * left
        cum = np.cumsum(remaining, axis=1)
        choice = (u[:, None] >= cum).sum(axis=1)
        choice = np.minimum(choice, a - 1)
        deck[:, pos] = tops[rows, choice]
        tops[rows, choice] -= 1
        remaining[rows, choice] -= 1
    return deck


def inverse_sample(n: int, theta: BiasVector, rng: np.random.Generator) -> Permutation:
    """One inverse theta-shuffle of an ordered deck.

    Each card receives an independent digit; cards are regrouped by digit,
    digit 0 on top, keeping their relative order.  The inverse of the
    returned word is distributed as a forward theta-shuffle.
    """
    theta = BiasVector.coerce(theta)
    digits = rng.choice(theta.a, size=n, p=_weights_array(theta))
    order = np.argsort(digits, kind="stable")
    return Permutation(tuple(int(i) + 1 for i in order))


def inverse_sample_batch(n: int, theta: BiasVector, trials: int,
                         rng: np.random.Generator) -> np.ndarray:
    theta = BiasVector.coerce(theta)
    digits = rng.choice(theta.a, size=(trials, n), p=_weights_array(theta))
    return np.argsort(digits, axis=1, kind="stable").astype(np.int64) + 1


def invert_words(words: np.ndarray) -> np.ndarray:
    """Row-wise inverse of a ``(trials, n)`` array of one-line words."""
    trials, n = words.shape
    inv = np.empty_like(words)
    rows = np.arange(trials)[:, None]
    inv[rows, words - 1] = np.arange(1, n + 1)[None, :]
    return inv


def compose_words(v: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise ``v * u``: position i holds ``v[u[i]]``."""
    rows = np.arange(v.shape[0])[:, None]
    return v[rows, u - 1]


@dataclass(frozen=True)
class SSTSample:
    T: int                      # stopping time; k_max + 1 when censored
    permutation: Permutation    # deck after T inverse shuffles (after k_max if censored)
    censored: bool = False


def sst_sample(n: int, theta: BiasVector, rng: np.random.Generator,
               k_max: int = 64) -> SSTSample:
    """Run inverse shuffles until the digit histories of all cards differ.

    ``T`` is the first k >= 1 at which the n length-k digit vectors are
    distinct; at that time the deck is exactly uniform.  A deck of one card
    stops at T = 1.
    """
    theta = BiasVector.coerce(theta)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    p = _weights_array(theta)
    deck = list(range(1, n + 1))
    history = {c: () for c in deck}
    for k in range(1, k_max + 1):
        digits = rng.choice(theta.a, size=n, p=p)
        for c in range(1, n + 1):
            history[c] = history[c] + (int(digits[c - 1]),)
        deck = sorted(deck, key=lambda c: history[c][-1])   # stable
        if len(set(history.values())) == n:
            return SSTSample(k, Permutation(tuple(deck)))
    return SSTSample(k_max + 1, Permutation(tuple(deck)), censored=True)


def sst_times_batch(n: int, theta: BiasVector, trials: int, rng: np.random.Generator,
                    k_max: int = 64) -> np.ndarray:
    """Stopping times for ``trials`` independent runs; censored runs report ``k_max + 1``."""
    theta = BiasVector.coerce(theta)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    p = _weights_array(theta)
    a = len(p)
    T = np.full(trials, k_max + 1, dtype=np.int64)
    if n <= 1:
        T[:] = 1
        return T
    active = np.arange(trials)
    codes = np.zeros((trials, n), dtype=np.int64)   # dense rank of each card's history
    for k in range(1, k_max + 1):
        if active.size == 0:
            break
        digits = rng.choice(a, size=(active.size, n), p=p)
        c = codes[active] * a + digits
        srt = np.sort(c, axis=1)
        distinct = np.all(srt[:, 1:] != srt[:, :-1], axis=1)
        T[active[distinct]] = k
        keep = ~distinct
        # re-rank surviving rows so codes stay below n * a
        c, srt = c[keep], srt[keep]
        new_rank = np.concatenate(
            [np.zeros((c.shape[0], 1), dtype=np.int64),
             np.cumsum(srt[:, 1:] != srt[:, :-1], axis=1)], axis=1)
        rows = np.arange(c.shape[0])[:, None]
        pos = np.argsort(np.argsort(c, axis=1, kind="stable"), axis=1, kind="stable")
        active = active[keep]
        codes[active] = new_rank[rows, pos]
    return T

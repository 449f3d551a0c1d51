"""Permutations in one-line notation.

``word[i-1]`` is the label of the card in position ``i`` of the deck, read
from the top.  Composition is function composition on positions:
``w.compose(u)`` is the word ``i -> w[u[i]]``, which is also the deck obtained
by applying the shuffle ``u`` to a deck already in order ``w``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CAPS, CapacityError
from .qsym import DescentSubset, Partition


@dataclass(frozen=True)
class Permutation:
    word: tuple

    def __post_init__(self):
        word = tuple(int(v) for v in self.word)
        if not word:
            raise ValueError("permutation of an empty deck")
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{word} is not a permutation of 1..{len(word)}")
        object.__setattr__(self, "word", word)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reversal(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Read ``"231"`` (n < 10) or ``"2,3,1"``."""
        text = text.strip()
        if "," in text or " " in text:
            return cls(tuple(int(t) for t in text.replace(",", " ").split()))
        return cls(tuple(int(ch) for ch in text))

    @property
    def n(self) -> int:
        return len(self.word)

    def __getitem__(self, i):
        return self.word[i]

    def __len__(self):
        return len(self.word)

    def __str__(self):
        sep = "" if self.n < 10 else ","
        return sep.join(map(str, self.word))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, label in enumerate(self.word, 1):
            inv[label - 1] = pos
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise ValueError("composing permutations of different sizes")
        w = self.word
        return Permutation(tuple(w[u - 1] for u in other.word))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)


@dataclass(frozen=True)
class CycleType:
    partition: Partition
    counts: tuple       # counts[i-1] = number of i-cycles, i = 1..n

    def n_i(self, i: int) -> int:
        return self.counts[i - 1] if 1 <= i <= len(self.counts) else 0


@dataclass(frozen=True)
class LyndonFactorization:
    factors: tuple

    @property
    def lengths(self) -> tuple:
        return tuple(len(f) for f in self.factors)


def _word(w) -> tuple:
    return w.word if isinstance(w, Permutation) else tuple(w)


def descent_set(w) -> DescentSubset:
    word = _word(w)
    return DescentSubset(tuple(i for i in range(1, len(word)) if word[i - 1] > word[i]),
                         len(word))


def ides(w) -> DescentSubset:
    """Descent set of the inverse: ``i`` is included when ``i+1`` sits above ``i``."""
    word = _word(w)
    pos = [0] * (len(word) + 1)
    for p, label in enumerate(word):
        pos[label] = p
    return DescentSubset(tuple(i for i in range(1, len(word)) if pos[i] > pos[i + 1]),
                         len(word))


def cycle_type(w) -> CycleType:
    word = _word(w)
    n = len(word)
    seen = [False] * (n + 1)
    counts = [0] * n
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = word[j - 1]
            length += 1
        counts[length - 1] += 1
    parts = tuple(i + 1 for i in range(n) for _ in range(counts[i]))
    return CycleType(Partition(parts), tuple(counts))


def sign(w) -> int:
    lam = cycle_type(w).partition
    return lam.sign()


def lyndon_factorization(word: Sequence) -> LyndonFactorization:
    """Chen-Fox-Lyndon factorization by Duval's linear scan."""
    s = tuple(word.word) if isinstance(word, Permutation) else tuple(word)
    if not s:
        raise ValueError("cannot factor the empty word")
    factors = []
    i, n = 0, len(s)
    while i < n:
        j, k = i + 1, i
        while j < n and s[k] <= s[j]:
            k = i if s[k] < s[j] else k + 1
            j += 1
        while i <= k:
            factors.append(s[i:i + j - k])
            i += j - k
    return LyndonFactorization(tuple(factors))


def is_lyndon(word: Sequence) -> bool:
    """Strictly smaller than every proper rotation (brute force)."""
    s = tuple(word)
    return bool(s) and all(s < s[r:] + s[:r] for r in range(1, len(s)))


def enumerate_sn(n: int, cap: int | None = None) -> Iterator[Permutation]:
    """All n! permutations in lexicographic order."""
    cap = CAPS.enum if cap is None else cap
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapacityError(f"n={n} exceeds enumeration cap {cap} ({math.factorial(n)} words)")
    for word in itertools.permutations(range(1, n + 1)):
        yield Permutation(word)

"""Compositions, partitions and evaluation of (quasi)symmetric functions.

Every evaluator takes a finite, ordered sequence of weights ``x``.  The
arithmetic follows the element type: ``Fraction``/``int`` entries give exact
results, anything else is evaluated in 64-bit floating point.  Weights are
never sorted; quasisymmetric functions depend on the order of the variables
(for n = 3, ``Q_{1}(x, y) = x*y**2`` while ``Q_{1}(y, x) = y*x**2``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CAPS, CapacityError


@dataclass(frozen=True)
class DescentSubset:
    """A subset of ``{1, ..., n-1}``, stored as a sorted tuple."""

    elements: tuple
    n: int

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        if self.n < 1:
            raise ValueError("ambient size n must be >= 1")
        for d in elems:
            if not 1 <= d <= self.n - 1:
                raise ValueError(f"descent {d} outside [1, {self.n - 1}]")
        object.__setattr__(self, "elements", elems)

    def __contains__(self, i):
        return i in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def issuperset(self, other: "DescentSubset") -> bool:
        return set(self.elements) >= set(other.elements)

    def to_composition(self) -> "Composition":
        return subset_to_composition(self.elements, self.n)


@dataclass(frozen=True)
class Composition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p < 1 for p in parts):
            raise ValueError(f"composition parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def to_subset(self) -> DescentSubset:
        return composition_to_subset(self)


@dataclass(frozen=True)
class Partition:
    """An integer partition with weakly decreasing parts."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict:
        """Map part size ``i`` to ``n_i``, the number of parts equal to ``i``."""
        counts = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def z(self) -> int:
        return z_of(self)

    def sign(self) -> int:
        """``(-1)**(n - length)``, the sign of any permutation of this cycle type."""
        return -1 if (self.n - self.length) % 2 else 1


def composition_to_subset(alpha) -> DescentSubset:
    if not isinstance(alpha, Composition):
        alpha = Composition(tuple(alpha))
    sums = tuple(itertools.accumulate(alpha.parts))[:-1]
    return DescentSubset(sums, alpha.n)


def subset_to_composition(D, n: int) -> Composition:
    if n < 1:
        raise ValueError("n must be >= 1")
    elems = sorted(set(D))
    if elems and (elems[0] < 1 or elems[-1] >= n):
        raise ValueError(f"subset {elems} is not contained in [1, {n - 1}]")
    cuts = [0] + elems + [n]
    return Composition(tuple(b - a for a, b in zip(cuts, cuts[1:])))


def compositions_of(n: int) -> Iterator[Composition]:
    """All 2**(n-1) compositions of n, via subsets of [n-1]."""
    for r in range(n):
        for D in itertools.combinations(range(1, n), r):
            yield subset_to_composition(D, n)


def refines(alpha, beta) -> bool:
    """True when consecutive blocks of ``alpha`` sum to the parts of ``beta``."""
    alpha = alpha if isinstance(alpha, Composition) else Composition(tuple(alpha))
    beta = beta if isinstance(beta, Composition) else Composition(tuple(beta))
    if alpha.n != beta.n:
        raise ValueError(f"compositions of different totals: {alpha.n} != {beta.n}")
    acc = 0
    it = iter(alpha.parts)
    for b in beta.parts:
        while acc < b:
            acc += next(it)
        if acc != b:
            return False
        acc = 0
    return True


def _is_exact(x) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def eval_monomial(alpha, x: Sequence):
    """Monomial quasisymmetric function ``M_alpha`` at ``x`` (direct sum over index chains)."""
    parts = alpha.parts if isinstance(alpha, Composition) else tuple(alpha)
    total = 0 if _is_exact(x) else 0.0
    for idx in itertools.combinations(range(len(x)), len(parts)):
        term = 1
        for i, a in zip(idx, parts):
            term = term * x[i] ** a
        total += term
    return total


def eval_fundamental(D, x: Sequence, n: int | None = None):
    """Fundamental quasisymmetric function ``Q_D`` at ``x``.

    Sums ``x_{i_1} ... x_{i_n}`` over ``i_1 <= ... <= i_n`` with ``i_j < i_{j+1}``
    forced at ``j in D``.  Dynamic programming over positions and variables,
    O(n * len(x)).
    """
    if isinstance(D, DescentSubset):
        n, D = D.n, set(D.elements)
    else:
        if n is None:
            raise ValueError("n is required when D is a plain set")
        D = set(D)
    m = len(x)
    if m == 0:
        return 0
    if _is_exact(x):
        f = list(x)
        for j in range(1, n):
            acc = 0
            g = [0] * m
            strict = j in D
            for v in range(m):
                if strict:
                    g[v] = acc * x[v]
                    acc += f[v]
                else:
                    acc += f[v]
                    g[v] = acc * x[v]
            f = g
        return sum(f)
    xv = np.asarray(x, dtype=float)
    f = xv.copy()
    for j in range(1, n):
        c = np.cumsum(f)
        if j in D:
            c = np.concatenate(([0.0], c[:-1]))
        f = c * xv
    return float(math.fsum(f))


def eval_elementary(n: int, x: Sequence):
    """``e_n(x)``: sum of products over n-subsets of the variables."""
    if n < 0:
        raise ValueError("n must be >= 0")
    zero = 0 if _is_exact(x) else 0.0
    e = [1] + [zero] * n
    for v in x:
        for r in range(n, 0, -1):
            e[r] = e[r] + v * e[r - 1]
    return e[n]


def eval_complete(n: int, x: Sequence):
    """``h_n(x)``: sum of all degree-n monomials."""
    if n < 0:
        raise ValueError("n must be >= 0")
    zero = 0 if _is_exact(x) else 0.0
    h = [1] + [zero] * n
    for v in x:
        for r in range(1, n + 1):
            h[r] = h[r] + v * h[r - 1]
    return h[n]


def eval_power(n: int, x: Sequence):
    """``p_n(x) = sum_i x_i**n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if _is_exact(x):
        return sum(v ** n for v in x)
    return math.fsum(float(v) ** n for v in x)


def _partitions_multiplicity(n: int) -> Iterator[list]:
    """Yield partitions of n as lists of (part, multiplicity), largest part first.

    The yielded list is reused between iterations; copy it to keep it.
    """
    if n == 0:
        yield []
        return
    # standard descending generation on the multiplicity representation
    ms = [[n, 1]]
    while True:
        yield ms
        # find the rightmost part > 1
        if ms[-1][0] == 1:
            if len(ms) == 1:
                return
            ones = ms.pop()[1]
        else:
            ones = 0
        part, mult = ms[-1]
        if mult == 1:
            ms.pop()
        else:
            ms[-1][1] -= 1
        rem = ones + part
        new = part - 1
        q, r = divmod(rem, new)
        ms.append([new, q])
        if r:
            ms.append([r, 1])


def partitions_of(n: int) -> Iterator[Partition]:
    """Every partition of n exactly once, in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    for ms in _partitions_multiplicity(n):
        yield Partition(tuple(p for p, m in ms for _ in range(m)))


def partition_count(n: int) -> int:
    """Number of partitions of n (Euler's pentagonal recurrence)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sgn = 1 if k % 2 else -1
            total += sgn * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sgn * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def z_of(lam) -> int:
    """Centralizer size ``prod_i i**n_i * n_i!``."""
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    z = 1
    for i, m in lam.multiplicities().items():
        z *= i ** m * math.factorial(m)
    return z


def cycle_index_partitions(n: int, xs: Sequence, signed: bool = False,
                           cap: int | None = None, skip_ones: bool = False):
    """``sum_lambda eps_lambda z_lambda^{-1} prod_j xs[j]**n_j(lambda)`` by enumeration.

    ``xs[j]`` is the weight of a j-cycle (``xs[0]`` unused).  ``eps`` is the
    permutation sign when ``signed`` else 1.  Exact when ``xs`` is exact;
    otherwise each term is formed in log space and the signed terms are
    added with ``math.fsum``.  ``skip_ones`` drops the partition ``1^n``.
    """
    cap = CAPS.partition if cap is None else cap
    if n > cap:
        raise CapacityError(f"n={n} exceeds partition cap {cap}; lower n or raise the cap")
    if _is_exact(xs[1:n + 1]):
        total = Fraction(0)
        for ms in _partitions_multiplicity(n):
            if skip_ones and ms and ms[0][0] == 1:
                continue
            num, den, length = 1, 1, 0
            for i, m in ms:
                num *= xs[i] ** m
                den *= i ** m * math.factorial(m)
                length += m
            term = Fraction(num) / den
            if signed and (n - length) % 2:
                term = -term
            total += term
        return total
    vals = [0.0] + [float(v) for v in xs[1:n + 1]]
    logx = [math.log(abs(v)) if v != 0 else -math.inf for v in vals]
    neg = [v < 0 for v in vals]
    lfact = [math.lgamma(m + 1) for m in range(n + 1)]
    terms = []
    for ms in _partitions_multiplicity(n):
        if skip_ones and ms and ms[0][0] == 1:
            continue
        logt, length, s = 0.0, 0, 1
        for i, m in ms:
            logt += m * logx[i] - m * math.log(i) - lfact[m]
            length += m
            if neg[i] and m % 2:
                s = -s
        if logt == -math.inf:
            continue
        if signed and (n - length) % 2:
            s = -s
        terms.append(s * math.exp(logt))
    return math.fsum(terms)

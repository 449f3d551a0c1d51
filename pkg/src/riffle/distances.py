"""Separation, L-infinity and total variation distances to uniform.

Three independent routes are provided:

* enumeration over all of S_n from the exact law (``*_enum``),
* the cycle-type sums over partitions of n (``*_partition``),
* Monte Carlo over the strong stationary time (``sst_tail_mc``).

``sep_partition``/``linf_partition`` accept ``method="partitions"`` (explicit
enumeration of partitions) or ``method="fast"`` (an O(n^2) power-sum
recurrence for exact inputs, positive-coefficient products for floats).
``"auto"`` picks explicit partitions for n <= 12 and the fast route above.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CAPS, CapacityError
from .perm_core import enumerate_sn, lyndon_factorization
from .qsym import _partitions_multiplicity, cycle_index_partitions, eval_elementary
from .shuffle_measure import (BiasVector, ShuffleLaw, compose_words, convolve_power,
                              exact_law, forward_sample_batch, invert_words,
                              inverse_sample_batch, sst_times_batch)

AUTO_PARTITION_MAX = 12
THREADS_ENV = "RIFFLE_THREADS"
MC_CHUNK = 50_000
MAX_DISTINCT_WEIGHTS = 10 ** 6


def n_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------- enumeration

def enum_law(n: int, theta, k: int, enum_cap: int | None = None,
             weight_cap: int | None = None) -> ShuffleLaw:
    return exact_law(n, convolve_power(BiasVector.coerce(theta), k, weight_cap), enum_cap)


def _enum_metrics(law: ShuffleLaw):
    n = law.n
    nf = math.factorial(n)
    vals = list(law.probs.values())
    exact = not isinstance(vals[0], float)
    ratios = [nf * p for p in vals]
    sep = max(1 - r for r in ratios)
    linf = max(abs(1 - r) for r in ratios)
    if exact:
        tv = sum(abs(p - Fraction(1, nf)) for p in vals) / 2
    else:
        tv = 0.5 * math.fsum(abs(p - 1.0 / nf) for p in vals)
    return sep, linf, tv


def enum_metrics(n: int, theta, k: int, enum_cap: int | None = None,
                 weight_cap: int | None = None) -> dict:
    """SEP, L-infinity and TV after k shuffles, all from one enumerated law."""
    sep, linf, tv = _enum_metrics(enum_law(n, theta, k, enum_cap, weight_cap))
    return {"sep": sep, "linf": linf, "tv": tv}


def sep_enum(n, theta, k, enum_cap=None, weight_cap=None):
    return enum_metrics(n, theta, k, enum_cap, weight_cap)["sep"]


def linf_enum(n, theta, k, enum_cap=None, weight_cap=None):
    return enum_metrics(n, theta, k, enum_cap, weight_cap)["linf"]


def tv_enum(n, theta, k, enum_cap=None, weight_cap=None):
    return enum_metrics(n, theta, k, enum_cap, weight_cap)["tv"]


# ---------------------------------------------------------------- closed forms

def _cycle_weights(theta: BiasVector, k, n: int) -> list:
    """``[None, p_1^k, ..., p_n^k]`` where ``p_j`` is the j-th power sum of theta."""
    return [None] + [theta.power_sum(j) ** k for j in range(1, n + 1)]


def _scaled_cycle_sum_exact(n: int, theta: BiasVector, k: int, signed: bool) -> Fraction:
    """``n! * sum_lambda eps z^{-1} prod p_j^{k n_j}`` in integer arithmetic.

    With common denominator q, ``p_j^k = X_j / (q^k)^j``.  Writing
    ``A_m = m! a_m Q^m`` for the series coefficients ``a_m`` of
    ``exp(sum_j x_j z^j / j)`` gives the integer recurrence
    ``A_m = sum_j X_j (m-1)!/(m-j)! A_{m-j}``.
    """
    q = math.lcm(*(w.denominator for w in theta.weights))
    nums = [int(w * q) for w in theta.weights]
    Q = q ** k
    X = [0] * (n + 1)
    for j in range(1, n + 1):
        X[j] = sum(r ** j for r in nums) ** k
        if signed and j % 2 == 0:
            X[j] = -X[j]
    A = [1]
    for m in range(1, n + 1):
        s, fall = 0, 1
        for j in range(1, m + 1):
            s += X[j] * fall * A[m - j]
            fall *= m - j
        A.append(s)
    return Fraction(A[n], Q ** n)


def _distinct_power_weights(theta: BiasVector, k: int):
    """Distinct entries of ``theta^{*k}`` with their multiplicities (floats)."""
    w = [float(v) for v in theta.weights]
    a = len(w)
    out = []
    for combo in itertools.combinations_with_replacement(range(a), k):
        counts = [0] * a
        for i in combo:
            counts[i] += 1
        mult = math.factorial(k)
        val = 1.0
        for i, c in enumerate(counts):
            mult //= math.factorial(c)
            val *= w[i] ** c
        if val > 0:
            out.append((val, mult))
    return out


def _scaled_symmetric_float(n: int, theta: BiasVector, k: int, elementary: bool) -> float:
    """``n! e_n`` or ``n! h_n`` of ``theta^{*k}``, with only positive terms.

    Uses the r!-scaled coefficients of ``prod (1 + v t)^m`` (or
    ``prod (1 - v t)^{-m}``); the scaled product obeys a binomial
    convolution, so no subtraction ever occurs.
    """
    binom = [[math.comb(r, s) for s in range(r + 1)] for r in range(n + 1)]
    total = [1.0] + [0.0] * n
    for v, m in _distinct_power_weights(theta, k):
        c = [1.0] + [0.0] * n
        for r in range(1, n + 1):
            step = (m - (r - 1)) if elementary else (m + (r - 1))
            if step <= 0:
                break
            c[r] = c[r - 1] * step * v
        new = [0.0] * (n + 1)
        for r in range(n + 1):
            new[r] = math.fsum(binom[r][s] * total[s] * c[r - s] for s in range(r + 1))
        total = new
    return total[n]


def _cycle_excess(n: int, theta, k, signed: bool, method: str, partition_cap):
    """``n! * sum_lambda eps z^{-1} prod p_j^{k n_j}`` minus 1."""
    theta = BiasVector.coerce(theta)
    cap = CAPS.partition if partition_cap is None else partition_cap
    if n > cap:
        raise CapacityError(f"n={n} exceeds partition cap {cap}; lower n or raise the cap")
    if method == "auto":
        method = "partitions" if n <= AUTO_PARTITION_MAX else "fast"
    if method == "partitions":
        xs = _cycle_weights(theta, k, n)
        if theta.exact and isinstance(k, int):
            s = cycle_index_partitions(n, xs, signed=signed, cap=partition_cap)
            return math.factorial(n) * s - 1
        # the 1^n class contributes p_1^{kn} (= 1 up to rounding); keeping it
        # apart avoids cancelling a unit against the small remainder
        rest = cycle_index_partitions(n, xs, signed=signed, cap=partition_cap, skip_ones=True)
        unit_err = math.expm1(n * k * math.log(float(theta.power_sum(1))))
        return math.fsum([unit_err, math.factorial(n) * rest])
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    if theta.exact and isinstance(k, int):
        return _scaled_cycle_sum_exact(n, theta, k, signed) - 1
    if isinstance(k, int) and math.comb(k + theta.a - 1, theta.a - 1) <= MAX_DISTINCT_WEIGHTS:
        return _scaled_symmetric_float(n, theta, k, elementary=signed) - 1
    # real k: float recurrence on positive (linf) or alternating (sep) weights
    xs = _cycle_weights(BiasVector(tuple(float(v) for v in theta.weights)), k, n)
    b = [1.0]
    for m in range(1, n + 1):
        s, fall = [], 1.0
        for j in range(1, m + 1):
            x = xs[j] if (not signed or j % 2) else -xs[j]
            s.append(x * fall * b[m - j])
            fall *= m - j
        b.append(math.fsum(s))
    return b[n] - 1


def sep_partition(n: int, theta, k, method: str = "auto", partition_cap: int | None = None):
    """Exact separation distance ``1 - n! P^{*k}(rev)`` via cycle types."""
    return 0 - _cycle_excess(n, theta, k, True, method, partition_cap)


def linf_partition(n: int, theta, k, method: str = "auto", partition_cap: int | None = None):
    """Exact L-infinity distance ``n! P^{*k}(id) - 1`` via cycle types."""
    return _cycle_excess(n, theta, k, False, method, partition_cap)


def ell_exact(n: int, theta, k, method: str = "auto", partition_cap: int | None = None):
    """``sum_w prod_j theta_j^{k n_j(w)} = n! P^{*k}(id) = linf + 1``."""
    return _cycle_excess(n, theta, k, False, method, partition_cap) + 1


# ---------------------------------------------------------------- birthday

def birthday_bound(n: int, theta, k):
    """Union bound ``C(n,2) * (sum_i theta_i^2)^k`` on separation."""
    theta = BiasVector.coerce(theta)
    return math.comb(n, 2) * theta.power_sum(2) ** k


def birthday_exact(n: int, eta: Sequence):
    """Chance that two of n balls share a box, ``1 - n! e_n(eta)``."""
    return 1 - math.factorial(n) * eval_elementary(n, list(eta))


def birthday_partition(n: int, eta: Sequence):
    """Same probability from the signed power-sum expansion over partitions of n."""
    eta = list(eta)
    exact = all(isinstance(v, (int, Fraction)) for v in eta)
    xs = [None] + [sum(v ** j for v in eta) for j in range(1, n + 1)]
    if not exact:
        xs = [None] + [float(v) for v in xs[1:]]
    return 1 - math.factorial(n) * cycle_index_partitions(n, xs, signed=True, cap=max(n, 1))


def birthday_inclusion_exclusion(n: int, eta: Sequence):
    """Brute-force inclusion-exclusion over sets of colliding pairs.

    Works with any ring elements (sympy symbols included).  The intersection
    of the events {balls i and j share a box} over an edge set S has
    probability ``prod_C p_{|C|}(eta)`` over connected components C of S.
    """
    pairs = list(itertools.combinations(range(n), 2))
    if len(pairs) > 15:
        raise CapacityError(f"inclusion-exclusion over {len(pairs)} pairs is too large")
    eta = list(eta)
    power = {j: sum(v ** j for v in eta) for j in range(1, n + 1)}
    total = 0
    for r in range(1, len(pairs) + 1):
        for S in itertools.combinations(pairs, r):
            parent = list(range(n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for i, j in S:
                parent[find(i)] = find(j)
            sizes = {}
            for v in range(n):
                root = find(v)
                sizes[root] = sizes.get(root, 0) + 1
            term = 1
            for s in sizes.values():
                if s > 1:
                    term = term * power[s]
            total = total + (term if r % 2 else -term)
    return total


# ---------------------------------------------------------------- spectrum

@dataclass(frozen=True)
class SpectrumEntry:
    counts: tuple          # counts[i-1] = a_i, with sum_i i*a_i = n
    eigenvalue: object
    multiplicity: int


def spectrum(n: int, theta, partition_cap: int | None = None) -> list:
    """Eigenvalues ``prod_i p_i(theta)^{a_i}`` with multiplicity ``n!/prod i^{a_i} a_i!``."""
    theta = BiasVector.coerce(theta)
    cap = CAPS.partition if partition_cap is None else partition_cap
    if n > cap:
        raise CapacityError(f"n={n} exceeds partition cap {cap}")
    ps = [None] + [theta.power_sum(i) for i in range(1, n + 1)]
    nf = math.factorial(n)
    out = []
    for ms in _partitions_multiplicity(n):
        counts = [0] * n
        ev, z = 1, 1
        for i, m in ms:
            counts[i - 1] = m
            ev = ev * ps[i] ** m
            z *= i ** m * math.factorial(m)
        out.append(SpectrumEntry(tuple(counts), ev, nf // z))
    return out


def beta_of_word(word, theta):
    """Eigenvalue attached to a word through its Lyndon factor lengths."""
    theta = BiasVector.coerce(theta)
    val = 1
    for length in lyndon_factorization(word).lengths:
        val = val * theta.power_sum(length)
    return val


def transition_matrix(n: int, theta, enum_cap: int = 5):
    """``K[x, y] = P(x^{-1} y)`` over S_n in lexicographic order (small n only)."""
    law = exact_law(n, theta, enum_cap)
    perms = list(enumerate_sn(n, enum_cap))
    index = {p.word: i for i, p in enumerate(perms)}
    size = len(perms)
    K = [[0] * size for _ in range(size)]
    for x in perms:
        xi = x.inverse()
        for y in perms:
            K[index[x.word]][index[y.word]] = law[xi.compose(y)]
    return K, perms


# ---------------------------------------------------------------- Monte Carlo

@dataclass
class TailEstimate:
    n: int
    theta: tuple
    trials: int
    seed: int
    k: list
    tail: list            # empirical P{T > k}
    stderr: list
    halfwidth: list       # 95% normal-approximation half-width
    censored: int


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sst_times(n: int, theta, trials: int, seed: int, k_max: int = 64,
              threads: int | None = None) -> np.ndarray:
    """Stopping times from fixed-size chunks, each with its own derived stream.

    The chunk layout does not depend on the thread count, so results are
    reproducible from the seed alone.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    theta = BiasVector.coerce(theta)
    sizes = _chunks(trials)

    def run(i):
        return sst_times_batch(n, theta, sizes[i], _chunk_rng(seed, i), k_max)

    threads = n_threads() if threads is None else threads
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    return np.concatenate(parts)


def sst_tail_mc(n: int, theta, k_max: int = 64, trials: int = 100_000, seed: int = 0,
                threads: int | None = None) -> TailEstimate:
    """Empirical ``P{T > k}`` for k = 0..k_max, which estimates SEP(k)."""
    theta = BiasVector.coerce(theta)
    T = sst_times(n, theta, trials, seed, k_max, threads)
    counts = np.bincount(T, minlength=k_max + 2)
    exceed = trials - np.cumsum(counts)           # exceed[k] = #{T > k}
    ks = list(range(0, k_max + 1))
    tail = [float(exceed[k]) / trials for k in ks]
    se = [math.sqrt(p * (1 - p) / trials) for p in tail]
    return TailEstimate(n, tuple(float(v) for v in theta.weights), trials, seed, ks, tail, se,
                        [1.959963984540054 * s for s in se], int(counts[k_max + 1]))


def _chunks(trials: int) -> list:
    sizes = [MC_CHUNK] * (trials // MC_CHUNK)
    if trials % MC_CHUNK:
        sizes.append(trials % MC_CHUNK)
    return sizes


def sample_words(n: int, theta, k: int, trials: int, seed: int, sampler: str = "forward",
                 threads: int | None = None) -> np.ndarray:
    """Decks after k shuffles for ``trials`` runs, as a ``(trials, n)`` array.

    ``sampler="inverse"`` draws inverse shuffles and inverts each one before
    composing, so both samplers target the same law.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if sampler not in ("forward", "inverse"):
        raise ValueError(f"unknown sampler {sampler!r}")
    theta = BiasVector.coerce(theta)
    sizes = _chunks(trials)

    def run(i):
        rng = _chunk_rng(seed, i)
        deck = np.tile(np.arange(1, n + 1, dtype=np.int64), (sizes[i], 1))
        for _ in range(k):
            if sampler == "forward":
                step = forward_sample_batch(n, theta, sizes[i], rng)
            else:
                step = invert_words(inverse_sample_batch(n, theta, sizes[i], rng))
            deck = compose_words(deck, step)
        return deck

    threads = n_threads() if threads is None else threads
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    return np.concatenate(parts)


def empirical_law(n: int, theta, k: int, trials: int, seed: int, sampler: str = "forward",
                  threads: int | None = None) -> tuple:
    """Counts of each observed deck; returns ``(counts dict, ShuffleLaw of frequencies)``."""
    words = sample_words(n, theta, k, trials, seed, sampler, threads)
    uniq, cnt = np.unique(words, axis=0, return_counts=True)
    counts = {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, cnt)}
    law = ShuffleLaw(n, {w: c / trials for w, c in counts.items()}, "empirical")
    return counts, law

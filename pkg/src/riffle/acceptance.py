"""Acceptance checks, one function per criterion.

Each check returns a :class:`CriterionResult`; ``run_all`` prints one
PASS/FAIL line per criterion.  Tolerances and time limits are fixed here.
"""

from __future__ import annotations

import itertools
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .asymptotics import cutoff_k, ell_approx, regime_prediction, validity_threshold
from .distances import (birthday_bound, birthday_exact, birthday_inclusion_exclusion,
                        birthday_partition, empirical_law, enum_metrics, ell_exact,
                        linf_partition, sep_partition, spectrum, sst_tail_mc,
                        transition_matrix)
from .perm_core import Permutation, enumerate_sn, ides
from .qsym import eval_complete
from .shuffle_measure import BiasVector, exact_law

SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    table: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"


def _timed(number, title, limit):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail, table = fn()
            dt = time.perf_counter() - t0
            if limit is not None and dt > limit:
                ok = False
                detail += f"; exceeded time limit {limit}s"
            return CriterionResult(number, title, ok, detail, dt, table)
        run.number = number
        return run
    return wrap


THETAS_EXACT = (Fraction(1, 2), Fraction(3, 10), Fraction(7, 10))


@_timed(1, "closed forms equal enumeration (exact)", 60)
def criterion_1():
    rows, bad = [], []
    for n in range(2, 8):
        for t in THETAS_EXACT:
            theta = BiasVector.two_pile(t)
            for k in (1, 2, 3):
                e = enum_metrics(n, theta, k)
                sp = sep_partition(n, theta, k, method="partitions")
                lp = linf_partition(n, theta, k, method="partitions")
                rows.append({"n": n, "theta": t, "k": k, "sep": sp, "linf": lp, "tv": e["tv"]})
                if sp != e["sep"] or lp != e["linf"]:
                    bad.append((n, t, k))
    return not bad, f"{len(rows)} cases, mismatches={bad}", rows


def brute_force_law(n: int, theta: Fraction) -> dict:
    """Law of one two-pile shuffle by exhausting cut sizes and drop sequences."""
    law = {}
    for c in range(n + 1):
        p_cut = math.comb(n, c) * theta ** c * (1 - theta) ** (n - c)
        # drop sequence read bottom-up: 'L' takes the bottom of the top packet
        for seq in set(itertools.permutations("L" * c + "R" * (n - c))):
            left, right = list(range(1, c + 1)), list(range(c + 1, n + 1))
            p, deck = p_cut, []
            for s in seq:
                A, B = len(left), len(right)
                if s == "L":
                    p *= Fraction(A, A + B)
                    deck.append(left.pop())
                else:
                    p *= Fraction(B, A + B)
                    deck.append(right.pop())
            word = tuple(reversed(deck))
            law[word] = law.get(word, 0) + p
    return law


@_timed(2, "fundamental-function law equals brute force at n=3", 1)
def criterion_2():
    ok, details = True, []
    for t in (Fraction(1, 2), Fraction(3, 10)):
        law = exact_law(3, BiasVector.two_pile(t))
        brute = brute_force_law(3, t)
        for w in enumerate_sn(3):
            if law[w] != brute.get(w.word, 0):
                ok = False
                details.append((t, w.word))
    golden = [Fraction(1, 2)] + [Fraction(1, 8)] * 4 + [Fraction(0)]
    half = exact_law(3, BiasVector.two_pile(Fraction(1, 2)))
    got = [half[w] for w in enumerate_sn(3)]
    if got != golden:
        ok = False
        details.append(("golden", got))
    return ok, f"mismatches={details}", []


@_timed(3, "Monte Carlo laws within TV 0.005 (n=5, theta=0.3)", 30)
def criterion_3():
    exact = exact_law(5, BiasVector.two_pile(0.3))
    out = {}
    for sampler in ("forward", "inverse"):
        _, emp = empirical_law(5, 0.3, 1, 10 ** 6, SEED, sampler)
        out[sampler] = emp.tv(exact)
    ok = all(v <= 0.005 for v in out.values())
    return ok, " ".join(f"tv_{s}={v:.5f}" for s, v in out.items()), []


@_timed(4, "SST tail matches separation within 0.01 (n=6, theta=0.4)", 60)
def criterion_4():
    est = sst_tail_mc(6, 0.4, 64, 10 ** 6, SEED)
    gaps = [abs(est.tail[k] - float(sep_partition(6, Fraction(2, 5), k))) for k in range(13)]
    return max(gaps) <= 0.01, f"max_gap={max(gaps):.5f} censored={est.censored}", []


@_timed(5, "spectrum multiplicities and trace", 30)
def criterion_5():
    bad = []
    for n in range(1, 41):
        if sum(e.multiplicity for e in spectrum(n, 0.5)) != math.factorial(n):
            bad.append(("mult", n))
    for t in (Fraction(1, 2), Fraction(3, 10)):
        for n in range(1, 9):
            tr = sum(e.eigenvalue * e.multiplicity for e in spectrum(n, t))
            if tr != math.factorial(n) * eval_complete(n, [t, 1 - t]):
                bad.append(("trace", n, t))
        for n in range(1, 6):
            K, _ = transition_matrix(n, BiasVector.two_pile(t))
            mat_trace = sum(K[i][i] for i in range(len(K)))
            tr = sum(e.eigenvalue * e.multiplicity for e in spectrum(n, t))
            if mat_trace != tr:
                bad.append(("matrix", n, t))
    return not bad, f"failures={bad}", []


@_timed(6, "birthday identity and bound", None)
def criterion_6():
    import sympy
    bad = []
    ps = sympy.symbols("p1:5")
    ie = sympy.expand(birthday_inclusion_exclusion(3, ps))
    target = sympy.expand(3 * sum(p ** 2 for p in ps) - 2 * sum(p ** 3 for p in ps))
    if sympy.simplify(ie - target) != 0:
        bad.append("symbolic")
    for eta in ([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)],
                [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)]):
        closed = 3 * sum(p ** 2 for p in eta) - 2 * sum(p ** 3 for p in eta)
        if not (birthday_exact(3, eta) == birthday_partition(3, eta)
                == birthday_inclusion_exclusion(3, eta) == closed):
            bad.append(("rational", tuple(eta)))
    rows = 0
    for n in range(2, 8):
        for t in THETAS_EXACT:
            for k in (1, 2, 3):
                rows += 1
                if sep_partition(n, t, k, method="partitions") > birthday_bound(n, t, k):
                    bad.append((n, t, k))
    for t in (Fraction(1, 2), Fraction(7, 20)):
        for k in range(0, 31):
            rows += 1
            if sep_partition(52, t, k) > birthday_bound(52, t, k):
                bad.append((52, t, k))
    return not bad, f"bound rows={rows} failures={bad}", []


@_timed(7, "large-n approximation within 10(1+M)/sqrt(n), validity flag set", 120)
def criterion_7():
    table, ok = [], True
    for n in (40, 52, 60):
        for t in (Fraction(1, 2), Fraction(7, 20)):
            for c in (1, 2, 3):
                k = cutoff_k(n, t, c)
                est = ell_approx(n, float(t), k)
                ell = ell_exact(n, t, k)
                err = abs(float(ell) / est.ell_approx - 1)
                bound = 10 * (1 + est.M) / math.sqrt(n)
                row = {"n": n, "theta": float(t), "c": c, "k": k, "M": est.M,
                       "threshold": validity_threshold(n), "valid": est.valid,
                       "rel_error": err, "bound": bound, "within_bound": err <= bound}
                table.append(row)
                ok &= est.valid and err <= bound
    invalid = sum(not r["valid"] for r in table)
    outside = sum(not r["within_bound"] for r in table)
    return ok, f"cases={len(table)} validity_false={invalid} outside_bound={outside}", table


@_timed(8, "cutoff shape at n=52, theta=1/2", None)
def criterion_8():
    table = []
    for c in range(-4, 5):
        k = cutoff_k(52, 0.5, c)
        sep = float(sep_partition(52, Fraction(1, 2), k))
        lim = regime_prediction("fixed", c).sep
        table.append({"c": c, "k": k, "sep": sep, "limit": lim, "gap": abs(sep - lim)})
    seps = [r["sep"] for r in table]
    mono = all(a > b for a, b in zip(seps, seps[1:]))
    worst = max(r["gap"] for r in table if r["c"] >= 0)
    ok = mono and seps[0] > 0.95 and seps[-1] < 0.15 and worst <= 0.12
    gaps = " ".join(f"c={r['c']}:k={r['k']},sep={r['sep']:.4f},gap={r['gap']:.4f}" for r in table)
    return ok, (f"monotone={mono} sep(-4)={seps[0]:.4f} sep(4)={seps[-1]:.4f} "
                f"max_gap(c>=0)={worst:.4f} | {gaps}"), table


@_timed(9, "refinement monotonicity (n<=6, theta=3/10)", 30)
def criterion_9():
    theta = BiasVector.two_pile(Fraction(3, 10))
    bad, pairs = [], 0
    for n in range(1, 7):
        law = exact_law(n, theta)
        perms = [(set(ides(w).elements), law[w]) for w in enumerate_sn(n)]
        for dw, pw in perms:
            for du, pu in perms:
                if dw > du:
                    pairs += 1
                    if not pw < pu:
                        bad.append((n, pw, pu))
    zero_ties = sum(pw == pu == 0 for _, pw, pu in bad)
    weak = all(pw <= pu for _, pw, pu in bad)
    return not bad, (f"strict pairs={pairs} violations={len(bad)} "
                     f"(zero-probability ties={zero_ties}, weak inequality holds={weak})"), []


@_timed(10, "simulate output is byte-identical under a fixed seed", None)
def criterion_10():
    from .cli import main
    with tempfile.TemporaryDirectory() as d:
        paths = [os.path.join(d, f"run{i}.csv") for i in range(2)]
        for p in paths:
            code = main(["simulate", "--n", "5", "--theta", "0.3", "--backend", "float",
                         "--trials", "1000000", "--seed", str(SEED), "--out", p])
            if code != 0:
                return False, f"exit code {code}", []
        a, b = (open(p, "rb").read() for p in paths)
    return a == b, f"bytes={len(a)} identical={a == b}", []


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(only=None, echo=True) -> list:
    results = []
    for fn in CRITERIA:
        if only and fn.number not in only:
            continue
        res = fn()
        results.append(res)
        if echo:
            print(res.line(), flush=True)
    return results

"""Command-line front end.

    riffle distances --n 52 --theta 1/2 --k-range 1:30
    riffle simulate  --n 5 --theta 0.3 --trials 1000000 --seed 1 --out law.csv
    riffle sst       --n 6 --theta 0.4 --trials 1000000 --seed 1
    riffle cutoff    --n 52 --theta 1/2 --c-range -4:4
    riffle spectrum  --n 3 --theta 1/2
    riffle asym      --n 52 --theta 1/2 --k 15
    riffle validate

Exit codes: 0 success, 1 failed validation, 2 usage error, 3 capacity,
4 divergence or validity.  Worker threads are taken from ``RIFFLE_THREADS``
(default: all cores); results never depend on the thread count.
"""

from __future__ import annotations

import argparse
import math
import shlex
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .asymptotics import (cutoff_k, ell_approx, regime_prediction, validity_threshold)
from .distances import (ell_exact, empirical_law, linf_partition, sep_partition,
                        spectrum, sst_tail_mc)
from .errors import CAPS, CapacityError, DivergenceError, ValidityError
from .report import DistanceReport, build_distance_report, render_table, report_table
from .shuffle_measure import BiasVector, exact_law

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY, EXIT_DIVERGENCE = 0, 1, 2, 3, 4
STOCHASTIC = {"simulate", "sst"}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    theta: str = "1/2"
    k: list = field(default_factory=list)
    c: list = field(default_factory=list)
    trials: int | None = None
    seed: int | None = None
    backend: str = "exact"
    k_max: int = 64
    sampler: str = "forward"
    partition_cap: int = CAPS.partition
    enum_cap: int = CAPS.enum
    fmt: str = "csv"
    out: str | None = None

    def validate(self):
        if self.command in STOCHASTIC and self.seed is None:
            raise UsageError(f"{self.command} needs --seed")
        if self.command in STOCHASTIC and (self.trials is None or self.trials < 1):
            raise UsageError("--trials must be >= 1")
        if self.command != "validate" and (self.n is None or self.n < 1):
            raise UsageError("--n must be >= 1")
        if self.command in ("distances", "asym") and not self.k:
            raise UsageError("give --k or --k-range")
        if self.command == "cutoff" and not self.c:
            raise UsageError("give --c-range")
        if self.backend not in ("exact", "float"):
            raise UsageError("--backend is exact or float")

    def bias(self) -> BiasVector:
        return BiasVector.two_pile(parse_theta(self.theta, self.backend))

    def command_line(self) -> str:
        args = ["riffle", self.command]
        if self.n is not None:
            args += ["--n", str(self.n)]
        args += ["--theta", self.theta, "--backend", self.backend, "--format", self.fmt]
        if self.k:
            args += ["--k", ",".join(map(str, self.k))]
        if self.c:
            args += ["--c-range", ",".join(map(repr, self.c))]
        if self.trials is not None:
            args += ["--trials", str(self.trials)]
        if self.seed is not None:
            args += ["--seed", str(self.seed)]
        if self.command == "sst":
            args += ["--k-max", str(self.k_max)]
        if self.command == "simulate":
            args += ["--sampler", self.sampler]
        args += ["--partition-cap", str(self.partition_cap), "--enum-cap", str(self.enum_cap)]
        return shlex.join(args)


def parse_theta(text: str, backend: str):
    """Read theta: ``p/q`` and, on the exact backend, decimals become exact rationals.

    The float backend rounds the value once to the nearest double.
    """
    text = text.strip()
    try:
        if backend == "exact" or "/" in text:
            value = Fraction(text)
            if backend == "float":
                value = float(value)
        else:
            value = float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read theta {text!r}: {exc}") from None
    if not 0 <= value <= 1:
        raise UsageError(f"theta must lie in [0, 1], got {text}")
    return value


def parse_range(text: str, kind=int) -> list:
    """``"1:30"`` (inclusive), ``"-4:4:0.5"`` or ``"1,2,5"``."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [kind(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else kind(1)
            if step <= 0:
                raise ValueError("step must be positive")
            out, i = [], 0
            while start + i * step <= stop + (1e-12 if kind is float else 0):
                out.append(start + i * step)
                i += 1
        else:
            out = [kind(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if not out:
        raise UsageError(f"range {text!r} is empty")
    return out


def _meta(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d.pop("out")
    return {"command": cfg.command_line(), "config": d}


# ---------------------------------------------------------------- commands

def cmd_distances(cfg: RunConfig) -> str:
    theta = cfg.bias()
    rep = build_distance_report(cfg.n, cfg.theta, theta, cfg.k,
                                partition_cap=cfg.partition_cap, enum_cap=cfg.enum_cap)
    return report_table(rep, _meta(cfg), cfg.fmt)


def cmd_simulate(cfg: RunConfig) -> str:
    theta = cfg.bias()
    k = cfg.k[0] if cfg.k else 1
    counts, law = empirical_law(cfg.n, theta, k, cfg.trials, cfg.seed, cfg.sampler)
    exact = None
    if cfg.n <= cfg.enum_cap:
        from .shuffle_measure import convolve_power
        exact = exact_law(cfg.n, convolve_power(theta, k), cfg.enum_cap)
    keys = sorted(set(counts) | (set(w for w, p in exact.probs.items() if p) if exact else set()))
    rows = []
    for w in keys:
        c = counts.get(w, 0)
        p = c / cfg.trials
        rows.append({"permutation": ",".join(map(str, w)), "count": c, "empirical": p,
                     "stderr": math.sqrt(p * (1 - p) / cfg.trials),
                     "exact": exact[w] if exact else None})
    meta = _meta(cfg)
    meta["shuffles"] = k
    if exact is not None:
        meta["tv_empirical_vs_exact"] = repr(float(law.tv(exact)))
    return render_table(["permutation", "count", "empirical", "stderr", "exact"], rows,
                        meta, cfg.fmt)


def cmd_sst(cfg: RunConfig) -> str:
    theta = cfg.bias()
    est = sst_tail_mc(cfg.n, theta, cfg.k_max, cfg.trials, cfg.seed)
    rep = DistanceReport(cfg.n, cfg.theta)
    for k, p, se in zip(est.k, est.tail, est.stderr):
        rep.add(k, "sep_empirical", p, se)
        exact = None
        if cfg.n <= cfg.partition_cap:
            exact = sep_partition(cfg.n, theta, k, partition_cap=cfg.partition_cap)
            rep.add(k, "sep_partition", exact)
            rep.add(k, "abs_gap", abs(p - float(exact)))
    meta = _meta(cfg)
    meta["censored"] = est.censored
    return report_table(rep, meta, cfg.fmt)


def cmd_cutoff(cfg: RunConfig) -> str:
    theta = cfg.bias()
    t = float(theta[0])
    rows = []
    for c in cfg.c:
        k = cutoff_k(cfg.n, t, c)
        if k < 0:
            raise ValidityError(f"c={c} gives a negative number of shuffles")
        lim = regime_prediction("fixed", c)
        sep = sep_partition(cfg.n, theta, k, partition_cap=cfg.partition_cap)
        linf = linf_partition(cfg.n, theta, k, partition_cap=cfg.partition_cap)
        rows.append({"c": c, "k": k, "sep_exact": sep, "sep_limit": lim.sep,
                     "sep_gap": abs(float(sep) - lim.sep), "linf_exact": linf,
                     "linf_limit": lim.linf, "linf_gap": abs(float(linf) - lim.linf)})
    cols = ["c", "k", "sep_exact", "sep_limit", "sep_gap", "linf_exact", "linf_limit", "linf_gap"]
    return render_table(cols, rows, _meta(cfg), cfg.fmt)


def cmd_spectrum(cfg: RunConfig) -> str:
    theta = cfg.bias()
    entries = spectrum(cfg.n, theta, cfg.partition_cap)
    rows = []
    for e in entries:
        parts = [str(i + 1) for i, a in enumerate(e.counts) for _ in range(a)]
        rows.append({"cycle_type": " ".join(reversed(parts)), "eigenvalue": e.eigenvalue,
                     "multiplicity": e.multiplicity})
    meta = _meta(cfg)
    meta["multiplicity_checksum"] = sum(e.multiplicity for e in entries)
    meta["n_factorial"] = math.factorial(cfg.n)
    meta["trace"] = repr(float(sum(e.eigenvalue * e.multiplicity for e in entries)))
    return render_table(["cycle_type", "eigenvalue", "multiplicity"], rows, meta, cfg.fmt)


def cmd_asym(cfg: RunConfig) -> str:
    theta = cfg.bias()
    t = float(theta[0])
    rows = []
    for k in cfg.k:
        est = ell_approx(cfg.n, t, k)
        row = {"k": k, "M": est.M, "ell_approx": est.ell_approx, "valid": est.valid,
               "threshold": validity_threshold(cfg.n), "terms": est.terms,
               "error_bound": 10 * (1 + est.M) / math.sqrt(cfg.n)}
        if cfg.n <= cfg.partition_cap:
            ell = ell_exact(cfg.n, theta, k, partition_cap=cfg.partition_cap)
            row["ell_exact"] = ell
            row["rel_error"] = abs(float(ell) / est.ell_approx - 1)
        rows.append(row)
    cols = ["k", "M", "threshold", "valid", "terms", "ell_approx", "ell_exact", "rel_error",
            "error_bound"]
    return render_table(cols, rows, _meta(cfg), cfg.fmt)


COMMANDS = {"distances": cmd_distances, "simulate": cmd_simulate, "sst": cmd_sst,
            "cutoff": cmd_cutoff, "spectrum": cmd_spectrum, "asym": cmd_asym}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="riffle", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"riffle {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["validate"]:
        s = sub.add_parser(name)
        if name == "validate":
            s.add_argument("--only", help="comma-separated criterion numbers")
            continue
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--theta", default="1/2")
        s.add_argument("--k", help="number of shuffles, or a comma list")
        s.add_argument("--k-range", help="inclusive range a:b[:step]")
        s.add_argument("--c-range", help="window offsets a:b[:step] or a comma list")
        s.add_argument("--trials", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--k-max", type=int, default=64)
        s.add_argument("--sampler", choices=["forward", "inverse"], default="forward")
        s.add_argument("--backend", choices=["exact", "float"], default="exact")
        s.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
        s.add_argument("--out")
        s.add_argument("--partition-cap", type=int, default=CAPS.partition)
        s.add_argument("--enum-cap", type=int, default=CAPS.enum)
    return p


def config_from_args(ns) -> RunConfig:
    ks = []
    if ns.k:
        ks += parse_range(ns.k)
    if ns.k_range:
        ks += parse_range(ns.k_range)
    if any(k < 0 for k in ks):
        raise UsageError("k must be >= 0")
    cs = parse_range(ns.c_range, float) if ns.c_range else []
    return RunConfig(command=ns.command, n=ns.n, theta=ns.theta, k=ks, c=cs, trials=ns.trials,
                     seed=ns.seed, backend=ns.backend, k_max=ns.k_max, sampler=ns.sampler,
                     partition_cap=ns.partition_cap, enum_cap=ns.enum_cap, fmt=ns.fmt,
                     out=ns.out)


def run(cfg: RunConfig) -> str:
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "validate":
        from .acceptance import run_all
        only = [int(x) for x in ns.only.split(",")] if ns.only else None
        results = run_all(only=only)
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except UsageError as exc:
        print(f"riffle: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"riffle: capacity: {exc} (lower n or k, or raise --partition-cap/--enum-cap)",
              file=sys.stderr)
        return EXIT_CAPACITY
    except (DivergenceError, ValidityError) as exc:
        print(f"riffle: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

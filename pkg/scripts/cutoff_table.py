"""Exact separation at the cutoff window next to its large-n limit, for several biases.

    python scripts/cutoff_table.py --n 52 --thetas 1/2 7/20 1/5
"""

import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from _config import parse_config

from riffle.asymptotics import cutoff_k, regime_prediction
from riffle.distances import sep_partition
from riffle.report import render_table


@dataclass(frozen=True)
class CutoffConfig:
    """Separation at k = cutoff_k(n, theta, c) against 1 - exp(-e^{-c})."""
    n: int = 52
    thetas: tuple = ("1/2", "7/20", "1/5")
    c_min: int = -4
    c_max: int = 4


def main(argv=None):
    cfg = parse_config(CutoffConfig, argv)
    rows = []
    for text in cfg.thetas:
        theta = Fraction(text)
        for c in range(cfg.c_min, cfg.c_max + 1):
            k = cutoff_k(cfg.n, theta, c)
            sep = float(sep_partition(cfg.n, theta, k))
            lim = regime_prediction("fixed", c).sep
            rows.append({"theta": text, "c": c, "k": k, "sep_exact": sep, "sep_limit": lim,
                         "gap": abs(sep - lim)})
    cols = ["theta", "c", "k", "sep_exact", "sep_limit", "gap"]
    sys.stdout.write(render_table(cols, rows, {"config": asdict(cfg)}, "csv"))


if __name__ == "__main__":
    main()

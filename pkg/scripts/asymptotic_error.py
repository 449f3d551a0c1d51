"""Relative error of the large-n approximation of ell(k, n) around the cutoff.

    python scripts/asymptotic_error.py --ns 40 52 60 --c-values 1 2 3 4 5 6
"""

import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from _config import parse_config

from riffle.asymptotics import cutoff_k, ell_approx, validity_threshold
from riffle.distances import ell_exact
from riffle.errors import DivergenceError
from riffle.report import render_table


@dataclass(frozen=True)
class AsymConfig:
    """Compare exp(sum_j n^j theta_j^k / j) with the exact ell at k = cutoff_k(n, theta, c)."""
    ns: tuple = (40, 52, 60)
    thetas: tuple = ("1/2", "7/20")
    c_values: tuple = (1, 2, 3, 4, 5, 6)


def main(argv=None):
    cfg = parse_config(AsymConfig, argv)
    rows = []
    for n in cfg.ns:
        for text in cfg.thetas:
            theta = Fraction(text)
            for c in cfg.c_values:
                k = cutoff_k(n, theta, c)
                try:
                    est = ell_approx(n, float(theta), k)
                except DivergenceError:
                    continue
                err = abs(float(ell_exact(n, theta, k)) / est.ell_approx - 1)
                rows.append({"n": n, "theta": text, "c": c, "k": k, "M": est.M,
                             "threshold": validity_threshold(n), "valid": est.valid,
                             "rel_error": err, "bound": 10 * (1 + est.M) / math.sqrt(n)})
    cols = ["n", "theta", "c", "k", "M", "threshold", "valid", "rel_error", "bound"]
    sys.stdout.write(render_table(cols, rows, {"config": asdict(cfg)}, "csv"))


if __name__ == "__main__":
    main()

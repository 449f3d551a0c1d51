"""Per-k distance tables and their CSV/JSON serialization.

CSV files start with ``# key: value`` metadata lines (schema version,
package version, the full run configuration and the command that
reproduces the file), then a header row.  Cells that were not computed
are left empty.  JSON files carry the same metadata and mirror the rows as
objects.  Output is UTF-8 with LF line endings and contains no timestamps,
so identical configurations give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .distances import (birthday_bound, enum_metrics, linf_partition, sep_partition)
from .errors import CAPS, CapacityError
from .shuffle_measure import BiasVector

SCHEMA_VERSION = 1
REPORT_COLUMNS = ["n", "theta", "k", "method", "value", "stderr"]


def fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def json_value(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass
class DistanceRow:
    k: int
    values: dict = field(default_factory=dict)     # method -> value
    stderr: dict = field(default_factory=dict)     # method -> standard error


@dataclass
class DistanceReport:
    n: int
    theta: str
    rows: list = field(default_factory=list)

    def add(self, k, method, value, stderr=None):
        for row in self.rows:
            if row.k == k:
                break
        else:
            row = DistanceRow(k)
            self.rows.append(row)
        row.values[method] = value
        if stderr is not None:
            row.stderr[method] = stderr

    def column(self, method) -> list:
        return [row.values.get(method) for row in self.rows]

    def records(self) -> list:
        out = []
        for row in self.rows:
            for method, value in row.values.items():
                out.append({"n": self.n, "theta": self.theta, "k": row.k, "method": method,
                            "value": value, "stderr": row.stderr.get(method)})
        return out

    def violations(self) -> list:
        """Rows breaking ``tv <= sep <= linf``, ``0 <= sep <= 1`` or ``sep <= birthday``."""
        bad = []
        for row in self.rows:
            v = row.values
            sep = v.get("sep_enum", v.get("sep_partition"))
            linf = v.get("linf_enum", v.get("linf_partition"))
            tv = v.get("tv_enum")
            if sep is not None and not 0 <= sep <= 1:
                bad.append((row.k, "sep outside [0, 1]"))
            if sep is not None and linf is not None and sep > linf:
                bad.append((row.k, "sep > linf"))
            if tv is not None and sep is not None and tv > sep:
                bad.append((row.k, "tv > sep"))
            bb = v.get("birthday_bound")
            if sep is not None and bb is not None and sep > bb:
                bad.append((row.k, "sep > birthday bound"))
        return bad


def build_distance_report(n: int, theta_text: str, theta: BiasVector, ks,
                          partition_cap: int | None = None, enum_cap: int | None = None,
                          weight_cap: int | None = None) -> DistanceReport:
    """Closed-form distances and birthday bound for each k, plus enumerated
    SEP, L-infinity and TV where n and a**k are inside the caps."""
    enum_cap = CAPS.enum if enum_cap is None else enum_cap
    weight_cap = CAPS.weights if weight_cap is None else weight_cap
    rep = DistanceReport(n, theta_text)
    for k in ks:
        rep.add(k, "sep_partition", sep_partition(n, theta, k, partition_cap=partition_cap))
        rep.add(k, "linf_partition", linf_partition(n, theta, k, partition_cap=partition_cap))
        rep.add(k, "birthday_bound", birthday_bound(n, theta, k))
        if n <= enum_cap and theta.a ** k <= weight_cap:
            m = enum_metrics(n, theta, k, enum_cap, weight_cap)
            rep.add(k, "sep_enum", m["sep"])
            rep.add(k, "linf_enum", m["linf"])
            rep.add(k, "tv_enum", m["tv"])
    return rep


def render_table(columns: list, rows: list, meta: dict, fmt: str) -> str:
    """Serialize rows (dicts keyed by column) with a metadata block."""
    meta = {"schema": SCHEMA_VERSION, "version": __version__, **meta}
    if fmt == "json":
        doc = {"meta": meta, "columns": columns,
               "rows": [{c: json_value(r.get(c)) for c in columns} for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key, value in meta.items():
        text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
        buf.write(f"# {key}: {text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt_value(r.get(c)) for c in columns])
    return buf.getvalue()


def report_table(rep: DistanceReport, meta: dict, fmt: str) -> str:
    return render_table(REPORT_COLUMNS, rep.records(), meta, fmt)


def read_csv_table(text: str):
    """Parse a file written by :func:`render_table` into (meta, rows)."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            try:
                meta[key] = json.loads(value)
            except json.JSONDecodeError:
                meta[key] = value
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    return meta, rows

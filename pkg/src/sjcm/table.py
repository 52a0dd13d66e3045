"""SweepTable: rectangular result rows with a provenance header, written as
versioned CSV or JSON with fixed formatting so identical inputs give
byte-identical files."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

from . import __version__

SCHEMA = 1
CERTIFICATE_COLUMNS = ("n_max", "residual")


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def config_hash(config: dict) -> str:
    text = "\n".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class SweepTable:
    columns: list
    rows: list                     # list of dicts keyed by column
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, r in enumerate(self.rows):
            if set(r) != set(self.columns):
                raise ValueError(f"row {i} keys {sorted(r)} do not match columns {self.columns}")

    def column(self, name):
        return [r[name] for r in self.rows]

    def header(self) -> dict:
        h = {"schema": SCHEMA, "tool": f"sjcm {__version__}"}
        h.update(self.provenance)
        return h

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.header().items():
            buf.write(f"# {k}={v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(r[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return fmt(v)
            return v

        doc = {"header": self.header(), "columns": self.columns,
               "rows": [[clean(r[c]) for c in self.columns] for r in self.rows]}
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"

    def write(self, path, fmt_: str = "csv") -> None:
        text = self.to_csv() if fmt_ == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_csv(path) -> tuple[dict, list, list]:
    header, lines = {}, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                header[k] = v
            else:
                lines.append(line)
    rows = list(csv.reader(lines))
    return header, rows[0], rows[1:]


def uncertified_rows(path, max_residual: float = 1e-4) -> list[int]:
    """Indices of rows lacking a finite n_max or a residual below max_residual."""
    _, cols, rows = read_csv(path)
    missing = [c for c in CERTIFICATE_COLUMNS if c not in cols]
    if missing:
        return list(range(len(rows))) or [-1]
    i_n, i_r = cols.index("n_max"), cols.index("residual")
    bad = []
    for k, r in enumerate(rows):
        try:
            n, res = int(float(r[i_n])), float(r[i_r])
        except ValueError:
            bad.append(k)
            continue
        if n <= 0 or not math.isfinite(res) or res > max_residual:
            bad.append(k)
    return bad

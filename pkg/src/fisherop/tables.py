"""Rectangular result tables with a provenance header, rendered as CSV or JSON."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def digest(obj) -> str:
    """sha256 of a canonical JSON rendering (or of raw bytes)."""
    data = obj if isinstance(obj, bytes) else json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(data).hexdigest()


@dataclass
class ScanTable:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k in sorted(self.provenance):
            buf.write(f"# {k}: {self.provenance[k]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [[_plain(v) for v in r] for r in self.rows]
        doc = {"provenance": self.provenance, "columns": self.columns, "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def render(self, fmt_name: str) -> str:
        return self.to_json() if fmt_name == "json" else self.to_csv()

    def write(self, path: Path | str, fmt_name: str | None = None) -> None:
        path = Path(path)
        fmt_name = fmt_name or ("json" if path.suffix == ".json" else "csv")
        path.write_text(self.render(fmt_name))


def read_csv(text: str) -> ScanTable:
    prov, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            prov[k] = v
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return ScanTable(rows[0], [[_parse(v) for v in r] for r in rows[1:]], prov)


def _parse(s: str):
    if s in ("true", "false"):
        return s == "true"
    try:
        return float(s)
    except ValueError:
        return s


def _plain(x):
    """numpy scalars as their Python counterparts, for JSON."""
    return x.item() if isinstance(x, np.generic) else x

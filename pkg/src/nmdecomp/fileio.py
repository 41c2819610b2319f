"""Table files and machine-readable output.

Table CSV layout::

    # period: 1960
    # bracket: wives 26-35
    husband\\wife,NoHS,HS,SomeCollege,College
    NoHS,1200,340,60,12
    ...

The header row lists wife categories after a corner cell; each body row starts
with a husband category. Comment lines and blank lines are ignored apart from
the two recognised ``# key: value`` headers.

Results are flattened into records (lists of dicts) so that CSV and JSON
emissions carry the same numbers, serialized with 12 significant digits.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .errors import CsvFormatError, NegativeCountError
from .tables import ContingencyTable

SIG_DIGITS = 12
_HEADER = re.compile(r"^#\s*(period|bracket)\s*:\s*(.*?)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class TableFile:
    table: ContingencyTable
    path: Optional[str] = None
    period: Optional[str] = None
    bracket: Optional[str] = None
    corner: str = "husband\\wife"


def fmt(x: float) -> str:
    """12-significant-digit text form of a number."""
    x = float(x)
    if x == 0:
        x = 0.0  # drop the sign of -0.0
    return format(x, f".{SIG_DIGITS}g")


def _number(text, line, column, row_label, col_label):
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(
            f"non-numeric cell ({row_label}, {col_label}): {text!r}", line, column
        ) from None
    if not math.isfinite(value):
        raise CsvFormatError(f"non-finite cell ({row_label}, {col_label}): {text!r}", line, column)
    if value < 0:
        raise NegativeCountError(
            f"negative cell ({row_label}, {col_label}): {text}", line, column
        )
    return value


def parse_table_csv(data, path=None) -> TableFile:
    """Parse a table CSV from ``bytes`` or ``str``.

    Raises
    ------
    CsvFormatError
        Ragged rows, non-numeric cells or duplicate labels, with line and
        column numbers (1-based).
    NegativeCountError
        A negative count, naming the cell.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise CsvFormatError(f"not UTF-8: {exc}") from None
    meta = {}
    rows = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _HEADER.match(stripped)
            if m:
                meta[m.group(1).lower()] = m.group(2)
            continue
        rows.append((lineno, next(csv.reader([line]))))
    if len(rows) < 3:
        raise CsvFormatError("need a header row and at least two body rows")
    header_line, header = rows[0]
    corner = header[0].strip()
    col_labels = [c.strip() for c in header[1:]]
    _check_unique(col_labels, header_line, "wife", offset=2)
    row_labels, cells = [], []
    for lineno, fields in rows[1:]:
        if len(fields) != len(header):
            raise CsvFormatError(
                f"expected {len(header)} fields, got {len(fields)}", lineno
            )
        label = fields[0].strip()
        row_labels.append(label)
        cells.append([
            _number(text.strip(), lineno, k + 2, label, col_labels[k])
            for k, text in enumerate(fields[1:])
        ])
    _check_unique(row_labels, None, "husband")
    table = ContingencyTable(cells, row_labels, col_labels, meta.get("period"))
    return TableFile(
        table, None if path is None else str(path), meta.get("period"), meta.get("bracket"), corner
    )


def _check_unique(labels, line, axis, offset=0):
    seen = {}
    for k, lab in enumerate(labels):
        if lab in seen:
            raise CsvFormatError(f"duplicate {axis} label {lab!r}", line, k + offset)
        seen[lab] = k


def read_table(path) -> TableFile:
    """Read a table CSV; the period defaults to the file stem."""
    path = Path(path)
    tf = parse_table_csv(path.read_bytes(), path)
    if tf.period is None:
        table = tf.table.with_cells(tf.table.cells, period=path.stem)
        tf = TableFile(table, str(path), None, tf.bracket, tf.corner)
    return tf


def write_table_csv(table: ContingencyTable, bracket=None, corner="husband\\wife") -> str:
    """Serialize ``table`` in the table CSV layout."""
    buf = _io.StringIO()
    if table.period is not None:
        buf.write(f"# period: {table.period}\n")
    if bracket is not None:
        buf.write(f"# bracket: {bracket}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([corner, *table.col_labels])
    for label, row in zip(table.row_labels, table.cells):
        writer.writerow([label, *(fmt(x) for x in row)])
    return buf.getvalue()


def write_table_file(tf: TableFile) -> str:
    return write_table_csv(tf.table, tf.bracket, tf.corner)


# ---------------------------------------------------------------------------
# result records


def _value(x):
    if x is None:
        return None
    if isinstance(x, float):
        return float(fmt(x))
    return x


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return fmt(x)
    return x


def records_to_csv(records: List[dict]) -> str:
    buf = _io.StringIO()
    if not records:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    columns = list(records[0])
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_cell(rec[c]) for c in columns])
    return buf.getvalue()


def records_to_json(records: List[dict], meta: Optional[dict] = None) -> str:
    doc = dict(meta or {})
    doc["records"] = [{k: _value(v) for k, v in rec.items()} for rec in records]
    return json.dumps(doc, indent=2) + "\n"


def table_records(table: ContingencyTable) -> List[dict]:
    out = []
    for label, row in zip(table.row_labels, table.cells):
        rec = {"husband": label}
        rec.update({c: float(x) for c, x in zip(table.col_labels, row)})
        out.append(rec)
    return out


def sorting_records(sm, table: ContingencyTable) -> List[dict]:
    n, m = sm.source_dims
    return [
        {
            "i": i,
            "j": j,
            "husband_low_upto": table.row_labels[i - 1],
            "wife_low_upto": table.col_labels[j - 1],
            "ll": sm[i, j],
        }
        for i in range(1, n)
        for j in range(1, m)
    ]


def decomposition_records(result) -> List[dict]:
    shares = [
        ("f(A0,P0)", result.f_a0_p0),
        ("f(A1,P0)", result.f_a1_p0),
        ("f(A0,P1)", result.f_a0_p1),
        ("f(A1,P1)", result.f_a1_p1),
    ]
    effects = [
        ("total_change", result.total_change),
        ("availability_effect", result.availability_effect),
        ("sorting_effect", result.sorting_effect),
        ("interaction_effect", result.interaction_effect),
    ]
    recs = [{"quantity": q, "fraction": float(v), "percentage_points": 100.0 * v} for q, v in shares]
    recs += [{"quantity": q, "fraction": v / 100.0, "percentage_points": float(v)} for q, v in effects]
    return recs


def series_records(points) -> List[dict]:
    def pp(x):
        return None if x is None else 100.0 * x

    return [
        {
            "period": p.period,
            "series_kind": p.series_kind.value,
            "observed_share": p.observed_share,
            "observed_pp": pp(p.observed_share),
            "counterfactual_share": p.counterfactual_share,
            "counterfactual_pp": pp(p.counterfactual_share),
        }
        for p in points
    ]


"""CSV ingestion/emission and groups-configuration parsing."""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .core import GroupedData
from .errors import DataError, UsageError

__all__ = [
    "read_csv_matrix",
    "ingest_csv",
    "parse_groups_config",
    "format_float",
    "matrix_to_csv",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "vecdep/1"


def format_float(v: float) -> str:
    """Round-trip-safe decimal rendering (17 significant digits)."""
    return format(float(v), ".17g")


def read_csv_matrix(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a header + numeric-body CSV into (column names, n x d matrix)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return parse_csv_matrix(text)


def parse_csv_matrix(text: str) -> tuple[list[str], np.ndarray]:
    reader = csv.reader(_io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty CSV: missing header row") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in CSV header")
    rows: list[list[float]] = []
    for rownum, record in enumerate(reader, start=2):
        if not record or (len(record) == 1 and record[0].strip() == ""):
            continue
        if len(record) != len(header):
            raise DataError(f"row {rownum}: expected {len(header)} cells, found {len(record)}")
        parsed = []
        for cell, colname in zip(record, header):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"missing cell at (row {rownum}, column {colname!r})")
            try:
                parsed.append(float(cell))
            except ValueError:
                raise DataError(
                    f"non-numeric cell {cell!r} at (row {rownum}, column {colname!r})"
                ) from None
        rows.append(parsed)
    if not rows:
        raise DataError("CSV has a header but no data rows")
    return header, np.asarray(rows, dtype=float)


def parse_groups_config(doc: str | dict, header: list[str]) -> list[tuple[str, list[int]]]:
    """Parse {"groups": [{"name": ..., "columns": [...]}]} against the CSV header."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DataError(f"groups config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "groups" not in doc:
        raise DataError('groups config must be an object with a "groups" list')
    col_index = {name: i for i, name in enumerate(header)}
    groups: list[tuple[str, list[int]]] = []
    for entry in doc["groups"]:
        name = entry.get("name")
        columns = entry.get("columns")
        if not name or not columns:
            raise DataError("each group needs a name and a non-empty columns list")
        idx = []
        for col in columns:
            if col not in col_index:
                raise DataError(f"group {name!r} references unknown column {col!r}")
            idx.append(col_index[col])
        groups.append((name, idx))
    return groups


def ingest_csv(path: str | Path, groups_doc: str | dict) -> GroupedData:
    header, values = read_csv_matrix(path)
    groups = parse_groups_config(groups_doc, header)
    return GroupedData(values=values, groups=groups, column_names=header)


def matrix_to_csv(columns: list[str], rows: np.ndarray) -> str:
    """Emit a matrix as CSV with full-precision floats and a trailing newline."""
    out = [",".join(columns)]
    for row in np.asarray(rows, dtype=float):
        out.append(",".join(format_float(v) for v in row))
    return "\n".join(out) + "\n"

"""CSV run logs.

Header (exact, case-sensitive)::

    n_params,d_tokens,loss[,c_logical]

UTF-8, LF line endings, ``.`` as the decimal separator. ``c_logical`` may
be omitted entirely or left blank on individual rows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Iterable

from .errors import DomainError, InputError, RowError, SchemaError
from .lawcore import RunRecord

REQUIRED_COLUMNS = ("n_params", "d_tokens", "loss")
OPTIONAL_COLUMNS = ("c_logical",)


@dataclass(frozen=True)
class RunLogFile:
    path: Path
    records: tuple[RunRecord, ...]


def format_number(x: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def _parse_cell(text: str, column: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise RowError(f"row {row}: {column}={text!r} is not a number", row=row) from None
    if not math.isfinite(value) or value <= 0.0:
        raise RowError(f"row {row}: {column}={text!r} must be finite and > 0", row=row)
    return value


def ingest_runs(path: str | PathLike) -> RunLogFile:
    """Read a run log.

    Row numbers in errors count data rows from 1 (the header is not a row).

    Raises:
        SchemaError: missing, renamed or unknown column.
        RowError: non-numeric or non-positive cell.
        InputError: no data rows.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        for col in REQUIRED_COLUMNS:
            if col not in header:
                raise SchemaError(f"{path}: missing required column {col!r}", column=col)
        for col in header:
            if col not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS:
                raise SchemaError(f"{path}: unknown column {col!r}", column=col)
        if len(set(header)) != len(header):
            raise SchemaError(f"{path}: duplicated column in header {header}")
        pos = {name: i for i, name in enumerate(header)}

        records = []
        row = 0
        for cells in reader:
            if not cells or all(not c.strip() for c in cells):
                continue
            row += 1
            if len(cells) != len(header):
                raise RowError(
                    f"row {row}: expected {len(header)} cells, got {len(cells)}", row=row
                )
            values = {
                col: _parse_cell(cells[pos[col]].strip(), col, row) for col in REQUIRED_COLUMNS
            }
            c_text = cells[pos["c_logical"]].strip() if "c_logical" in pos else ""
            c_logical = _parse_cell(c_text, "c_logical", row) if c_text else None
            try:
                records.append(RunRecord(c_logical=c_logical, **values))
            except DomainError as exc:
                raise RowError(f"row {row}: {exc}", row=row) from None
    if not records:
        raise InputError(f"{path}: no data rows")
    return RunLogFile(path=path, records=tuple(records))


def write_runs(path: str | PathLike, records: Iterable[RunRecord]) -> None:
    """Write records in the canonical schema; ``c_logical`` only if any row has it."""
    records = list(records)
    with_c = any(r.c_logical is not None for r in records)
    header = list(REQUIRED_COLUMNS) + (["c_logical"] if with_c else [])
    lines = [",".join(header)]
    for r in records:
        cells = [format_number(r.n_params), format_number(r.d_tokens), format_number(r.loss)]
        if with_c:
            cells.append("" if r.c_logical is None else format_number(r.c_logical))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

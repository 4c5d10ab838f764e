from __future__ import annotations

import hashlib
import io
import json
import os
import pathlib
import re
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from typing import Any, Literal

import pandas as pd

from sockopt.errors import InvalidInputError

_PARSER_LINE = re.compile(r"line (\d+)")


class TableError(InvalidInputError):
    """A CSV file or cell the table readers cannot use; ``line`` is 1-based when known."""

    def __init__(self, reason: str, *, line: int | None = None) -> None:
        self.reason = reason
        self.line = line
        super().__init__(reason if line is None else f"line {line}: {reason}")


def atomic_write_text(path: str | pathlib.Path, text: str) -> pathlib.Path:
    """Write ``text`` through a temp file in the target directory and rename it into place."""
    dst = pathlib.Path(path)
    dst.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{dst.name}.", suffix=".tmp", dir=dst.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, dst)
    except BaseException:
        pathlib.Path(tmp).unlink(missing_ok=True)
        raise
    return dst


def read_table_text(path: str | pathlib.Path) -> str:
    """UTF-8 contents of ``path``; an undecodable byte is reported with its line."""
    p = pathlib.Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        msg = f"cannot read {p}: {exc}"
        raise TableError(msg) from exc
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        msg = f"not UTF-8 text (byte {raw[exc.start]:#04x} at offset {exc.start})"
        raise TableError(msg, line=raw.count(b"\n", 0, exc.start) + 1) from exc


def read_csv_table(text: str) -> pd.DataFrame:
    """Parse CSV text into a frame of stripped string cells indexed by file line.

    The first line is the header. Blank lines are dropped; a row with more or
    fewer fields than the header raises :class:`TableError` naming its line.
    """
    try:
        raw = pd.read_csv(
            io.StringIO(text), header=None, dtype=str, keep_default_na=False, skip_blank_lines=False
        )
    except pd.errors.EmptyDataError:
        msg = "file is empty"
        raise TableError(msg, line=1) from None
    except pd.errors.ParserError as exc:
        detail = str(exc).strip().rsplit(": ", 1)[-1]
        found = _PARSER_LINE.search(detail)
        msg = f"malformed CSV: {detail}"
        raise TableError(msg, line=int(found.group(1)) if found else None) from exc

    header = [str(c).strip() for c in raw.iloc[0].fillna("")]
    if len(set(header)) != len(header):
        msg = f"duplicate column in header {','.join(header)}"
        raise TableError(msg, line=1)
    body = raw.iloc[1:].set_axis(pd.RangeIndex(2, len(raw) + 1), axis=0).set_axis(header, axis=1)
    missing = body.isna()
    body = body[~missing.all(axis=1)]
    short = missing.loc[body.index].any(axis=1)
    if short.any():
        line = int(short.idxmax())
        msg = f"expected {len(header)} fields, found {int(body.loc[line].notna().sum())}"
        raise TableError(msg, line=line)
    return body.fillna("").apply(lambda col: col.str.strip()) if len(body) else body


def typed_column(
    frame: pd.DataFrame, column: str, kind: Literal["int", "float"], *, optional: bool = False
) -> pd.Series:
    """Cast a string column to int64/float64 (nullable ``Int64`` when ``optional``).

    Empty cells are only allowed when ``optional``; the first offending cell
    raises :class:`TableError` with its line.
    """
    cells = frame[column]
    values = pd.to_numeric(cells.where(cells != ""), errors="coerce")
    bad = values.isna() & ((cells != "") | (not optional))
    if kind == "int":
        bad |= values.notna() & (values % 1 != 0)
    if bad.any():
        line = int(bad.idxmax())
        msg = f"column {column} holds {cells.loc[line]!r}, expected {kind}"
        raise TableError(msg, line=line)
    if kind == "float":
        return values.astype("float64")
    return values.astype("Int64") if optional else values.astype("int64")


def sha256_file(path: str | pathlib.Path) -> str:
    digest = hashlib.sha256()
    with pathlib.Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".12g")
    if value is None:
        return ""
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any] | Mapping[str, Any]]) -> str:
    """CSV text with every cell pre-formatted by :func:`format_cell`, so output bytes do not depend on dtypes."""
    cells = [
        [format_cell(v) for v in ([row.get(col) for col in header] if isinstance(row, Mapping) else row)]
        for row in rows
    ]
    frame = pd.DataFrame(cells, columns=list(header), dtype=object)
    return frame.to_csv(index=False, lineterminator="\n")


class LocalFS:
    """Output directory owner: atomic writes plus a digest for every file written."""

    def __init__(self, base_dir: str | pathlib.Path):
        self.base = pathlib.Path(base_dir)
        self.base.mkdir(parents=True, exist_ok=True)
        self.written: dict[str, str] = {}

    def path(self, name: str) -> pathlib.Path:
        return self.base / name

    def write_text(self, name: str, text: str) -> pathlib.Path:
        dst = atomic_write_text(self.base / name, text)
        self.written[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return dst

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any] | Mapping[str, Any]]) -> pathlib.Path:
        return self.write_text(name, render_csv(header, rows))

    def write_json(self, name: str, payload: Any) -> pathlib.Path:
        return self.write_text(name, json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def remove(self, name: str) -> None:
        self.path(name).unlink(missing_ok=True)
        self.written.pop(name, None)

    @staticmethod
    def digest(path: str | pathlib.Path) -> str:
        return sha256_file(path)

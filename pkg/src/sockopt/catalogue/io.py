from __future__ import annotations

import logging
import pathlib
from collections.abc import Sequence
from typing import Literal

import pandas as pd

from sockopt.blob.local_fs import TableError, atomic_write_text, read_csv_table, read_table_text, render_csv, typed_column
from sockopt.catalogue.models import SockDesign, validate_features
from sockopt.errors import CatalogueParseError, InvalidInputError

logger = logging.getLogger(__name__)

_OPTIONAL_COLUMNS = ("eco", "theta", "d")


def _expected_header(k: int) -> list[str]:
    return ["design_id", *[f"f{r + 1}" for r in range(k)], "price"]


def _optional(frame: pd.DataFrame, column: str, kind: Literal["int", "float"]) -> pd.Series:
    if column not in frame.columns:
        return pd.Series(pd.NA, index=frame.index, dtype="object")
    return typed_column(frame, column, kind, optional=True)


def parse_catalogue(text: str, feature_sizes: Sequence[int], alpha: float = 1.0, *, path: str = "<string>") -> list[SockDesign]:
    try:
        frame = read_csv_table(text)
    except TableError as exc:
        reason = "missing header row" if exc.reason == "file is empty" else exc.reason
        raise CatalogueParseError(reason, path=path, line=exc.line) from exc

    header = list(frame.columns)
    base = _expected_header(len(feature_sizes))
    extras = header[len(base) :]
    if header[: len(base)] != base or any(col not in _OPTIONAL_COLUMNS for col in extras):
        msg = f"header {','.join(header)} does not match {','.join(base)}[,{'|'.join(_OPTIONAL_COLUMNS)}]"
        raise CatalogueParseError(msg, path=path, line=1)

    try:
        features = pd.concat([typed_column(frame, col, "int") for col in base[1:-1]], axis=1)
        price = typed_column(frame, "price", "int")
        eco = _optional(frame, "eco", "float")
        theta = _optional(frame, "theta", "int")
        d = _optional(frame, "d", "float")
    except TableError as exc:
        raise CatalogueParseError(exc.reason, path=path, line=exc.line) from exc

    designs: list[SockDesign] = []
    seen: set[str] = set()
    for line in frame.index:
        design_id = frame.at[line, "design_id"]
        if not design_id:
            msg = "empty design_id"
            raise CatalogueParseError(msg, path=path, line=line)
        if design_id in seen:
            msg = f"duplicate design_id '{design_id}'"
            raise CatalogueParseError(msg, path=path, line=line)
        try:
            design = SockDesign(
                design_id=design_id,
                features=validate_features(features.loc[line].tolist(), feature_sizes),
                price=int(price[line]),
                eco=alpha * int(price[line]) if pd.isna(eco[line]) else float(eco[line]),
                theta=None if pd.isna(theta[line]) else int(theta[line]),
                d=None if pd.isna(d[line]) else float(d[line]),
            )
        except (InvalidInputError, ValueError) as exc:
            raise CatalogueParseError(str(exc), path=path, line=line) from exc
        seen.add(design_id)
        designs.append(design)
    return designs


def load_catalogue(path: str | pathlib.Path, feature_sizes: Sequence[int], alpha: float = 1.0) -> list[SockDesign]:
    """Read a catalogue CSV (``design_id,f1..fk,price`` plus optional ``eco,theta,d``); row order is kept."""
    p = pathlib.Path(path)
    try:
        text = read_table_text(p)
    except TableError as exc:
        raise CatalogueParseError(exc.reason, path=str(p), line=exc.line) from exc
    designs = parse_catalogue(text, feature_sizes, alpha, path=str(p))
    logger.info("Loaded %d designs from %s", len(designs), p)
    return designs


def format_catalogue(designs: Sequence[SockDesign], *, alpha: float | None = None) -> str:
    """Serialise designs; ``eco``/``theta``/``d`` columns appear only when some design needs them."""
    k = len(designs[0].features) if designs else 0
    header = _expected_header(k)
    write_eco = bool(designs) and (alpha is None or any(d.eco != alpha * d.price for d in designs))
    write_theta = any(d.theta is not None for d in designs)
    write_d = any(d.d is not None for d in designs)
    header += [col for col, keep in zip(_OPTIONAL_COLUMNS, (write_eco, write_theta, write_d), strict=True) if keep]

    rows = []
    for design in designs:
        row: list[object] = [design.design_id, *design.features, design.price]
        row += [v for v, keep in zip((design.eco, design.theta, design.d), (write_eco, write_theta, write_d), strict=True) if keep]
        rows.append(row)
    return render_csv(header, rows)


def write_catalogue(designs: Sequence[SockDesign], path: str | pathlib.Path, *, alpha: float | None = None) -> pathlib.Path:
    """Atomically write ``designs``; pass ``alpha`` to omit a purely proportional eco column."""
    return atomic_write_text(path, format_catalogue(designs, alpha=alpha))

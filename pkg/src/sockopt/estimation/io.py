"""CSV readers and writers for study data and fit results."""

from __future__ import annotations

import pathlib
from collections.abc import Sequence
from typing import Any, Literal

import pandas as pd

from sockopt.blob.local_fs import TableError, read_csv_table, read_table_text, render_csv, typed_column
from sockopt.errors import DataError, InvalidInputError
from sockopt.estimation.models import (
    BundleChoiceSet,
    BundleOption,
    ChoiceData,
    ComparisonTrial,
    RespondentData,
    RespondentFit,
)

TRIALS_HEADER = ["respondent_id", "m_a", "m_b", "choice"]
BUNDLES_HEADER = ["respondent_id", "set_id", "bundle_id", "diversity", "c_soc_hat", "c_rep_hat", "chosen"]
RESULTS_HEADER = ["respondent_id", "chi_hat", "chi_se", "delta_hat", "delta_se", "converged"]

_TRIAL_TYPES: dict[str, Literal["int", "float"]] = {"m_a": "float", "m_b": "float", "choice": "int"}
_BUNDLE_TYPES: dict[str, Literal["int", "float"]] = {
    "set_id": "int",
    "bundle_id": "int",
    "diversity": "float",
    "c_soc_hat": "float",
    "c_rep_hat": "float",
    "chosen": "int",
}


def _table(text: str, header: Sequence[str], types: dict[str, Literal["int", "float"]], path: str) -> pd.DataFrame:
    """Rows of a study file with the numeric columns cast; the index is the file line."""
    try:
        frame = read_csv_table(text)
    except TableError as exc:
        where = path if exc.reason == "file is empty" or exc.line is None else f"{path}:{exc.line}"
        msg = f"{where}: {exc.reason}"
        raise DataError(msg) from exc
    missing = [col for col in header if col not in frame.columns]
    if missing:
        msg = f"{path}:1: missing columns {', '.join(missing)}"
        raise DataError(msg)
    if frame.empty:
        msg = f"{path}: no data rows"
        raise DataError(msg)
    try:
        return frame.assign(**{col: typed_column(frame, col, kind) for col, kind in types.items()})
    except TableError as exc:
        msg = f"{path}:{exc.line}: {exc.reason}"
        raise DataError(msg) from exc


def parse_trials(text: str, path: str = "<trials>") -> ChoiceData:
    frame = _table(text, TRIALS_HEADER, _TRIAL_TYPES, path)
    by_id: dict[str, RespondentData] = {}
    for line, row in zip(frame.index, frame.itertuples(index=False), strict=True):
        try:
            trial = ComparisonTrial(m_a=float(row.m_a), m_b=float(row.m_b), y=int(row.choice))
        except InvalidInputError as exc:
            msg = f"{path}:{line}: {exc}"
            raise DataError(msg) from exc
        by_id.setdefault(row.respondent_id, RespondentData(respondent_id=row.respondent_id)).trials.append(trial)
    return ChoiceData(respondents=list(by_id.values()))


def parse_bundles(text: str, path: str = "<bundles>") -> ChoiceData:
    frame = _table(text, BUNDLES_HEADER, _BUNDLE_TYPES, path)
    groups: dict[str, dict[int, list[tuple[int, BundleOption, bool]]]] = {}
    for line, row in zip(frame.index, frame.itertuples(index=False), strict=True):
        option = BundleOption(
            diversity=float(row.diversity),
            c_soc_hat=float(row.c_soc_hat),
            c_rep_hat=float(row.c_rep_hat),
            bundle_id=int(row.bundle_id),
        )
        groups.setdefault(row.respondent_id, {}).setdefault(int(row.set_id), []).append((line, option, row.chosen == 1))

    respondents = []
    for rid, sets in groups.items():
        data = RespondentData(respondent_id=rid)
        for set_id, members in sets.items():
            chosen = [i for i, (_, _, c) in enumerate(members) if c]
            if len(chosen) != 1:
                msg = f"{path}:{members[0][0]}: set {set_id} of {rid} has {len(chosen)} chosen bundles, expected 1"
                raise DataError(msg)
            try:
                data.choice_sets.append(
                    BundleChoiceSet(bundles=tuple(m[1] for m in members), chosen_index=chosen[0], set_id=set_id)
                )
            except InvalidInputError as exc:
                msg = f"{path}:{members[0][0]}: {exc}"
                raise DataError(msg) from exc
        respondents.append(data)
    return ChoiceData(respondents=respondents)


def _read(path: str | pathlib.Path) -> str:
    try:
        return read_table_text(path)
    except TableError as exc:
        if exc.line is None:
            raise InvalidInputError(exc.reason) from exc
        msg = f"{path}:{exc.line}: {exc.reason}"
        raise DataError(msg) from exc


def load_trials(path: str | pathlib.Path) -> ChoiceData:
    return parse_trials(_read(path), str(path))


def load_bundles(path: str | pathlib.Path) -> ChoiceData:
    return parse_bundles(_read(path), str(path))


def format_trials(data: ChoiceData) -> str:
    rows = [[r.respondent_id, t.m_a, t.m_b, t.y] for r in data.respondents for t in r.trials]
    return render_csv(TRIALS_HEADER, rows)


def format_bundles(data: ChoiceData) -> str:
    rows = [
        [r.respondent_id, cs.set_id, b.bundle_id, b.diversity, b.c_soc_hat, b.c_rep_hat, int(i == cs.chosen_index)]
        for r in data.respondents
        for cs in r.choice_sets
        for i, b in enumerate(cs.bundles)
    ]
    return render_csv(BUNDLES_HEADER, rows)


def result_rows(fits: Sequence[RespondentFit]) -> list[list[Any]]:
    rows = []
    for f in fits:
        rows.append([
            f.respondent_id,
            None if f.chi is None else f.chi.estimate,
            None if f.chi is None else f.chi.std_error,
            None if f.delta is None else f.delta.estimate,
            None if f.delta is None else f.delta.std_error,
            f.converged,
        ])
    return rows


def format_results(fits: Sequence[RespondentFit]) -> str:
    return render_csv(RESULTS_HEADER, result_rows(fits))

"""JSON instance files: ``{"knapsack": ...}``, ``{"sockplan": ...}`` or ``{"coverage": ...}``."""

from __future__ import annotations

import json
import pathlib
from fractions import Fraction
from typing import Any

from sockopt.errors import DataError, InvalidInputError
from sockopt.oracle.models import CoverageInstance, KnapsackInstance, SockPlanInstance, SockPlanSolution

Instance = KnapsackInstance | SockPlanInstance | CoverageInstance


def _knapsack(body: dict[str, Any]) -> KnapsackInstance:
    return KnapsackInstance(
        items=tuple((int(w), int(v)) for w, v in body["items"]),
        capacity=int(body["capacity"]),
        target=int(body["target"]),
    )


def _sockplan(body: dict[str, Any]) -> SockPlanInstance:
    return SockPlanInstance.build(
        body["prices"],
        body["xi"],
        theta=body.get("theta", 1),
        T=int(body["T"]),
        kappa=int(body["kappa"]),
        budget=body["budget"],
        threshold=body.get("threshold"),
        required=body.get("required", ()),
        labels=body.get("labels", ()),
    )


def _coverage(body: dict[str, Any]) -> CoverageInstance:
    return CoverageInstance(
        weights=tuple(float(w) for w in body["weights"]),
        sets=tuple(frozenset(int(u) for u in s) for s in body["sets"]),
        costs=tuple(int(c) for c in body["costs"]),
        budget=int(body["budget"]),
        names=tuple(body.get("names", ())),
    )


_PARSERS = {"knapsack": _knapsack, "sockplan": _sockplan, "coverage": _coverage}


def parse_instance(payload: Any, source: str = "<instance>") -> Instance:
    if not isinstance(payload, dict) or len(payload) != 1:
        msg = f"{source}: expected one of {sorted(_PARSERS)} as the single top-level key"
        raise DataError(msg)
    kind, body = next(iter(payload.items()))
    parser = _PARSERS.get(kind)
    if parser is None:
        msg = f"{source}: unknown instance kind '{kind}'"
        raise DataError(msg)
    try:
        return parser(body)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidInputError):
            msg = f"{source}: {exc}"
        else:
            msg = f"{source}: malformed {kind} instance ({exc!r})"
        raise DataError(msg) from exc


def load_instance(path: str | pathlib.Path) -> Instance:
    p = pathlib.Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {p}: {exc}"
        raise InvalidInputError(msg) from exc
    except UnicodeDecodeError as exc:
        msg = f"{p}: not UTF-8 text: {exc.reason}"
        raise DataError(msg) from exc
    if not text.strip():
        msg = f"{p}: file is empty"
        raise DataError(msg)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        msg = f"{p}:{exc.lineno}: invalid JSON: {exc.msg}"
        raise DataError(msg) from exc
    return parse_instance(payload, str(p))


def _fraction(x: Fraction) -> str | int:
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dump_instance(inst: Instance) -> dict[str, Any]:
    if isinstance(inst, KnapsackInstance):
        return {"knapsack": {"items": [list(it) for it in inst.items], "capacity": inst.capacity, "target": inst.target}}
    if isinstance(inst, CoverageInstance):
        return {
            "coverage": {
                "weights": list(inst.weights),
                "sets": [sorted(s) for s in inst.sets],
                "costs": list(inst.costs),
                "budget": inst.budget,
            }
        }
    return {
        "sockplan": {
            "prices": [_fraction(p) for p in inst.prices],
            "xi": [[_fraction(x) for x in row] for row in inst.xi],
            "theta": list(inst.theta),
            "T": inst.T,
            "kappa": inst.kappa,
            "budget": _fraction(inst.budget),
            "threshold": None if inst.threshold is None else _fraction(inst.threshold),
            "required": sorted(inst.required),
            "labels": list(inst.labels),
        }
    }


def solution_payload(solution: SockPlanSolution, inst: SockPlanInstance) -> dict[str, Any]:
    return {
        "value": _fraction(solution.value),
        "value_float": float(solution.value),
        "threshold": None if inst.threshold is None else _fraction(inst.threshold),
        "meets_threshold": solution.meets(inst.threshold),
        "purchase": [inst.labels[i] for i in solution.purchase],
        "spend": _fraction(solution.spend),
        "schedule": [None if day is None else [inst.labels[day[0]], inst.labels[day[1]]] for day in solution.schedule],
    }

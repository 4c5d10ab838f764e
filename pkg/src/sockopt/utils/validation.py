from __future__ import annotations

from typing import Any

from pydantic import BeforeValidator


def normalize_value(v: Any) -> Any:
    if isinstance(v, str):
        return v.strip().lower().replace("-", "_")
    return v


Normalize = BeforeValidator(normalize_value)

from __future__ import annotations

from collections.abc import Mapping
from typing import Any

import pendulum
from pydantic import BaseModel, Field

from sockopt import __version__

MANIFEST_NAME = "manifest.json"


def _now() -> str:
    return pendulum.now("UTC").to_iso8601_string()


class RunManifest(BaseModel):
    """What a command ran with and what it wrote; enough to rerun it bit-exactly."""

    command: str
    seed: int = Field(ge=0)
    version: str = __version__
    pipeline: str = Field(default="", description="Pipeline revision token.")
    config: dict[str, Any] = Field(default_factory=dict)
    inputs: dict[str, str] = Field(default_factory=dict, description="Input path -> sha256.")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output file name -> sha256.")
    started_at: str = Field(default_factory=_now)
    finished_at: str | None = None

    @classmethod
    def start(cls, command: str, seed: int, config: Mapping[str, Any], *, pipeline: str = "") -> RunManifest:
        return cls(command=command, seed=seed, config=dict(config), pipeline=pipeline)

    def finish(self, outputs: Mapping[str, str], inputs: Mapping[str, str] | None = None) -> RunManifest:
        return self.model_copy(
            update={
                "outputs": dict(sorted(outputs.items())),
                "inputs": dict(sorted({**self.inputs, **(inputs or {})}.items())),
                "finished_at": _now(),
            }
        )

    def reproducible_view(self) -> dict[str, Any]:
        """Everything except the timestamps."""
        return self.model_dump(exclude={"started_at", "finished_at"})

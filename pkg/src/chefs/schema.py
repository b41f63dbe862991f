"""Versioned variable schema: canonical names, entity scope, core/rest split.

The core-variable list is data, not code, so the storage split stays
auditable; the packaged default lives in ``data/core_schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .model import ChefsError


class SchemaError(ChefsError):
    pass


@dataclass(frozen=True, slots=True)
class VariableSpec:
    """Metadata for one canonical variable."""

    name: str
    entity: str  # "sample" | "result"
    core: bool
    era: "str | None" = None
    description: str = ""


@dataclass(frozen=True)
class CoreSchema:
    version: str
    id_hash: str
    file_checksum: str
    variables: tuple[VariableSpec, ...]

    def __post_init__(self) -> None:
        for var in self.variables:
            if var.entity not in ("sample", "result"):
                raise SchemaError(f"variable {var.name!r}: bad entity {var.entity!r}")

    @property
    def sample_core(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.entity == "sample" and v.core)

    @property
    def result_core(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.entity == "result" and v.core)

    @property
    def sample_rest(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.entity == "sample" and not v.core)

    @property
    def result_rest(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.entity == "result" and not v.core)

    @property
    def canonical_names(self) -> frozenset[str]:
        return frozenset(v.name for v in self.variables)

    def entity_of(self, name: str) -> "str | None":
        spec = _by_name(self).get(name)
        return spec.entity if spec else None

    def is_sample_var(self, name: str) -> bool:
        return self.entity_of(name) == "sample"


@lru_cache(maxsize=8)
def _by_name(schema: CoreSchema) -> dict[str, VariableSpec]:
    return {v.name: v for v in schema.variables}


def _parse(payload: dict) -> CoreSchema:
    try:
        variables = tuple(
            VariableSpec(
                name=v["name"],
                entity=v["entity"],
                core=bool(v["core"]),
                era=v.get("era"),
                description=v.get("description", ""),
            )
            for v in payload["variables"]
        )
        return CoreSchema(
            version=str(payload["schema_version"]),
            id_hash=payload["id_hash"],
            file_checksum=payload["file_checksum"],
            variables=variables,
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed schema file: {exc}") from exc


@lru_cache(maxsize=1)
def default_schema() -> CoreSchema:
    text = resources.files("chefs.data").joinpath("core_schema.json").read_text("utf-8")
    return _parse(json.loads(text))


def load_core_schema(path: "Path | str | None" = None) -> CoreSchema:
    """Load a schema file, or the packaged default when path is None."""
    if path is None:
        return default_schema()
    return _parse(json.loads(Path(path).read_text("utf-8")))

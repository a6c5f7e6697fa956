"""JSON schema loading and validation for CLI inputs and reports."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

SCHEMA_NAMES = (
    "semiring",
    "matrix",
    "presentation",
    "poset",
    "bmodule",
    "bmodule_input",
    "algebra",
    "cone",
    "cone_input",
    "ideal",
    "twisted",
    "ring_query",
    "matrix_pair",
    "report",
)


class SchemaError(ValueError):
    pass


def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(name)
    text = resources.files("semimod").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in SCHEMA_NAMES:
        s = load_schema(name)
        pairs.append((s["$id"], Resource.from_contents(s)))
    return Registry().with_resources(pairs)


@lru_cache(maxsize=None)
def _validator(name: str):
    s = load_schema(name)
    cls = jsonschema.validators.validator_for(s)
    return cls(s, registry=_registry())


def validate(instance, name: str) -> None:
    """Raise SchemaError with the first problem found."""
    errors = sorted(_validator(name).iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{name} schema: at {where}: {e.message}")

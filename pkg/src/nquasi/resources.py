"""Bundled fixture tables and JSON schemas."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .core import QTable
from .textio import parse_table


def _dir(name: str):
    return resources.files("nquasi").joinpath(name)


@lru_cache(maxsize=None)
def manifest() -> dict:
    """Fixture name -> provenance (generator, seed) and checked verdicts."""
    return json.loads(_dir("fixtures").joinpath("manifest.json").read_text(encoding="utf-8"))


def fixture(name: str) -> QTable:
    """Fixture table by name (file stem), e.g. ``fixture("irr3_q5")``."""
    return parse_table(_dir("fixtures").joinpath(f"{name}.qg").read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    """JSON schema for a CLI ``--json`` report, e.g. ``schema("tree")``."""
    return json.loads(_dir("schemas").joinpath(f"{name}.json").read_text(encoding="utf-8"))

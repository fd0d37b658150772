"""Readers and writers for the supported exchange formats."""

from pathlib import Path

from ..model import Ontology, PrefixMap
from .functional import emit_functional, parse_functional
from .obo import emit_obo, parse_obo
from .obograph import OBOGRAPH_SCHEMA, emit_obograph_json
from .seeds import SeedTermList, emit_seed_file, parse_seed_file

FORMAT_EXTENSIONS = {"ofn": "ofn", "obo": "obo", "json": "json"}


def load_ontology(path: str | Path, pm: PrefixMap | None = None) -> Ontology:
    """Read ``.obo`` as OBO, anything else as functional syntax."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".obo":
        return parse_obo(text, pm, source=str(path))
    return parse_functional(text, source=str(path))


def serialize(o: Ontology, fmt: str) -> str:
    if fmt == "ofn":
        return emit_functional(o)
    if fmt == "obo":
        return emit_obo(o)
    if fmt == "json":
        return emit_obograph_json(o)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = [
    "FORMAT_EXTENSIONS",
    "OBOGRAPH_SCHEMA",
    "SeedTermList",
    "emit_functional",
    "emit_obo",
    "emit_obograph_json",
    "emit_seed_file",
    "load_ontology",
    "parse_functional",
    "parse_obo",
    "parse_seed_file",
    "serialize",
]

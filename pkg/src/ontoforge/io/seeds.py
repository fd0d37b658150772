"""Seed term files: one CURIE or IRI per line, ``#`` comments."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from ..errors import UnknownPrefix
from ..model import contract_iri, expand_curie

logger = logging.getLogger(__name__)


@dataclass
class SeedTermList:
    terms: list[str] = field(default_factory=list)
    comments: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    errors: list[UnknownPrefix] = field(default_factory=list)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def parse_seed_file(text: str, pm: Mapping[str, str]) -> SeedTermList:
    seeds = SeedTermList()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        body, hash_, comment = line.partition("#")
        if hash_:
            seeds.comments.append((lineno, comment.strip()))
        token = body.strip()
        if not token:
            continue
        try:
            iri = expand_curie(token, pm)
        except UnknownPrefix as exc:
            exc.args = (f"line {lineno}: {exc}",)
            seeds.errors.append(exc)
            logger.warning("line %d: unknown prefix in seed %r", lineno, token)
            continue
        if iri in seen:
            msg = f"line {lineno}: duplicate seed {token}"
            seeds.warnings.append(msg)
            logger.warning(msg)
            continue
        seen.add(iri)
        seeds.terms.append(iri)
    return seeds


def emit_seed_file(terms: Iterable[str], pm: Mapping[str, str], header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [contract_iri(t, pm) for t in terms]
    return "\n".join(lines) + "\n" if lines else ""

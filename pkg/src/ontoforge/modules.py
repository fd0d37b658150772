"""Import module extraction and the import-refresh workflow."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import urllib.error
import urllib.parse
import urllib.request
from collections import defaultdict, deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import date as Date
from datetime import datetime, timezone
from pathlib import Path

from .errors import MirrorUnavailable, SeedNotFound, UnknownImportId
from .io import emit_functional, parse_functional, parse_obo, parse_seed_file
from .model import (
    CLASS,
    DC_DATE,
    DC_SOURCE,
    IAO_DEFINITION,
    OBO,
    RDFS_COMMENT,
    RDFS_LABEL,
    Annotation,
    Axiom,
    Bottom,
    ClassExpression,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    Top,
    axiom_entities,
    is_absolute_iri,
    is_logical,
    signature,
)

logger = logging.getLogger(__name__)

METHODS = ("mireot", "slme_bot", "relation")
DEFAULT_ANNOTATIONS = (RDFS_LABEL, IAO_DEFINITION)
CACHE_ENV = "ONTOFORGE_CACHE"


@dataclass
class ExtractionRequest:
    method: str
    seeds: Sequence[str]
    relations: Sequence[str] = ()
    annotations_to_copy: Sequence[str] = DEFAULT_ANNOTATIONS

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown extraction method {self.method!r}")
        if (self.method == "relation") != bool(self.relations):
            raise ValueError("relations are required for, and only allowed with, the relation method")
        self.seeds = list(self.seeds)


@dataclass
class MirrorRecord:
    import_id: str
    source_location: str
    retrieved_at: str
    content_hash: str

    def to_json(self) -> str:
        data = {"source": self.source_location, "retrieved_at": self.retrieved_at, "sha256": self.content_hash}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, import_id: str, text: str) -> MirrorRecord:
        data = json.loads(text)
        return cls(import_id, data["source"], data["retrieved_at"], data["sha256"])


@dataclass
class ExtractionResult:
    module: Ontology
    missing: list[SeedNotFound] = field(default_factory=list)


def _present(source: Ontology) -> set[str]:
    found = {iri for iri, _ in signature(source)}
    found.update(source.annotation_index)
    return found


def _check_seeds(source: Ontology, seeds: Iterable[str], missing: list | None) -> list[str]:
    present = _present(source)
    found = []
    for s in seeds:
        if s in present:
            found.append(s)
        else:
            logger.warning("seed not found in source: %s", s)
            if missing is not None:
                missing.append(SeedNotFound(s))
    return found


def _kinds(source: Ontology) -> dict[str, set[str]]:
    kinds: dict[str, set[str]] = defaultdict(set)
    for iri, kind in signature(source):
        kinds[iri].add(kind)
    return kinds


def _assemble(
    source: Ontology, logical: Iterable[Axiom], entities: Iterable[str], annotate: Iterable[str], props: Sequence[str]
) -> Ontology:
    kinds = _kinds(source)
    axioms: list[Axiom] = list(logical)
    for iri in entities:
        for kind in sorted(kinds.get(iri, ())):
            axioms.append(Declaration(kind, iri))
    wanted = set(props)
    for iri in annotate:
        for ax in source.annotation_index.get(iri, ()):
            if ax.property in wanted:
                axioms.append(ax)
    # logical axioms always carry their own declarations
    for ax in list(axioms):
        if is_logical(ax):
            axioms.extend(Declaration(kind, iri) for iri, kind in axiom_entities(ax))
    return Ontology(ontology_iri=None, prefix_map=source.prefix_map, axioms=tuple(axioms))


def _is_a_edges(source: Ontology) -> dict[str, list[SubClassOf]]:
    up: dict[str, list[SubClassOf]] = defaultdict(list)
    for ax in source.logical_axioms:
        if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named) and isinstance(ax.sup, Named):
            up[ax.sub.iri].append(ax)
    return up


def _traverse(source: Ontology, seeds: Sequence[str], relations: Sequence[str]) -> tuple[set[str], list[Axiom]]:
    """Upward is_a closure, optionally following existentials over ``relations``."""
    edges = _is_a_edges(source)
    rels = set(relations)
    if rels:
        for ax in source.logical_axioms:
            if (
                isinstance(ax, SubClassOf)
                and isinstance(ax.sub, Named)
                and isinstance(ax.sup, SomeValuesFrom)
                and ax.sup.property in rels
                and isinstance(ax.sup.filler, Named)
            ):
                edges[ax.sub.iri].append(ax)
    visited = set(seeds)
    queue = deque(seeds)
    kept: list[Axiom] = []
    while queue:
        current = queue.popleft()
        for ax in edges.get(current, ()):
            kept.append(ax)
            target = ax.sup.iri if isinstance(ax.sup, Named) else ax.sup.filler.iri
            if target not in visited:
                visited.add(target)
                queue.append(target)
    return visited, kept


def extract_mireot(source: Ontology, req: ExtractionRequest, missing: list | None = None) -> Ontology:
    seeds = _check_seeds(source, req.seeds, missing)
    classes, kept = _traverse(source, seeds, ())
    classes = sorted(classes)
    return _assemble(source, kept, classes, classes, req.annotations_to_copy)


def extract_relation(source: Ontology, req: ExtractionRequest, missing: list | None = None) -> Ontology:
    seeds = _check_seeds(source, req.seeds, missing)
    classes, kept = _traverse(source, seeds, req.relations)
    classes = sorted(classes)
    return _assemble(source, kept, classes, classes, req.annotations_to_copy)


def _in_bot(e: ClassExpression, sig: set[str]) -> bool:
    if isinstance(e, Bottom):
        return True
    if isinstance(e, Named):
        return e.iri not in sig
    if isinstance(e, IntersectionOf):
        return any(_in_bot(c, sig) for c in e.conjuncts)
    if isinstance(e, SomeValuesFrom):
        return e.property not in sig or _in_bot(e.filler, sig)
    return False


def _in_top(e: ClassExpression, sig: set[str]) -> bool:
    if isinstance(e, Top):
        return True
    if isinstance(e, IntersectionOf):
        return all(_in_top(c, sig) for c in e.conjuncts)
    return False


def bot_local(a: Axiom, sig: set[str]) -> bool:
    """Syntactic bottom-locality of a logical axiom with respect to ``sig``."""
    if isinstance(a, SubClassOf):
        return _in_bot(a.sub, sig) or _in_top(a.sup, sig)
    if isinstance(a, EquivalentClasses):
        return all(_in_bot(e, sig) for e in a.exprs)
    if isinstance(a, DisjointClasses):
        return sum(1 for e in a.exprs if _in_bot(e, sig)) >= len(a.exprs) - 1
    if isinstance(a, SubObjectPropertyOf):
        return a.sub not in sig
    return True


def extract_slme_bot(source: Ontology, req: ExtractionRequest, missing: list | None = None) -> Ontology:
    seeds = _check_seeds(source, req.seeds, missing)
    sig = set(seeds)
    remaining = list(source.logical_axioms)
    module: list[Axiom] = []
    changed = True
    while changed:
        changed = False
        still_local = []
        for ax in remaining:
            if bot_local(ax, sig):
                still_local.append(ax)
            else:
                module.append(ax)
                sig.update(iri for iri, _ in axiom_entities(ax))
                changed = True
        remaining = still_local
    kinds = _kinds(source)
    entities = sorted(iri for iri in sig if iri in kinds)
    classes = [iri for iri in entities if CLASS in kinds[iri]]
    return _assemble(source, module, entities, classes, req.annotations_to_copy)


_EXTRACTORS = {"mireot": extract_mireot, "slme_bot": extract_slme_bot, "relation": extract_relation}


def extract(source: Ontology, req: ExtractionRequest) -> ExtractionResult:
    missing: list[SeedNotFound] = []
    module = _EXTRACTORS[req.method](source, req, missing)
    return ExtractionResult(module, missing)


# import refresh


def mirror_dir(project_dir: Path) -> Path:
    override = os.environ.get(CACHE_ENV)
    return Path(override) if override else project_dir / "src" / "ontology" / "mirror"


def imports_dir(project_dir: Path) -> Path:
    return project_dir / "src" / "ontology" / "imports"


def terms_path(project_dir: Path, import_id: str) -> Path:
    return imports_dir(project_dir) / f"{import_id}_terms.txt"


def module_path(project_dir: Path, import_id: str) -> Path:
    return imports_dir(project_dir) / f"{import_id}_import.ofn"


def _mirror_suffix(source: str) -> str:
    path = urllib.parse.urlparse(source).path if "://" in source else source
    return ".obo" if path.endswith(".obo") else ".ofn"


def fetch_source(source: str, project_dir: Path, timeout: float = 60.0) -> bytes:
    """Read a source given as a local path, ``file://`` URL or ``http(s)://`` URL."""
    parsed = urllib.parse.urlparse(source)
    try:
        if parsed.scheme in ("http", "https"):
            with urllib.request.urlopen(source, timeout=timeout) as resp:  # noqa: S310
                return resp.read()
        if parsed.scheme == "file":
            return Path(urllib.request.url2pathname(parsed.path)).read_bytes()
        path = Path(source)
        if not path.is_absolute():
            path = project_dir / path
        return path.read_bytes()
    except (OSError, urllib.error.URLError, ValueError) as exc:
        raise MirrorUnavailable(f"cannot fetch {source}: {exc}") from exc


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def update_mirror(project_dir: Path, import_id: str, source: str, now: str | None = None) -> MirrorRecord:
    data = fetch_source(source, project_dir)
    digest = hashlib.sha256(data).hexdigest()
    mdir = mirror_dir(project_dir)
    meta_path = mdir / f"{import_id}.meta.json"
    mirror_path = mdir / f"{import_id}{_mirror_suffix(source)}"
    if meta_path.exists() and mirror_path.exists():
        previous = MirrorRecord.from_json(import_id, meta_path.read_text(encoding="utf-8"))
        if previous.content_hash == digest and previous.source_location == source:
            return previous
    stamp = now or datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    record = MirrorRecord(import_id, source, stamp, digest)
    _atomic_write(mirror_path, data)
    _atomic_write(meta_path, record.to_json().encode("utf-8"))
    return record


def load_mirror(project_dir: Path, import_id: str, pm=None) -> Ontology:
    mdir = mirror_dir(project_dir)
    for suffix in (".ofn", ".obo"):
        path = mdir / f"{import_id}{suffix}"
        if path.exists():
            data = path.read_bytes()
            meta = mdir / f"{import_id}.meta.json"
            if meta.exists():
                record = MirrorRecord.from_json(import_id, meta.read_text(encoding="utf-8"))
                if record.content_hash != hashlib.sha256(data).hexdigest():
                    logger.warning("mirror %s does not match its recorded hash", path)
            text = data.decode("utf-8")
            if suffix == ".obo":
                return parse_obo(text, pm, source=str(path))
            return parse_functional(text, source=str(path))
    raise MirrorUnavailable(f"no mirror for import {import_id!r} in {mdir}")


def refresh_import(
    project_dir: str | Path,
    import_id: str,
    cfg,
    date: Date | str | None = None,
    download: bool = True,
    extra_seeds: Iterable[str] = (),
) -> Path:
    """Refresh one import module.

    ``download=False`` reuses the cached mirror when present. ``extra_seeds``
    are terms the project already references; those found in the source are
    added to the seed file's terms.
    """
    project_dir = Path(project_dir)
    imp = cfg.import_by_id(import_id)
    if imp is None:
        raise UnknownImportId(f"import {import_id!r} is not configured")
    pm = cfg.prefix_map()
    has_mirror = any((mirror_dir(project_dir) / f"{import_id}{s}").exists() for s in (".ofn", ".obo"))
    if download or not has_mirror:
        try:
            update_mirror(project_dir, import_id, imp.source)
        except MirrorUnavailable:
            if not has_mirror:
                raise
            logger.warning("using cached mirror for %s: source unreachable", import_id)
    source = load_mirror(project_dir, import_id, pm)

    tpath = terms_path(project_dir, import_id)
    seeds_text = tpath.read_text(encoding="utf-8") if tpath.exists() else ""
    seed_pm = pm.merged(source.prefix_map)
    seeds = parse_seed_file(seeds_text, seed_pm)
    for err in seeds.errors:
        logger.warning("%s: %s", tpath, err)

    present = _present(source)
    terms = list(seeds.terms) + [s for s in extra_seeds if s in present and s not in seeds.terms]
    req = ExtractionRequest(imp.method, terms, imp.relations)
    result = extract(source, req)
    stamped = stamp_module(result.module, cfg, imp, date)
    out = module_path(project_dir, import_id)
    _atomic_write(out, emit_functional(stamped).encode("utf-8"))
    return out


def stamp_module(module: Ontology, cfg, imp, date: Date | str | None = None) -> Ontology:
    day = date.isoformat() if isinstance(date, Date) else (date or Date.today().isoformat())
    source_value = imp.source if is_absolute_iri(imp.source) else Literal(imp.source)
    annotations = (
        Annotation(DC_SOURCE, source_value),
        Annotation(RDFS_COMMENT, Literal(f"extracted with method {imp.method}")),
        Annotation(DC_DATE, Literal(day)),
    )
    return module.replace(
        ontology_iri=f"{OBO}{cfg.id}/imports/{imp.id}_import.owl",
        prefix_map=cfg.prefix_map().merged(module.prefix_map),
        ontology_annotations=annotations,
    )


def refresh_all(
    project_dir: str | Path, cfg, date=None, download: bool = True, extra_seeds: Iterable[str] = ()
) -> list[Path]:
    extra = list(extra_seeds)
    return [refresh_import(project_dir, imp.id, cfg, date, download, extra) for imp in cfg.imports]


__all__ = [
    "ExtractionRequest",
    "ExtractionResult",
    "MirrorRecord",
    "bot_local",
    "extract",
    "extract_mireot",
    "extract_relation",
    "extract_slme_bot",
    "load_mirror",
    "refresh_all",
    "refresh_import",
    "update_mirror",
]

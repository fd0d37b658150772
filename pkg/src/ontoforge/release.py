"""The release pipeline: templates, imports, products, QC."""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from datetime import date as Date
from pathlib import Path

from .config import FORMATS, PRODUCTS, ProjectConfig, load_config
from .errors import (
    IncoherentOntology,
    Inexpressible,
    NotAProject,
    OntoforgeError,
    QCGateFailed,
    ReleaseStepError,
)
from .io import load_ontology, serialize
from .model import (
    OBO,
    OWL_VERSION_INFO,
    Annotation,
    AnnotationAssertion,
    Axiom,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    declarations_for,
    is_native,
    merge,
    native_axioms,
    signature,
)
from .modules import module_path, refresh_import
from .qc import Report, emit_report_tsv, gate, run_checks
from .reasoner import THING, Taxonomy, assert_inferred, classify, transitive_reduction
from .templates import compile_project_templates

logger = logging.getLogger(__name__)

DEFAULT_VERSION_TEMPLATE = OBO + "{id}/releases/{date}/{id}-{product}.owl"
EXTENSIONS = {"ofn": "ofn", "obo": "obo", "json": "json"}
MANIFEST_HEADER = "filename\tsha256\tproduct\tformat"


@dataclass
class ReleasePlan:
    products: list[str] = field(default_factory=lambda: list(PRODUCTS))
    formats: list[str] = field(default_factory=lambda: list(FORMATS))
    release_date: Date = field(default_factory=Date.today)
    base_iri_prefixes: list[str] = field(default_factory=list)
    version_iri_template: str = DEFAULT_VERSION_TEMPLATE
    pin_imports: bool = False
    force: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.release_date, str):
            self.release_date = Date.fromisoformat(self.release_date)
        if not self.products or not self.formats:
            raise ValueError("a release needs at least one product and one format")
        for p in self.products:
            if p not in PRODUCTS:
                raise ValueError(f"unknown product {p!r}")
        for f in self.formats:
            if f not in FORMATS:
                raise ValueError(f"unknown format {f!r}")
        # canonical order, no duplicates
        self.products = [p for p in PRODUCTS if p in self.products]
        self.formats = [f for f in FORMATS if f in self.formats]


def plan_from_config(cfg: ProjectConfig, **overrides) -> ReleasePlan:
    values = {
        "products": list(cfg.release_products),
        "formats": list(cfg.export_formats),
        "base_iri_prefixes": [cfg.base_iri],
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ReleasePlan(**values)


@dataclass
class ManifestEntry:
    filename: str
    sha256: str
    product: str
    format: str


@dataclass
class ReleaseArtifacts:
    files: dict[tuple[str, str], bytes]
    qc_report: Report
    manifest: list[ManifestEntry]
    notes: list[str] = field(default_factory=list)


def release_filename(ontology_id: str, product: str, fmt: str) -> str:
    stem = ontology_id if product == "full" else f"{ontology_id}-{product}"
    return f"{stem}.{EXTENSIONS[fmt]}"


# products


def build_base(merged: Ontology, native_source: Ontology, prefixes) -> Ontology:
    """Native axioms of the source plus the declarations they need."""
    del merged  # the base never looks past the native source
    if not prefixes:
        raise ValueError("base product needs at least one base IRI prefix")
    native = native_axioms(native_source, prefixes)
    return native_source.replace(
        version_iri=None,
        imports=(),
        axioms=tuple(native) + tuple(declarations_for(native)),
    )


def build_full(merged: Ontology, t: Taxonomy) -> Ontology:
    return assert_inferred(merged, t).replace(imports=())


def _existentials(expr) -> list[SomeValuesFrom]:
    if isinstance(expr, SomeValuesFrom) and isinstance(expr.filler, Named):
        return [expr]
    if isinstance(expr, IntersectionOf):
        return [c for c in expr.conjuncts if isinstance(c, SomeValuesFrom) and isinstance(c.filler, Named)]
    return []


def build_simple(merged: Ontology, t: Taxonomy, prefixes) -> Ontology:
    """Named hierarchy of native classes plus their named-filler existentials, reduced."""
    if t.unsatisfiable:
        raise IncoherentOntology(sorted(t.unsatisfiable))
    native = [c for c in t.named() if is_native(c, prefixes)]
    native_set = set(native)
    axioms: list[Axiom] = []
    for a in native:
        for b in t.direct_supers(a):
            if b != THING:
                axioms.append(SubClassOf(Named(a), Named(b)))
    for ax in merged.logical_axioms:
        if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named) and ax.sub.iri in native_set:
            subject, sources = ax.sub.iri, [ax.sup]
        elif isinstance(ax, EquivalentClasses) and isinstance(ax.exprs[0], Named) and ax.exprs[0].iri in native_set:
            subject, sources = ax.exprs[0].iri, list(ax.exprs[1:])
        else:
            continue
        for expr in sources:
            for some in _existentials(expr):
                axioms.append(SubClassOf(Named(subject), some))
    for ax in merged.axioms:
        if isinstance(ax, AnnotationAssertion) and ax.subject in native_set:
            axioms.append(ax)
    axioms += declarations_for(axioms)
    simple = merged.replace(imports=(), version_iri=None, axioms=tuple(axioms))
    return transitive_reduction(simple, classify(simple))


def stamp_version(o: Ontology, plan: ReleasePlan, product: str, ontology_id: str) -> Ontology:
    day = plan.release_date.isoformat()
    version_iri = plan.version_iri_template.format(id=ontology_id, date=day, product=product)
    annotations = [a for a in o.ontology_annotations if a.property != OWL_VERSION_INFO]
    annotations.append(Annotation(OWL_VERSION_INFO, Literal(day)))
    return o.replace(version_iri=version_iri, ontology_annotations=tuple(annotations))


# pipeline


def edit_path(project_dir: Path, cfg: ProjectConfig) -> Path:
    return project_dir / cfg.edit_file


def load_project(project_dir: str | Path) -> ProjectConfig:
    path = Path(project_dir) / "project.yaml"
    if not path.exists():
        raise NotAProject(f"{project_dir}: no project.yaml")
    return load_config(path)


def load_import_modules(project_dir: Path, cfg: ProjectConfig) -> list[Ontology]:
    modules = []
    for imp in cfg.imports:
        path = module_path(project_dir, imp.id)
        if path.exists():
            modules.append(load_ontology(path))
        else:
            logger.warning("import module %s is missing; run refresh-imports", path)
    return modules


def working_ontology(project_dir: Path, cfg: ProjectConfig, labels: Ontology | None = None) -> Ontology:
    """Edit file with compiled templates merged in."""
    edit = load_ontology(edit_path(project_dir, cfg), cfg.prefix_map())
    pm = cfg.prefix_map().merged(edit.prefix_map)
    lookup = labels if labels is not None else edit
    templated = compile_project_templates(project_dir, pm, lookup)
    return edit.with_axioms(edit.axioms + tuple(templated))


def _step(n: int, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (QCGateFailed, ReleaseStepError):
        raise
    except (OntoforgeError, OSError) as exc:
        raise ReleaseStepError(n, exc) from exc


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def emit_manifest(entries: list[ManifestEntry], notes: list[str]) -> str:
    lines = [MANIFEST_HEADER]
    lines += [f"{e.filename}\t{e.sha256}\t{e.product}\t{e.format}" for e in sorted(entries, key=lambda e: e.filename)]
    lines += [f"# {n}" for n in notes]
    return "\n".join(lines) + "\n"


def _write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def prepare_release(
    project_dir: str | Path, plan: ReleasePlan, cfg: ProjectConfig | None = None, write: bool = True
) -> ReleaseArtifacts:
    project_dir = Path(project_dir)
    cfg = cfg or load_project(project_dir)
    prefixes = plan.base_iri_prefixes or [cfg.base_iri]
    out_dir = project_dir / "release"

    # 1. templates
    def step_templates() -> Ontology:
        edit = load_ontology(edit_path(project_dir, cfg), cfg.prefix_map())
        labels = merge([edit, *load_import_modules(project_dir, cfg)])
        return working_ontology(project_dir, cfg, labels)

    working = _step(1, step_templates)

    # 2. imports
    def step_imports() -> None:
        extra = [iri for iri in _referenced(working) if not is_native(iri, prefixes)]
        for imp in cfg.imports:
            refresh_import(project_dir, imp.id, cfg, plan.release_date, extra_seeds=extra)

    if not plan.pin_imports:
        _step(2, step_imports)

    # 3. merge, classify, products
    merged = _step(3, lambda: merge([working, *load_import_modules(project_dir, cfg)]))
    t = _step(3, classify, merged)
    qc_cfg = cfg.check_config()
    qc_cfg.base_iri_prefixes = list(prefixes)

    if t.unsatisfiable:
        if plan.force:
            raise ReleaseStepError(3, IncoherentOntology(sorted(t.unsatisfiable)))
        report = run_checks(merged, t, qc_cfg)
        if write:
            _write(out_dir / "qc-report.tsv", emit_report_tsv(report).encode("utf-8"))
        raise QCGateFailed(report)

    def step_products():
        built = {}
        for product in plan.products:
            if product == "base":
                o = build_base(merged, working, prefixes)
            elif product == "full":
                o = build_full(merged, t)
            else:
                o = build_simple(merged, t, prefixes)
            built[product] = stamp_version(o, plan, product, cfg.id)
        return built

    products = _step(3, step_products)
    files: dict[tuple[str, str], bytes] = {}
    notes: list[str] = []
    manifest: list[ManifestEntry] = []
    for product, o in products.items():
        for fmt in plan.formats:
            name = release_filename(cfg.id, product, fmt)
            try:
                data = serialize(o, fmt).encode("utf-8")
            except Inexpressible as exc:
                notes.append(f"skipped {name}: {len(exc.axioms)} axiom(s) not expressible in {fmt}")
                logger.warning("skipping %s: %s", name, exc)
                continue
            files[(product, fmt)] = data
            manifest.append(ManifestEntry(name, _digest(data), product, fmt))

    # 4. QC on the full product
    full = products.get("full") or build_full(merged, t)
    report = _step(4, run_checks, full, t, qc_cfg)
    report_bytes = emit_report_tsv(report).encode("utf-8")
    if write:
        _write(out_dir / "qc-report.tsv", report_bytes)
    if not gate(report) and not plan.force:
        raise QCGateFailed(report)

    artifacts = ReleaseArtifacts(files, report, sorted(manifest, key=lambda e: e.filename), notes)
    if write:
        for (product, fmt), data in files.items():
            _write(out_dir / release_filename(cfg.id, product, fmt), data)
        _write(out_dir / "manifest.tsv", emit_manifest(artifacts.manifest, notes).encode("utf-8"))
    return artifacts


def _referenced(o: Ontology) -> list[str]:
    return sorted({iri for iri, _ in signature(o)})


__all__ = [
    "DEFAULT_VERSION_TEMPLATE",
    "ManifestEntry",
    "ReleaseArtifacts",
    "ReleasePlan",
    "build_base",
    "build_full",
    "build_simple",
    "emit_manifest",
    "load_import_modules",
    "load_project",
    "plan_from_config",
    "prepare_release",
    "release_filename",
    "stamp_version",
    "working_ontology",
]

"""Project seeding, managed-file updates and generated documentation."""

from __future__ import annotations

import logging
import os
from collections.abc import Callable
from dataclasses import dataclass, field
from datetime import date as Date
from pathlib import Path

from .config import ProjectConfig, to_yaml
from .errors import NotAProject, TargetNotEmpty
from .io import emit_functional, emit_seed_file
from .model import DC_LICENSE, DC_TITLE, Annotation, Literal, Ontology
from .release import plan_from_config, prepare_release

logger = logging.getLogger(__name__)

MARKER = "GENERATED - do not edit"
HASH_MARKER = f"# {MARKER}"
MD_MARKER = f"<!-- {MARKER} -->"
DIRECTORIES = ("src/patterns/data", "src/templates", "src/ontology/imports")


@dataclass(frozen=True)
class ManagedFile:
    path: str
    generator: str
    managed: bool


@dataclass
class ManagedFileSet:
    entries: list[ManagedFile] = field(default_factory=list)

    def paths(self) -> list[str]:
        return [e.path for e in self.entries]


@dataclass
class ChangeSummary:
    added: list[str] = field(default_factory=list)
    updated: list[str] = field(default_factory=list)
    unchanged: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def changes(self) -> int:
        return len(self.added) + len(self.updated)

    def lines(self) -> list[str]:
        out = []
        for status in ("added", "updated", "unchanged", "skipped"):
            out += [f"{status}\t{p}" for p in getattr(self, status)]
        return out


def _marker_for(path: str) -> str:
    return MD_MARKER if path.endswith(".md") else HASH_MARKER


def has_marker(text: str, path: str) -> bool:
    first = text.split("\n", 1)[0]
    return _marker_for(path) in first


# generators


def edit_ontology(cfg: ProjectConfig) -> str:
    o = Ontology(
        ontology_iri=cfg.ontology_iri,
        prefix_map=cfg.prefix_map(),
        ontology_annotations=(
            Annotation(DC_TITLE, Literal(cfg.title)),
            Annotation(DC_LICENSE, cfg.license),
        ),
    )
    return emit_functional(o)


def workflow_mk(cfg: ProjectConfig) -> str:
    return f"""{HASH_MARKER}
# Workflow targets for {cfg.id}. Each target calls the ontoforge CLI.
ONTOFORGE ?= ontoforge

.PHONY: prepare_release test refresh-imports clean update_repo

prepare_release:
\t$(ONTOFORGE) release

test:
\t$(ONTOFORGE) qc --output reports/qc-report.tsv

refresh-imports:
\t$(ONTOFORGE) refresh-imports

clean:
\t$(ONTOFORGE) clean

update_repo:
\t$(ONTOFORGE) update-repo
"""


def run_sh(cfg: ProjectConfig) -> str:
    return f"""{HASH_MARKER}
# Usage: sh run.sh make <target>   (targets are listed in workflow.mk)
set -e
cd "$(dirname "$0")"
if [ "$1" = "make" ]; then
  shift
  exec make -f workflow.mk "$@"
fi
exec "$@"
"""


def ci_stub(cfg: ProjectConfig) -> str:
    return f"""{HASH_MARKER}
# Inert CI description for {cfg.id}; adapt to your CI provider.
name: qc
on: [push, pull_request]
jobs:
  qc:
    steps:
      - run: sh run.sh make test
"""


def readme(cfg: ProjectConfig) -> str:
    return f"""{MD_MARKER}
# {cfg.title}

Source repository for the `{cfg.id}` ontology.

- Edit file: `{cfg.edit_file}`
- Releases: `release/`
- Workflow documentation: `docs/index.md`

Run `sh run.sh make prepare_release` to build a release and `sh run.sh make test` to run the checks.
"""


def generate_docs(cfg: ProjectConfig) -> list[tuple[str, bytes]]:
    edit = cfg.edit_file
    products = ", ".join(f"`{p}`" for p in cfg.release_products)
    formats = ", ".join(f"`{f}`" for f in cfg.export_formats)
    index = f"""{MD_MARKER}
# {cfg.title} workflows

These pages describe how to work on `{cfg.id}`.

- [Editing the ontology](editors-workflow.md)
- [Making a release](release.md)
- [Managing imports](imports.md)

The ontology is edited in `{edit}`. Create a git repository for this directory yourself; the toolkit does not run version control.
"""
    editors = f"""{MD_MARKER}
# Editing {cfg.id}

1. Open `{edit}` and make your changes. Tabular content goes into `src/templates/*.tsv` or, for design patterns, `src/patterns/*.pattern.yaml` with filler tables in `src/patterns/data/`.
2. Run the checks with `sh run.sh make test`. The report is written to `reports/qc-report.tsv`.
3. If a check fails, read the report, fix `{edit}` and run the checks again.
4. Commit your changes once the checks pass.
"""
    release = f"""{MD_MARKER}
# Releasing {cfg.id}

Run `sh run.sh make prepare_release`. The workflow:

1. compiles templates and patterns and merges them with `{edit}`;
2. refreshes the import modules in `src/ontology/imports/`;
3. merges imports, classifies, and builds the products {products} in the formats {formats};
4. runs the checks on the full product and writes `release/qc-report.tsv`.

Products land in `release/` as `{cfg.id}.<ext>` (full), `{cfg.id}-base.<ext>` and `{cfg.id}-simple.<ext>`, with checksums in `release/manifest.tsv`. Pass `--date YYYY-MM-DD` for a reproducible build.
"""
    if cfg.imports:
        rows = "\n".join(
            f"| `{imp.id}` | `{imp.source}` | `{imp.method}` | `src/ontology/imports/{imp.id}_terms.txt` |"
            for imp in cfg.imports
        )
        body = f"""| import | source | method | term file |
|---|---|---|---|
{rows}

Add the terms you need to the term file, one CURIE per line, then run `sh run.sh make refresh-imports`. Modules are written to `src/ontology/imports/<id>_import.ofn`.
"""
    else:
        body = "No imports are configured for this ontology. Add entries under `imports:` in `project.yaml` and run `update-repo`.\n"
    imports = f"""{MD_MARKER}
# Imports for {cfg.id}

{body}"""
    docs = [
        ("docs/index.md", index),
        ("docs/editors-workflow.md", editors),
        ("docs/release.md", release),
        ("docs/imports.md", imports),
    ]
    return [(path, text.encode("utf-8")) for path, text in docs]


def _managed_generators(cfg: ProjectConfig) -> list[tuple[str, str, Callable[[], bytes]]]:
    files = [
        ("workflow.mk", "workflow", lambda: workflow_mk(cfg).encode("utf-8")),
        ("run.sh", "wrapper", lambda: run_sh(cfg).encode("utf-8")),
        ("ci/qc.yml", "ci", lambda: ci_stub(cfg).encode("utf-8")),
        ("README.md", "readme", lambda: readme(cfg).encode("utf-8")),
    ]
    for path, data in generate_docs(cfg):
        files.append((path, "docs", lambda data=data: data))
    return files


def _unmanaged_generators(cfg: ProjectConfig) -> list[tuple[str, str, Callable[[], bytes]]]:
    files = [
        ("project.yaml", "config", lambda: to_yaml(cfg).encode("utf-8")),
        (cfg.edit_file, "edit", lambda: edit_ontology(cfg).encode("utf-8")),
    ]
    for imp in cfg.imports:
        header = f"terms to import from {imp.id}, one CURIE or IRI per line"
        files.append(
            (
                f"src/ontology/imports/{imp.id}_terms.txt",
                "seeds",
                lambda header=header: emit_seed_file([], {}, header).encode("utf-8"),
            )
        )
    return files


def managed_file_set(cfg: ProjectConfig) -> ManagedFileSet:
    entries = [ManagedFile(p, g, True) for p, g, _ in _managed_generators(cfg)]
    entries += [ManagedFile(p, g, False) for p, g, _ in _unmanaged_generators(cfg)]
    return ManagedFileSet(sorted(entries, key=lambda e: e.path))


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def seed_repo(
    cfg: ProjectConfig, target: str | Path, release: bool = True, release_date: Date | None = None
) -> ManagedFileSet:
    target = Path(target)
    if target.exists() and any(target.iterdir()):
        raise TargetNotEmpty(f"{target} is not empty")
    target.mkdir(parents=True, exist_ok=True)
    for d in DIRECTORIES:
        (target / d).mkdir(parents=True, exist_ok=True)
    for path, _, make in _managed_generators(cfg) + _unmanaged_generators(cfg):
        _write_atomic(target / path, make())
    if release:
        plan = plan_from_config(cfg, release_date=release_date, pin_imports=True)
        prepare_release(target, plan, cfg)
    return managed_file_set(cfg)


def update_repo(cfg: ProjectConfig, target: str | Path) -> ChangeSummary:
    target = Path(target)
    if not (target / "project.yaml").exists():
        raise NotAProject(f"{target}: no project.yaml")
    summary = ChangeSummary()
    for d in DIRECTORIES:
        (target / d).mkdir(parents=True, exist_ok=True)
    for path, _, make in sorted(_managed_generators(cfg)):
        dest = target / path
        data = make()
        if not dest.exists():
            _write_atomic(dest, data)
            summary.added.append(path)
            continue
        current = dest.read_bytes()
        if not has_marker(current.decode("utf-8", errors="replace"), path):
            logger.warning("%s has no '%s' marker; leaving it alone", path, MARKER)
            summary.skipped.append(path)
        elif current == data:
            summary.unchanged.append(path)
        else:
            _write_atomic(dest, data)
            summary.updated.append(path)
    for path, _, make in sorted(_unmanaged_generators(cfg)):
        dest = target / path
        if dest.exists():
            summary.unchanged.append(path)
        else:
            _write_atomic(dest, make())
            summary.added.append(path)
    for name in ("added", "updated", "unchanged", "skipped"):
        getattr(summary, name).sort()
    return summary


__all__ = [
    "ChangeSummary",
    "MARKER",
    "ManagedFile",
    "ManagedFileSet",
    "generate_docs",
    "has_marker",
    "managed_file_set",
    "seed_repo",
    "update_repo",
]

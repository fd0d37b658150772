"""Quality-control checks and the TSV report."""

from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import MissingTaxonomy
from .model import (
    CLASS,
    DC_CONTRIBUTOR,
    DC_LICENSE,
    HAS_DBXREF,
    IAO_DEFINITION,
    OBJECT_PROPERTY,
    OWL_NOTHING,
    OWL_THING,
    RDFS_LABEL,
    AnnotationAssertion,
    Literal,
    Ontology,
    axiom_entities,
    is_native,
)
from .reasoner import Taxonomy, unintended_equivalences, unsatisfiable_classes

SEVERITIES = ("ERROR", "WARN", "INFO")
SEVERITY_RANK = {s: i for i, s in enumerate(SEVERITIES)}

# id -> (default severity, needs taxonomy, message)
BUILTIN_CHECKS: dict[str, tuple[str, bool, str]] = {
    "missing_label": ("ERROR", False, "non-obsolete term has no label"),
    "duplicate_label": ("ERROR", False, "label is shared with another term"),
    "trailing_whitespace": ("ERROR", False, "annotation value has leading or trailing whitespace"),
    "xref_syntax": ("ERROR", False, "cross-reference is not a CURIE"),
    "missing_license": ("ERROR", False, "ontology has no license annotation"),
    "missing_definition": ("WARN", False, "term has no definition"),
    "dangling_reference": ("ERROR", False, "entity is used in a logical axiom but never declared"),
    "incoherent_class": ("ERROR", True, "class is unsatisfiable"),
    "unintended_equivalence": ("ERROR", True, "classes are inferred equivalent without an asserted equivalence"),
    "missing_contributor_orcid": ("WARN", False, "term lacks a valid ORCID contributor"),
}
LOGIC_CHECKS = frozenset(k for k, (_, logic, _) in BUILTIN_CHECKS.items() if logic)

XREF_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*:\S+$")
ORCID_PATTERN = re.compile(r"^https://orcid\.org/(\d{4})-(\d{4})-(\d{4})-(\d{3}[\dX])$")


class ReportRow(NamedTuple):
    check_id: str
    severity: str
    subject: str
    message: str
    value: str = ""

    def sort_key(self) -> tuple:
        return (SEVERITY_RANK[self.severity], self.check_id, self.subject, self.value, self.message)


@dataclass
class Report:
    rows: list[ReportRow] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.rows = sorted(self.rows, key=ReportRow.sort_key)

    @property
    def summary(self) -> dict[str, int]:
        counts = {s: 0 for s in SEVERITIES}
        for row in self.rows:
            counts[row.severity] += 1
        return counts


@dataclass
class CustomCheck:
    """Structural anti-pattern: subjects of ``kind`` that lack (``required``)
    or carry (``forbidden``) a value of ``property`` matching ``pattern``."""

    id: str
    severity: str
    property: str
    mode: str = "required"
    kind: str = "class"
    pattern: str | None = None
    native_only: bool = True
    skip_obsolete: bool = True
    message: str = ""

    def __post_init__(self) -> None:
        if self.severity not in SEVERITIES:
            raise ValueError(f"custom check {self.id}: unknown severity {self.severity!r}")
        if self.mode not in ("required", "forbidden"):
            raise ValueError(f"custom check {self.id}: mode must be 'required' or 'forbidden'")
        if self.kind not in ("class", "property", "any"):
            raise ValueError(f"custom check {self.id}: kind must be class, property or any")
        if self.pattern is not None:
            re.compile(self.pattern)


@dataclass
class CheckConfig:
    enabled: list[str] = field(default_factory=list)
    disabled: list[str] = field(default_factory=list)
    severity_overrides: dict[str, str] = field(default_factory=dict)
    base_iri_prefixes: list[str] = field(default_factory=list)
    custom_checks: list[CustomCheck] = field(default_factory=list)

    def __post_init__(self) -> None:
        both = set(self.enabled) & set(self.disabled)
        if both:
            raise ValueError(f"checks both enabled and disabled: {sorted(both)}")
        ids = [c.id for c in self.custom_checks]
        clash = (set(ids) & set(BUILTIN_CHECKS)) | {i for i in ids if ids.count(i) > 1}
        if clash:
            raise ValueError(f"custom check ids must be unique: {sorted(clash)}")
        for check, sev in self.severity_overrides.items():
            if sev not in SEVERITIES:
                raise ValueError(f"unknown severity {sev!r} for {check}")

    def active_builtins(self) -> list[str]:
        base = list(self.enabled) if self.enabled else list(BUILTIN_CHECKS)
        return [c for c in base if c in BUILTIN_CHECKS and c not in self.disabled]

    def active_custom(self) -> list[CustomCheck]:
        chosen = set(self.enabled)
        return [
            c for c in self.custom_checks if c.id not in self.disabled and (not chosen or c.id in chosen)
        ]


def validate_orcid(value: str) -> bool:
    m = ORCID_PATTERN.match(value)
    if not m:
        return False
    digits = "".join(m.groups())
    return orcid_check_char(digits[:15]) == digits[15]


def orcid_check_char(body: str) -> str:
    """ISO 7064 MOD 11-2 check character for a 15-digit body."""
    total = 0
    for ch in body:
        total = (total + int(ch)) * 2
    result = (12 - total % 11) % 11
    return "X" if result == 10 else str(result)


def _text(value) -> str:
    return value.lexical if isinstance(value, Literal) else str(value)


class _Checker:
    def __init__(self, o: Ontology, t: Taxonomy | None, cfg: CheckConfig) -> None:
        self.o = o
        self.t = t
        self.cfg = cfg
        self.prefixes = cfg.base_iri_prefixes
        self.classes = sorted(iri for iri, kinds in o.declared.items() if CLASS in kinds)
        self.properties = sorted(iri for iri, kinds in o.declared.items() if OBJECT_PROPERTY in kinds)

    def native(self, iri: str) -> bool:
        # no configured prefixes: everything counts as native
        return not self.prefixes or is_native(iri, self.prefixes)

    def native_classes(self) -> list[str]:
        return [c for c in self.classes if self.native(c)]

    def missing_label(self):
        for c in self.native_classes():
            if not self.o.is_obsolete(c) and not self.o.annotation_values(c, RDFS_LABEL):
                yield c, ""

    def duplicate_label(self):
        by_label = defaultdict(set)
        for c in self.native_classes():
            for value in self.o.annotation_values(c, RDFS_LABEL):
                by_label[_text(value)].add(c)
        for label, subjects in by_label.items():
            if len(subjects) > 1:
                for s in subjects:
                    yield s, label

    def trailing_whitespace(self):
        for ax in self.o.axioms:
            if isinstance(ax, AnnotationAssertion):
                values = [(ax.subject, ax.value)] + [(ax.subject, a.value) for a in ax.annotations]
                for subject, value in values:
                    if isinstance(value, Literal) and value.lexical != value.lexical.strip():
                        yield subject, value.lexical
        for ann in self.o.ontology_annotations:
            if isinstance(ann.value, Literal) and ann.value.lexical != ann.value.lexical.strip():
                yield self.o.ontology_iri or "-", ann.value.lexical

    def xref_syntax(self):
        for ax in self.o.axioms:
            if not isinstance(ax, AnnotationAssertion):
                continue
            refs = [ax.value] if ax.property == HAS_DBXREF else []
            refs += [a.value for a in ax.annotations if a.property == HAS_DBXREF]
            for ref in refs:
                text = _text(ref)
                if not XREF_PATTERN.match(text):
                    yield ax.subject, text

    def missing_license(self):
        if not any(a.property == DC_LICENSE for a in self.o.ontology_annotations):
            yield self.o.ontology_iri or "-", ""

    def missing_definition(self):
        for c in self.native_classes():
            if not self.o.annotation_values(c, IAO_DEFINITION):
                yield c, ""

    def dangling_reference(self):
        declared = self.o.declared
        seen = set()
        for ax in self.o.logical_axioms:
            for iri, kind in axiom_entities(ax):
                if iri in (OWL_THING, OWL_NOTHING) or (iri, kind) in seen:
                    continue
                seen.add((iri, kind))
                if kind not in declared.get(iri, ()):
                    yield iri, kind

    def incoherent_class(self):
        for c in unsatisfiable_classes(self.t):
            yield c, ""

    def unintended_equivalence(self):
        for a, b in unintended_equivalences(self.t, self.o):
            yield a, b

    def missing_contributor_orcid(self):
        for c in self.native_classes():
            if self.o.is_obsolete(c):
                continue
            values = [_text(v) for v in self.o.annotation_values(c, DC_CONTRIBUTOR)]
            if not values:
                yield c, ""
            for v in values:
                if not validate_orcid(v):
                    yield c, v

    def custom(self, check: CustomCheck):
        if check.kind == "class":
            subjects = self.classes
        elif check.kind == "property":
            subjects = self.properties
        else:
            subjects = sorted(set(self.classes) | set(self.properties))
        pattern = re.compile(check.pattern) if check.pattern is not None else None
        for s in subjects:
            if check.native_only and not self.native(s):
                continue
            if check.skip_obsolete and self.o.is_obsolete(s):
                continue
            values = [_text(v) for v in self.o.annotation_values(s, check.property)]
            matching = [v for v in values if pattern is None or pattern.search(v)]
            if check.mode == "required" and not matching:
                yield s, values[0] if values else ""
            elif check.mode == "forbidden":
                for v in matching:
                    yield s, v


def run_checks(o: Ontology, t: Taxonomy | None, cfg: CheckConfig) -> Report:
    builtins = cfg.active_builtins()
    needs_logic = [c for c in builtins if c in LOGIC_CHECKS]
    if needs_logic and t is None:
        raise MissingTaxonomy(f"checks {needs_logic} need a taxonomy")
    checker = _Checker(o, t, cfg)
    rows = []
    for check_id in builtins:
        severity, _, message = BUILTIN_CHECKS[check_id]
        severity = cfg.severity_overrides.get(check_id, severity)
        for subject, value in getattr(checker, check_id)():
            rows.append(ReportRow(check_id, severity, subject, message, value))
    for check in cfg.active_custom():
        severity = cfg.severity_overrides.get(check.id, check.severity)
        for subject, value in checker.custom(check):
            message = (check.message or f"{check.mode} {check.property}").format(subject=subject, value=value)
            rows.append(ReportRow(check.id, severity, subject, message, value))
    return Report(rows)


REPORT_HEADER = ("Level", "Rule", "Subject", "Value", "Message")


def _cell(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _uncell(text: str) -> str:
    out, i = [], 0
    table = {"t": "\t", "n": "\n", "r": "\r", "\\": "\\"}
    while i < len(text):
        if text[i] == "\\" and i + 1 < len(text):
            out.append(table.get(text[i + 1], text[i + 1]))
            i += 2
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def emit_report_tsv(r: Report) -> str:
    lines = ["\t".join(REPORT_HEADER)]
    for row in sorted(r.rows, key=ReportRow.sort_key):
        lines.append(
            "\t".join(_cell(x) for x in (row.severity, row.check_id, row.subject, row.value, row.message))
        )
    return "\n".join(lines) + "\n"


def parse_report_tsv(text: str) -> Report:
    # cells escape their own line breaks; a raw \r can only come from CRLF files
    lines = [line.removesuffix("\r") for line in text.split("\n")]
    if not lines or tuple(lines[0].split("\t")) != REPORT_HEADER:
        raise ValueError("not a QC report: bad header")
    rows = []
    for n, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != 5:
            raise ValueError(f"line {n}: expected 5 columns, found {len(cells)}")
        level, rule, subject, value, message = (_uncell(c) for c in cells)
        if level not in SEVERITY_RANK:
            raise ValueError(f"line {n}: unknown level {level!r}")
        rows.append(ReportRow(rule, level, subject, message, value))
    return Report(rows)


def filter_report(r: Report, min_severity: str) -> Report:
    limit = SEVERITY_RANK[min_severity]
    return Report([row for row in r.rows if SEVERITY_RANK[row.severity] <= limit])


def gate(r: Report) -> bool:
    """True when the report passes (no ERROR rows)."""
    return not any(row.severity == "ERROR" for row in r.rows)


def check_config_from_mapping(
    data: Mapping | None, base_iri_prefixes: Sequence[str] = ()
) -> CheckConfig:
    data = dict(data or {})
    customs = [CustomCheck(**c) for c in data.get("custom", []) or []]
    return CheckConfig(
        enabled=list(data.get("enabled", []) or []),
        disabled=list(data.get("disabled", []) or []),
        severity_overrides=dict(data.get("severity_overrides", {}) or {}),
        base_iri_prefixes=list(base_iri_prefixes),
        custom_checks=customs,
    )


def unknown_check_ids(ids: Iterable[str], customs: Iterable[CustomCheck] = ()) -> list[str]:
    known = set(BUILTIN_CHECKS) | {c.id for c in customs}
    return sorted(set(ids) - known)


__all__ = [
    "BUILTIN_CHECKS",
    "CheckConfig",
    "CustomCheck",
    "Report",
    "ReportRow",
    "check_config_from_mapping",
    "emit_report_tsv",
    "filter_report",
    "gate",
    "orcid_check_char",
    "parse_report_tsv",
    "run_checks",
    "validate_orcid",
]

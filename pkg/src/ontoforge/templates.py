"""Compile tabular curation content into axioms.

Two input styles are supported: design patterns (YAML pattern + TSV filler
table) and column-header templates where row 2 holds a mini-language string
per column.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import (
    ExpressionSyntaxError,
    PatternError,
    TemplateError,
    UnboundVariable,
    UnknownPrefix,
    UnknownTemplateString,
)
from .model import (
    CLASS,
    IAO_DEFINITION,
    RDFS_LABEL,
    Annotation,
    AnnotationAssertion,
    Axiom,
    ClassExpression,
    Declaration,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    axiom_key,
    contract_iri,
    dedup_axioms,
    expand_curie,
)

logger = logging.getLogger(__name__)

_SLOT = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")
_TOKEN = re.compile(
    r"\s*(?:(?P<paren>[()])|(?P<iri><[^>\s]*>)|(?P<quoted>'[^']*')|(?P<slot>\{[A-Za-z_][A-Za-z0-9_]*\})"
    r"|(?P<word>[^\s()'{}<>]+))"
)


# expression mini-grammar: conj := unit ("and" unit)* ; unit := primary ["some" unit]


@dataclass
class _Tok:
    kind: str
    text: str


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "word" and value in ("and", "some"):
            kind = value
        tokens.append(_Tok(kind, value))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, text: str, resolve: Callable[[_Tok], str]) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.resolve = resolve

    def peek(self) -> _Tok | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ExpressionSyntaxError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> ClassExpression:
        if not self.tokens:
            raise ExpressionSyntaxError("empty expression")
        expr = self.conj()
        if self.peek() is not None:
            raise ExpressionSyntaxError(f"unexpected {self.peek().text!r} in {self.text!r}")
        return expr

    def conj(self) -> ClassExpression:
        parts = [self.unit()]
        while self.peek() is not None and self.peek().kind == "and":
            self.take()
            parts.append(self.unit())
        if len(parts) == 1:
            return parts[0]
        flat: list[ClassExpression] = []
        for p in parts:
            flat.extend(p.conjuncts if isinstance(p, IntersectionOf) else [p])
        unique = list(dict.fromkeys(flat))
        return unique[0] if len(unique) == 1 else IntersectionOf(tuple(unique))

    def unit(self) -> ClassExpression:
        tok = self.take()
        if tok.kind == "paren" and tok.text == "(":
            inner = self.conj()
            close = self.take()
            if close.text != ")":
                raise ExpressionSyntaxError(f"expected ')' in {self.text!r}, found {close.text!r}")
            return inner
        if tok.kind in ("paren", "and", "some"):
            raise ExpressionSyntaxError(f"unexpected {tok.text!r} in {self.text!r}")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "some":
            self.take()
            return SomeValuesFrom(self.resolve(tok), self.unit())
        return Named(self.resolve(tok))


def parse_expression(text: str, resolve: Callable[[_Tok], str]) -> ClassExpression:
    return _ExprParser(text, resolve).parse()


def _iri_of(text: str, pm: Mapping[str, str]) -> str:
    if text.startswith("<") and text.endswith(">"):
        return text[1:-1]
    return expand_curie(text, pm)


def term_resolver(pm: Mapping[str, str], names: Mapping[str, str] | None = None, bindings=None):
    """Resolve tokens: quoted or bare names via ``names``, ``{var}`` via ``bindings``, else CURIE/IRI."""
    names = names or {}
    bindings = bindings or {}

    def resolve(tok: _Tok) -> str:
        if tok.kind == "slot":
            var = tok.text[1:-1]
            if var not in bindings:
                raise UnboundVariable(f"variable {var!r} has no value")
            return bindings[var]
        if tok.kind == "quoted":
            key = tok.text[1:-1]
            if key not in names:
                raise ExpressionSyntaxError(f"unknown name {key!r}")
            return names[key]
        if tok.kind == "word" and tok.text in names:
            return names[tok.text]
        return _iri_of(tok.text, pm)

    return resolve


# design patterns


@dataclass
class PatternDef:
    pattern_id: str
    vars: dict[str, str]
    classes: dict[str, str] = field(default_factory=dict)
    relations: dict[str, str] = field(default_factory=dict)
    name_template: str | None = None
    def_template: str | None = None
    equivalent_to: str | None = None
    subclass_of: str | None = None

    def __post_init__(self) -> None:
        if (self.equivalent_to is None) == (self.subclass_of is None):
            raise PatternError(f"pattern {self.pattern_id}: exactly one of equivalentTo/subClassOf is required")
        for label, text in self.templates().items():
            for var in _SLOT.findall(text):
                if var not in self.vars:
                    raise UnboundVariable(f"pattern {self.pattern_id}: {label} uses undeclared variable {var!r}")

    def templates(self) -> dict[str, str]:
        found = {
            "name": self.name_template,
            "def": self.def_template,
            "equivalentTo": self.equivalent_to,
            "subClassOf": self.subclass_of,
        }
        return {k: v for k, v in found.items() if v is not None}

    @property
    def logic(self) -> str:
        return self.equivalent_to if self.equivalent_to is not None else self.subclass_of


def _template_text(value, where: str) -> str | None:
    """Accept ``"{a} of {b}"`` or a printf-style ``{text: "%s of %s", vars: [a, b]}``."""
    if value is None:
        return None
    if isinstance(value, str):
        return value
    if isinstance(value, dict) and "text" in value:
        names = list(value.get("vars") or [])
        text = str(value["text"])
        if text.count("%s") != len(names):
            raise PatternError(f"{where}: %s count does not match vars")
        for name in names:
            text = text.replace("%s", "{" + name + "}", 1)
        return text
    raise PatternError(f"{where}: expected a string or a text/vars mapping")


def load_pattern(yaml_text: str, source: str | None = None) -> PatternDef:
    try:
        data = yaml.safe_load(yaml_text)
    except yaml.YAMLError as exc:
        raise PatternError(f"{source or 'pattern'}: invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise PatternError(f"{source or 'pattern'}: expected a mapping")
    pid = data.get("pattern_name") or data.get("pattern_id")
    if not pid and source:
        pid = Path(source).name.split(".")[0]
    if not pid:
        raise PatternError("pattern has no pattern_name")
    vars_ = data.get("vars") or {}
    if not isinstance(vars_, dict) or not vars_:
        raise PatternError(f"pattern {pid}: vars must be a non-empty mapping")
    return PatternDef(
        pattern_id=str(pid),
        vars={str(k): str(v) for k, v in vars_.items()},
        classes={str(k): str(v) for k, v in (data.get("classes") or {}).items()},
        relations={str(k): str(v) for k, v in (data.get("relations") or {}).items()},
        name_template=_template_text(data.get("name"), f"{pid}.name"),
        def_template=_template_text(data.get("def"), f"{pid}.def"),
        equivalent_to=_template_text(data.get("equivalentTo"), f"{pid}.equivalentTo"),
        subclass_of=_template_text(data.get("subClassOf"), f"{pid}.subClassOf"),
    )


@dataclass
class FillerTable:
    columns: list[str]
    rows: list[list[str]]


def _split_tsv(text: str) -> list[list[str]]:
    return [line.rstrip("\r").split("\t") for line in text.split("\n") if line.rstrip("\r").strip()]


def parse_filler_table(text: str) -> FillerTable:
    lines = _split_tsv(text)
    if not lines:
        raise PatternError("filler table has no header")
    return FillerTable(lines[0], lines[1:])


def _labeller(labels, pm: Mapping[str, str], warnings: list[str]) -> Callable[[str], str]:
    if isinstance(labels, Ontology):
        onto = labels
        lookup = onto.label
    else:
        table = dict(labels or {})
        lookup = table.get

    def label(iri: str) -> str:
        found = lookup(iri)
        if found is not None:
            return found
        curie = contract_iri(iri, pm)
        msg = f"no label for {curie}; using the identifier"
        if msg not in warnings:
            warnings.append(msg)
            logger.warning(msg)
        return curie

    return label


def compile_pattern(
    p: PatternDef,
    t: FillerTable,
    pm: Mapping[str, str],
    labels: Ontology | Mapping[str, str] | None = None,
    warnings: list[str] | None = None,
) -> list[Axiom]:
    warnings = warnings if warnings is not None else []
    if not t.columns or t.columns[0] != "defined_class":
        raise PatternError(f"pattern {p.pattern_id}: first column must be defined_class")
    cols = t.columns[1:]
    for var in p.vars:
        if var not in cols:
            raise UnboundVariable(f"pattern {p.pattern_id}: no column for variable {var!r}", column=var)
    extra = [c for c in cols if c not in p.vars]
    if extra:
        raise PatternError(f"pattern {p.pattern_id}: columns {extra} are not pattern variables")
    label_of = _labeller(labels, pm, warnings)
    names = {**p.classes, **p.relations}
    names = {k: _iri_of(v, pm) for k, v in names.items()}
    seen: set[str] = set()
    axioms: list[Axiom] = []
    for n, row in enumerate(t.rows, start=2):
        cells = row + [""] * (len(t.columns) - len(row))
        if len(row) > len(t.columns):
            raise PatternError("more cells than columns", row=n)
        if not cells[0].strip():
            raise PatternError("defined_class is empty", row=n, column="defined_class")
        try:
            defined = _iri_of(cells[0].strip(), pm)
            bindings = {}
            for var, cell in zip(cols, cells[1:]):
                if not cell.strip():
                    raise UnboundVariable(f"variable {var!r} is empty", row=n, column=var)
                bindings[var] = _iri_of(cell.strip(), pm)
        except UnknownPrefix as exc:
            raise TemplateError(str(exc), row=n) from exc
        if defined in seen:
            raise PatternError(f"duplicate defined_class {cells[0].strip()}", row=n, column="defined_class")
        seen.add(defined)
        axioms.append(Declaration(CLASS, defined))
        fill = {var: label_of(iri) for var, iri in bindings.items()}
        if p.name_template is not None:
            axioms.append(AnnotationAssertion(defined, Annotation(RDFS_LABEL, Literal(p.name_template.format(**fill)))))
        if p.def_template is not None:
            axioms.append(
                AnnotationAssertion(defined, Annotation(IAO_DEFINITION, Literal(p.def_template.format(**fill))))
            )
        try:
            expr = parse_expression(p.logic, term_resolver(pm, names, bindings))
        except UnknownPrefix as exc:
            raise ExpressionSyntaxError(str(exc), row=n) from exc
        except TemplateError as exc:
            raise type(exc)(exc.reason, row=n, column=exc.column) from exc
        if p.equivalent_to is not None:
            axioms.append(EquivalentClasses((Named(defined), expr)))
        else:
            axioms.append(SubClassOf(Named(defined), expr))
    return sorted(dedup_axioms(axioms), key=axiom_key)


# column-header templates

_ANNOTATION = re.compile(r"^A\s+(\S+)$")
_EXISTENTIAL = re.compile(r"^SC\s+(\S+)\s+some\s+%$")


@dataclass(frozen=True)
class _Column:
    name: str
    kind: str  # id | label | annotation | subclass | existential
    property: str | None = None


def _parse_template_string(name: str, text: str, pm: Mapping[str, str]) -> _Column | None:
    text = text.strip()
    if text == "":
        return None
    if text == "ID":
        return _Column(name, "id")
    if text == "LABEL":
        return _Column(name, "label")
    if text == "SC %":
        return _Column(name, "subclass")
    try:
        m = _ANNOTATION.match(text)
        if m:
            return _Column(name, "annotation", _iri_of(m.group(1), pm))
        m = _EXISTENTIAL.match(text)
        if m:
            return _Column(name, "existential", _iri_of(m.group(1), pm))
    except UnknownPrefix as exc:
        raise UnknownTemplateString(f"{text!r}: {exc}", row=2, column=name) from exc
    raise UnknownTemplateString(f"unknown template string {text!r}", row=2, column=name)


def compile_table_template(table: str, pm: Mapping[str, str]) -> list[Axiom]:
    lines = table.split("\n")
    rows = [line.rstrip("\r").split("\t") for line in lines]
    if len(rows) < 2 or not any(rows[1]):
        raise TemplateError("a template needs a header row and a template-string row")
    names, strings = rows[0], rows[1]
    strings = strings + [""] * (len(names) - len(strings))
    columns = [_parse_template_string(n, s, pm) for n, s in zip(names, strings)]
    id_cols = [i for i, c in enumerate(columns) if c is not None and c.kind == "id"]
    if len(id_cols) != 1:
        raise TemplateError("exactly one ID column is required", row=2)
    id_col = id_cols[0]

    axioms: list[Axiom] = []
    resolve = term_resolver(pm)
    for n, row in enumerate(rows[2:], start=3):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) > len(columns):
            raise TemplateError("more cells than columns", row=n)
        cells = row + [""] * (len(columns) - len(row))
        subject_text = cells[id_col].strip()
        if not subject_text:
            raise TemplateError("ID cell is empty", row=n, column=names[id_col])
        try:
            subject = _iri_of(subject_text, pm)
        except UnknownPrefix as exc:
            raise TemplateError(str(exc), row=n, column=names[id_col]) from exc
        axioms.append(Declaration(CLASS, subject))
        for col, cell in zip(columns, cells):
            value = cell.strip()
            if col is None or col.kind == "id" or not value:
                continue
            if col.kind == "label":
                axioms.append(AnnotationAssertion(subject, Annotation(RDFS_LABEL, Literal(value))))
            elif col.kind == "annotation":
                axioms.append(AnnotationAssertion(subject, Annotation(col.property, Literal(value))))
            else:
                try:
                    expr = parse_expression(value, resolve)
                except UnknownPrefix as exc:
                    raise ExpressionSyntaxError(str(exc), row=n, column=col.name) from exc
                except TemplateError as exc:
                    raise ExpressionSyntaxError(exc.reason, row=n, column=col.name) from exc
                if col.kind == "existential":
                    expr = SomeValuesFrom(col.property, expr)
                axioms.append(SubClassOf(Named(subject), expr))
    return sorted(dedup_axioms(axioms), key=axiom_key)


def compile_project_templates(
    project_dir: Path, pm: Mapping[str, str], labels=None, warnings: list[str] | None = None
) -> list[Axiom]:
    """Compile every pattern with a filler table and every table template under ``src/``."""
    axioms: list[Axiom] = []
    patterns = project_dir / "src" / "patterns"
    for path in sorted(patterns.glob("*.pattern.yaml")):
        pattern = load_pattern(path.read_text(encoding="utf-8"), source=str(path))
        data = patterns / "data" / f"{pattern.pattern_id}.tsv"
        if not data.exists():
            logger.warning("pattern %s has no filler table at %s", pattern.pattern_id, data)
            continue
        table = parse_filler_table(data.read_text(encoding="utf-8"))
        try:
            axioms.extend(compile_pattern(pattern, table, pm, labels, warnings))
        except TemplateError as exc:
            raise type(exc)(f"{data}: {exc.reason}", exc.row, exc.column) from exc
    for path in sorted((project_dir / "src" / "templates").glob("*.tsv")):
        try:
            axioms.extend(compile_table_template(path.read_text(encoding="utf-8"), pm))
        except TemplateError as exc:
            raise type(exc)(f"{path}: {exc.reason}", exc.row, exc.column) from exc
    return sorted(dedup_axioms(axioms), key=axiom_key)


__all__ = [
    "FillerTable",
    "PatternDef",
    "compile_pattern",
    "compile_project_templates",
    "compile_table_template",
    "load_pattern",
    "parse_expression",
    "parse_filler_table",
    "term_resolver",
]

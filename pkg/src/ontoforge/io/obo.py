"""OBO flat file (1.4 subset) reader and writer.

Only the tags below are mapped; anything else is reported as a warning and
dropped. Identifiers follow the OBO PURL convention (``GO:0008150`` ->
``http://purl.obolibrary.org/obo/GO_0008150``) unless the prefix map says
otherwise.
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from collections.abc import Mapping

from ..errors import DuplicateId, Inexpressible, ParseError
from ..model import (
    CLASS,
    CREATED_BY,
    CREATION_DATE,
    HAS_BROAD_SYNONYM,
    HAS_DBXREF,
    HAS_EXACT_SYNONYM,
    HAS_NARROW_SYNONYM,
    HAS_RELATED_SYNONYM,
    HAS_SYNONYM_TYPE,
    IAO_DEFINITION,
    IN_SUBSET,
    IS_INFERRED,
    OBJECT_PROPERTY,
    OBO,
    OWL_DEPRECATED,
    RDFS_COMMENT,
    RDFS_LABEL,
    XSD_BOOLEAN,
    XSD_STRING,
    Annotation,
    AnnotationAssertion,
    Axiom,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    PrefixMap,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    default_prefix_map,
    is_absolute_iri,
)

logger = logging.getLogger(__name__)

TAG_ORDER = (
    "id",
    "name",
    "def",
    "comment",
    "subset",
    "synonym",
    "xref",
    "is_a",
    "intersection_of",
    "relationship",
    "disjoint_from",
    "is_obsolete",
    "property_value",
    "created_by",
    "creation_date",
)
TYPEDEF_TAGS = frozenset(TAG_ORDER) - {"intersection_of", "relationship", "disjoint_from"}

SYNONYM_SCOPES = {
    "EXACT": HAS_EXACT_SYNONYM,
    "NARROW": HAS_NARROW_SYNONYM,
    "BROAD": HAS_BROAD_SYNONYM,
    "RELATED": HAS_RELATED_SYNONYM,
}
_SCOPE_OF = {v: k for k, v in SYNONYM_SCOPES.items()}
_LITERAL_TAGS = {"name": RDFS_LABEL, "comment": RDFS_COMMENT, "created_by": CREATED_BY, "creation_date": CREATION_DATE}
_TAG_OF = {v: k for k, v in _LITERAL_TAGS.items()}

_IDSPACE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_OBO_LOCAL = re.compile(r"^([A-Za-z][A-Za-z0-9.\-]*)_(\S+)$")
_ONTOLOGY_IRI = re.compile(r"^" + re.escape(OBO) + r"([A-Za-z0-9_.\-]+)\.owl$")


def ontology_id_of(iri: str | None) -> str | None:
    if iri is None:
        return None
    m = _ONTOLOGY_IRI.match(iri)
    return m.group(1) if m else None


class _Ids:
    """OBO identifier <-> IRI mapping for one document."""

    def __init__(self, pm: Mapping[str, str], ontology_id: str | None) -> None:
        self.pm = pm
        self.ontology_id = ontology_id

    def expand(self, token: str, line: int = 0) -> str:
        if not token or any(c.isspace() for c in token):
            raise ParseError(f"malformed identifier {token!r}", line)
        if is_absolute_iri(token):
            return token
        prefix, sep, local = token.partition(":")
        if not sep:
            if self.ontology_id is None:
                raise ParseError(f"unprefixed identifier {token!r} needs an ontology header", line)
            return f"{OBO}{self.ontology_id}#{token}"
        if prefix in self.pm:
            return self.pm[prefix] + local
        if _IDSPACE.match(prefix) and local:
            return f"{OBO}{prefix}_{local}"
        raise ParseError(f"malformed identifier {token!r}", line)

    def contract(self, iri: str, reader: _Ids | None = None) -> str:
        """Shortest form that ``reader`` (default: self) expands back to ``iri``."""
        reader = reader or self
        candidates = []
        if self.ontology_id:
            local_base = f"{OBO}{self.ontology_id}#"
            if iri.startswith(local_base) and ":" not in iri[len(local_base):]:
                candidates.append(iri[len(local_base):])
        if iri.startswith(OBO):
            m = _OBO_LOCAL.match(iri[len(OBO):])
            if m:
                candidates.append(f"{m.group(1)}:{m.group(2)}")
        best = None
        for name, prefix in self.pm.items():
            if prefix and iri.startswith(prefix) and (best is None or len(prefix) > len(best[1])):
                best = (name, prefix)
        if best is not None:
            candidates.append(f"{best[0]}:{iri[len(best[1]):]}")
        for cand in candidates:
            if not cand or any(c.isspace() or c in '!{}"' for c in cand):
                continue
            try:
                if reader.expand(cand) == iri:
                    return cand
            except ParseError:
                continue
        return iri


# -- line-level helpers ----------------------------------------------------


def _strip_comment(value: str) -> str:
    in_quote = False
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\":
            i += 2
            continue
        if c == '"':
            in_quote = not in_quote
        elif c == "!" and not in_quote:
            return value[:i].rstrip()
        i += 1
    return value


_UNESCAPE = {"n": "\n", "t": "\t", "W": " "}


def _unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append(_UNESCAPE.get(nxt, nxt))
            i += 2
            continue
        out.append(c)
        i += 1
    return "".join(out)


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace("\n", "\\n")
        .replace("\t", "\\t")
        .replace("!", "\\!")
        .replace("{", "\\{")
    )


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _read_quoted(value: str, line: int) -> tuple[str, str]:
    """Split ``"text" rest`` into (unescaped text, rest)."""
    if not value.startswith('"'):
        raise ParseError("expected quoted string", line)
    i = 1
    while i < len(value):
        if value[i] == "\\":
            i += 2
            continue
        if value[i] == '"':
            return _unescape(value[1:i]), value[i + 1 :].strip()
        i += 1
    raise ParseError("unterminated quoted string", line)


def _split_outside_quotes(text: str, sep: str) -> list[str]:
    parts, buf, in_quote, i = [], [], False, 0
    while i < len(text):
        c = text[i]
        if c == "\\" and i + 1 < len(text):
            buf.append(text[i : i + 2])
            i += 2
            continue
        if c == '"':
            in_quote = not in_quote
        if c == sep and not in_quote:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(c)
        i += 1
    parts.append("".join(buf))
    return parts


def _read_xrefs(text: str, line: int) -> tuple[list[str], str]:
    text = text.strip()
    if not text.startswith("["):
        return [], text
    depth_end = None
    in_quote = False
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == '"':
            in_quote = not in_quote
        elif c == "]" and not in_quote:
            depth_end = i
            break
        i += 1
    if depth_end is None:
        raise ParseError("unterminated xref list", line)
    inner = text[1:depth_end].strip()
    xrefs = []
    if inner:
        for part in _split_outside_quotes(inner, ","):
            part = part.strip()
            if not part:
                continue
            xref = part.split(" ", 1)[0] if '"' in part else part
            xrefs.append(_unescape(xref))
    return xrefs, text[depth_end + 1 :].strip()


def _split_qualifiers(value: str, line: int) -> tuple[str, list[tuple[str, str]]]:
    value = value.rstrip()
    if not value.endswith("}") or "{" not in value:
        return value, []
    start = value.rfind("{")
    if start > 0 and value[start - 1] == "\\":
        return value, []
    body = value[start + 1 : -1]
    quals = []
    for part in _split_outside_quotes(body, ","):
        part = part.strip()
        if not part:
            continue
        key, sep, raw = part.partition("=")
        if not sep:
            raise ParseError(f"malformed qualifier {part!r}", line)
        raw = raw.strip()
        if raw.startswith('"'):
            text, _ = _read_quoted(raw, line)
        else:
            text = raw
        quals.append((key.strip(), text))
    return value[:start].rstrip(), quals


# -- reader -----------------------------------------------------------------


class _Stanza:
    def __init__(self, kind: str, line: int) -> None:
        self.kind = kind
        self.line = line
        self.tags: list[tuple[str, str, int]] = []


def _read_document(text: str) -> tuple[list[tuple[str, str, int]], list[_Stanza]]:
    header: list[tuple[str, str, int]] = []
    stanzas: list[_Stanza] = []
    current: _Stanza | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("!"):
            continue
        if line.startswith("["):
            m = re.match(r"^\[(\w+)\]\s*$", line)
            if not m:
                raise ParseError(f"malformed stanza header {line!r}", lineno)
            current = _Stanza(m.group(1), lineno)
            stanzas.append(current)
            continue
        tag, sep, rest = line.partition(":")
        if not sep or not tag.strip() or " " in tag.strip():
            raise ParseError(f"expected 'tag: value', got {line!r}", lineno)
        value = rest[1:] if rest.startswith(" ") else rest
        value = _strip_comment(value)
        entry = (tag.strip(), value, lineno)
        if current is None:
            header.append(entry)
        else:
            current.tags.append(entry)
    return header, stanzas


class _Reader:
    def __init__(self, pm: PrefixMap, warnings: list[str]) -> None:
        self.pm = pm
        self.warnings = warnings
        self.ids = _Ids(pm, None)
        self.axioms: list[Axiom] = []

    def warn(self, message: str, line: int) -> None:
        text = f"line {line}: {message}"
        self.warnings.append(text)
        logger.warning(text)

    def literal_value(self, raw: str, datatype: str | None, line: int) -> Literal:
        dt = None
        if datatype is not None:
            dt = self.ids.expand(datatype, line)
            if dt == XSD_STRING:
                dt = None
        return Literal(raw, dt)

    def property_value(self, value: str, line: int) -> Annotation:
        value = value.strip()
        prop_token, _, rest = value.partition(" ")
        if not rest:
            raise ParseError("property_value needs a property and a value", line)
        prop = self.ids.expand(prop_token, line)
        rest = rest.strip()
        if rest.startswith('"'):
            text, tail = _read_quoted(rest, line)
            dt_token = tail.split()[0] if tail.split() else None
            return Annotation(prop, self.literal_value(text, dt_token, line))
        parts = rest.split()
        if len(parts) == 1:
            return Annotation(prop, self.ids.expand(parts[0], line))
        return Annotation(prop, self.literal_value(_unescape(parts[0]), parts[1], line))

    def qualifier_annotations(self, quals: list[tuple[str, str]], line: int) -> tuple[Annotation, ...]:
        out = []
        for key, text in quals:
            prop = IS_INFERRED if key == "is_inferred" else self.ids.expand(key, line)
            out.append(Annotation(prop, Literal(text)))
        return tuple(out)

    def header(self, entries: list[tuple[str, str, int]]) -> dict:
        meta: dict = {"imports": [], "annotations": []}
        tags = {tag: (value, line) for tag, value, line in entries}
        if "ontology" in tags:
            value, line = tags["ontology"]
            value = value.strip()
            if is_absolute_iri(value):
                meta["iri"] = value
                self.ids.ontology_id = ontology_id_of(value)
            else:
                meta["iri"] = f"{OBO}{value}.owl"
                self.ids.ontology_id = value
        for tag, value, line in entries:
            if tag in ("format-version", "ontology"):
                continue
            if tag == "data-version":
                value = value.strip()
                if is_absolute_iri(value):
                    meta["version"] = value
                elif self.ids.ontology_id:
                    oid = self.ids.ontology_id
                    meta["version"] = f"{OBO}{oid}/{value}/{oid}.owl"
                else:
                    raise ParseError("data-version needs an ontology header", line)
            elif tag == "import":
                meta["imports"].append(value.strip())
            elif tag == "property_value":
                meta["annotations"].append(self.property_value(value, line))
            elif tag == "remark":
                meta["annotations"].append(Annotation(RDFS_COMMENT, Literal(_unescape(value))))
            else:
                self.warn(f"unsupported header tag {tag!r} ignored", line)
        return meta

    def stanza(self, st: _Stanza) -> str | None:
        if st.kind not in ("Term", "Typedef"):
            self.warn(f"unsupported stanza type [{st.kind}] skipped", st.line)
            return None
        if not st.tags or st.tags[0][0] != "id":
            raise ParseError(f"[{st.kind}] stanza must start with an id tag", st.line)
        ids = [t for t in st.tags if t[0] == "id"]
        if len(ids) > 1:
            raise ParseError("stanza has more than one id tag", ids[1][2])
        subject = self.ids.expand(st.tags[0][1].strip(), st.tags[0][2])
        is_term = st.kind == "Term"
        self.axioms.append(Declaration(CLASS if is_term else OBJECT_PROPERTY, subject))
        allowed = TAG_ORDER if is_term else TYPEDEF_TAGS
        genus: list = []
        genus_line = st.line
        for tag, value, line in st.tags[1:]:
            if tag not in allowed:
                self.warn(f"unsupported tag {tag!r} in [{st.kind}] {st.tags[0][1].strip()} ignored", line)
                continue
            if tag in _LITERAL_TAGS:
                self.annotate(subject, _LITERAL_TAGS[tag], Literal(_unescape(value)))
            elif tag == "def":
                text, rest = _read_quoted(value.strip(), line)
                xrefs, _ = _read_xrefs(rest, line)
                anns = tuple(Annotation(HAS_DBXREF, Literal(x)) for x in xrefs)
                self.annotate(subject, IAO_DEFINITION, Literal(text), anns)
            elif tag == "synonym":
                text, rest = _read_quoted(value.strip(), line)
                scope, _, rest = rest.partition(" ")
                if scope not in SYNONYM_SCOPES:
                    raise ParseError(f"unknown synonym scope {scope!r}", line)
                rest = rest.strip()
                anns = []
                if rest and not rest.startswith("["):
                    type_token, _, rest = rest.partition(" ")
                    anns.append(Annotation(HAS_SYNONYM_TYPE, self.ids.expand(type_token, line)))
                xrefs, _ = _read_xrefs(rest, line)
                anns += [Annotation(HAS_DBXREF, Literal(x)) for x in xrefs]
                self.annotate(subject, SYNONYM_SCOPES[scope], Literal(text), tuple(anns))
            elif tag == "xref":
                xref = value
                if '"' in xref:
                    xref = xref[: xref.index('"')].rstrip()
                self.annotate(subject, HAS_DBXREF, Literal(_unescape(xref)))
            elif tag == "subset":
                self.annotate(subject, IN_SUBSET, self.ids.expand(value.strip(), line))
            elif tag == "is_obsolete":
                if value.strip() == "true":
                    self.annotate(subject, OWL_DEPRECATED, Literal("true", XSD_BOOLEAN))
                elif value.strip() != "false":
                    raise ParseError(f"is_obsolete must be true or false, got {value!r}", line)
            elif tag == "property_value":
                ann = self.property_value(value, line)
                self.axioms.append(AnnotationAssertion(subject, ann))
            elif tag == "is_a":
                target, quals = _split_qualifiers(value, line)
                anns = self.qualifier_annotations(quals, line)
                sup = self.ids.expand(target.strip(), line)
                if is_term:
                    self.axioms.append(SubClassOf(Named(subject), Named(sup), anns))
                else:
                    self.axioms.append(SubObjectPropertyOf(subject, sup, anns))
            elif tag == "relationship":
                body, quals = _split_qualifiers(value, line)
                parts = body.split()
                if len(parts) != 2:
                    raise ParseError("relationship needs a relation and a target", line)
                rel, target = (self.ids.expand(p, line) for p in parts)
                anns = self.qualifier_annotations(quals, line)
                self.axioms.append(SubClassOf(Named(subject), SomeValuesFrom(rel, Named(target)), anns))
            elif tag == "intersection_of":
                body, _ = _split_qualifiers(value, line)
                parts = body.split()
                if len(parts) == 1:
                    genus.append(Named(self.ids.expand(parts[0], line)))
                elif len(parts) == 2:
                    rel, target = (self.ids.expand(p, line) for p in parts)
                    genus.append(SomeValuesFrom(rel, Named(target)))
                else:
                    raise ParseError("malformed intersection_of", line)
                genus_line = line
            elif tag == "disjoint_from":
                other = self.ids.expand(value.strip(), line)
                self.axioms.append(DisjointClasses((Named(subject), Named(other))))
        if genus:
            if len(genus) < 2:
                raise ParseError("intersection_of requires at least two lines", genus_line)
            self.axioms.append(EquivalentClasses((Named(subject), IntersectionOf(tuple(genus)))))
        return subject

    def annotate(self, subject: str, prop: str, value, anns: tuple = ()) -> None:
        self.axioms.append(AnnotationAssertion(subject, Annotation(prop, value), anns))


def parse_obo(
    text: str,
    pm: Mapping[str, str] | None = None,
    warnings: list[str] | None = None,
    source: str | None = None,
) -> Ontology:
    prefix_map = default_prefix_map() if pm is None else PrefixMap(pm)
    reader = _Reader(prefix_map, warnings if warnings is not None else [])
    try:
        header, stanzas = _read_document(text)
        meta = reader.header(header)
        seen: dict[tuple[str, str], int] = {}
        for st in stanzas:
            subject = reader.stanza(st)
            if subject is None:
                continue
            key = (st.kind, subject)
            if key in seen:
                raise DuplicateId(f"duplicate id {st.tags[0][1].strip()}", st.line)
            seen[key] = st.line
    except ParseError as exc:
        if source and exc.source is None:
            raise type(exc)(exc.reason, exc.line, source) from None
        raise
    return Ontology(
        ontology_iri=meta.get("iri"),
        version_iri=meta.get("version"),
        imports=tuple(meta["imports"]),
        prefix_map=prefix_map,
        axioms=tuple(reader.axioms),
        ontology_annotations=tuple(meta["annotations"]),
    )


# -- writer -----------------------------------------------------------------


class _Writer:
    def __init__(self, o: Ontology) -> None:
        self.o = o
        self.ids = _Ids(o.prefix_map, ontology_id_of(o.ontology_iri))
        # documents carry no prefix declarations, so ids must resolve for a plain reader
        self.reader = _Ids(default_prefix_map(), self.ids.ontology_id)
        self.bad: list[Axiom] = []

    def id(self, iri: str) -> str:
        return self.ids.contract(iri, self.reader)

    def literal_value(self, lit: Literal) -> str | None:
        if lit.lang is not None:
            return None
        dt = "xsd:string" if lit.datatype is None else self.id(lit.datatype)
        return f"{_quote(lit.lexical)} {dt}"

    def property_value(self, ann: Annotation) -> str | None:
        if isinstance(ann.value, Literal):
            rendered = self.literal_value(ann.value)
            if rendered is None:
                return None
            return f"{self.id(ann.property)} {rendered}"
        return f"{self.id(ann.property)} {self.id(ann.value)}"

    def qualifiers(self, anns: tuple[Annotation, ...]) -> str | None:
        if not anns:
            return ""
        parts = []
        for a in anns:
            if not isinstance(a.value, Literal) or a.value.datatype or a.value.lang:
                return None
            key = "is_inferred" if a.property == IS_INFERRED else self.id(a.property)
            parts.append(f"{key}={_quote(a.value.lexical)}")
        return " {" + ", ".join(sorted(parts)) + "}"

    def xref_list(self, anns: tuple[Annotation, ...], allow_type: bool) -> tuple[str, str] | None:
        xrefs, type_token = [], ""
        for a in anns:
            if a.property == HAS_DBXREF and isinstance(a.value, Literal) and not a.value.datatype:
                xrefs.append(_escape(a.value.lexical).replace(",", "\\,").replace("]", "\\]"))
            elif allow_type and a.property == HAS_SYNONYM_TYPE and isinstance(a.value, str) and not type_token:
                type_token = self.id(a.value)
            else:
                return None
        return type_token, "[" + ", ".join(sorted(xrefs)) + "]"

    def emit(self) -> str:
        o = self.o
        stanzas: dict[str, dict[str, list[str]]] = {}
        kinds: dict[str, str] = {}

        def tags_for(iri: str, kind: str) -> dict[str, list[str]]:
            if iri not in stanzas:
                stanzas[iri] = defaultdict(list)
                kinds[iri] = kind
            elif kind == "Typedef":
                kinds[iri] = kind
            return stanzas[iri]

        for ax in o.axioms:
            if isinstance(ax, Declaration):
                if ax.annotations:
                    self.bad.append(ax)
                elif ax.kind == CLASS:
                    tags_for(ax.entity, "Term")
                elif ax.kind == OBJECT_PROPERTY:
                    tags_for(ax.entity, "Typedef")
                # annotation properties have no stanza
            elif isinstance(ax, SubObjectPropertyOf):
                q = self.qualifiers(ax.annotations)
                if q is None:
                    self.bad.append(ax)
                else:
                    tags_for(ax.sub, "Typedef")["is_a"].append(self.id(ax.sup) + q)
            elif isinstance(ax, SubClassOf):
                self.subclass(ax, tags_for)
            elif isinstance(ax, EquivalentClasses):
                self.equivalence(ax, tags_for)
            elif isinstance(ax, DisjointClasses):
                if len(ax.exprs) == 2 and all(isinstance(e, Named) for e in ax.exprs) and not ax.annotations:
                    a, b = ax.exprs
                    tags_for(a.iri, "Term")["disjoint_from"].append(self.id(b.iri))
                else:
                    self.bad.append(ax)

        # annotation assertions go last so stanza kinds are settled
        for ax in o.axioms:
            if isinstance(ax, AnnotationAssertion):
                kind = kinds.get(ax.subject, "Term")
                self.annotation(ax, tags_for(ax.subject, kind))

        if self.bad:
            raise Inexpressible(self.bad)

        lines = ["format-version: 1.4"]
        oid = self.ids.ontology_id
        if o.version_iri:
            prefix = f"{OBO}{oid}/" if oid else None
            suffix = f"/{oid}.owl"
            v = o.version_iri
            if prefix and v.startswith(prefix) and v.endswith(suffix) and len(v) > len(prefix) + len(suffix):
                lines.append(f"data-version: {v[len(prefix):-len(suffix)]}")
            else:
                lines.append(f"data-version: {v}")
        for imp in o.imports:
            lines.append(f"import: {imp}")
        if o.ontology_iri:
            lines.append(f"ontology: {oid if oid else o.ontology_iri}")
        pvs = []
        for ann in o.ontology_annotations:
            rendered = self.property_value(ann)
            if rendered is None:
                raise Inexpressible([AnnotationAssertion("ontology", ann)])
            pvs.append(f"property_value: {rendered}")
        lines.extend(sorted(pvs))

        order = sorted(stanzas, key=lambda iri: (kinds[iri] != "Term", self.id(iri)))
        for iri in order:
            tags = stanzas[iri]
            lines.append("")
            lines.append(f"[{kinds[iri]}]")
            lines.append(f"id: {self.id(iri)}")
            for tag in TAG_ORDER[1:]:
                values = tags.get(tag)
                if not values:
                    continue
                if tag == "intersection_of":
                    rendered = values  # genus first, differentia after, already ordered
                else:
                    rendered = sorted(values)
                for v in rendered:
                    lines.append(f"{tag}: {v}")
        return "\n".join(lines) + "\n"

    def subclass(self, ax: SubClassOf, tags_for) -> None:
        q = self.qualifiers(ax.annotations)
        if q is None or not isinstance(ax.sub, Named):
            self.bad.append(ax)
            return
        sub = ax.sub.iri
        if isinstance(ax.sup, Named):
            tags_for(sub, "Term")["is_a"].append(self.id(ax.sup.iri) + q)
        elif isinstance(ax.sup, SomeValuesFrom) and isinstance(ax.sup.filler, Named):
            rel = self.id(ax.sup.property)
            tags_for(sub, "Term")["relationship"].append(f"{rel} {self.id(ax.sup.filler.iri)}{q}")
        else:
            self.bad.append(ax)

    def equivalence(self, ax: EquivalentClasses, tags_for) -> None:
        named = [e for e in ax.exprs if isinstance(e, Named)]
        inter = [e for e in ax.exprs if isinstance(e, IntersectionOf)]
        if ax.annotations or len(ax.exprs) != 2 or len(named) != 1 or len(inter) != 1:
            self.bad.append(ax)
            return
        lines = []
        for c in inter[0].conjuncts:
            if isinstance(c, Named):
                lines.append((0, self.id(c.iri)))
            elif isinstance(c, SomeValuesFrom) and isinstance(c.filler, Named):
                lines.append((1, f"{self.id(c.property)} {self.id(c.filler.iri)}"))
            else:
                self.bad.append(ax)
                return
        tags = tags_for(named[0].iri, "Term")
        if tags["intersection_of"]:
            # a second logical definition cannot be told apart from the first
            self.bad.append(ax)
            return
        tags["intersection_of"].extend(text for _, text in sorted(lines))

    def annotation(self, ax: AnnotationAssertion, tags: dict[str, list[str]]) -> None:
        prop, value = ax.property, ax.value
        plain = isinstance(value, Literal) and value.datatype is None and value.lang is None
        if prop in _TAG_OF and plain and not ax.annotations:
            tags[_TAG_OF[prop]].append(_escape(value.lexical))
            return
        if prop == IAO_DEFINITION and plain:
            xl = self.xref_list(ax.annotations, allow_type=False)
            if xl is not None:
                tags["def"].append(f"{_quote(value.lexical)} {xl[1]}")
                return
        if prop in _SCOPE_OF and plain:
            xl = self.xref_list(ax.annotations, allow_type=True)
            if xl is not None:
                type_token, xrefs = xl
                middle = f" {type_token}" if type_token else ""
                tags["synonym"].append(f"{_quote(value.lexical)} {_SCOPE_OF[prop]}{middle} {xrefs}")
                return
        if prop == HAS_DBXREF and plain and not ax.annotations and '"' not in value.lexical:
            tags["xref"].append(_escape(value.lexical))
            return
        if prop == IN_SUBSET and isinstance(value, str) and not ax.annotations:
            tags["subset"].append(self.id(value))
            return
        if (
            prop == OWL_DEPRECATED
            and isinstance(value, Literal)
            and value == Literal("true", XSD_BOOLEAN)
            and not ax.annotations
        ):
            tags["is_obsolete"].append("true")
            return
        if ax.annotations:
            self.bad.append(ax)
            return
        rendered = self.property_value(ax.annotation)
        if rendered is None:
            self.bad.append(ax)
        else:
            tags["property_value"].append(rendered)


def emit_obo(o: Ontology) -> str:
    return _Writer(o).emit()


__all__ = ["parse_obo", "emit_obo", "ontology_id_of", "TAG_ORDER"]

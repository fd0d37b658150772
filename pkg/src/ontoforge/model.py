"""Ontology data model: identifiers, prefix maps, EL class expressions and axioms.

Every value here is immutable. Class expressions are canonicalised on
construction (intersection conjuncts are sorted) and an :class:`Ontology`
keeps its axioms deduplicated and in canonical order, so structural equality
is plain ``==``.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Union

from .errors import UnknownPrefix

logger = logging.getLogger(__name__)

Iri = str

OWL = "http://www.w3.org/2002/07/owl#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
OIO = "http://www.geneontology.org/formats/oboInOwl#"
DCTERMS = "http://purl.org/dc/terms/"
OBO = "http://purl.obolibrary.org/obo/"

OWL_THING = OWL + "Thing"
OWL_NOTHING = OWL + "Nothing"
OWL_DEPRECATED = OWL + "deprecated"
OWL_VERSION_INFO = OWL + "versionInfo"
RDFS_LABEL = RDFS + "label"
RDFS_COMMENT = RDFS + "comment"
IAO_DEFINITION = OBO + "IAO_0000115"
XSD_STRING = XSD + "string"
XSD_BOOLEAN = XSD + "boolean"
DC_CONTRIBUTOR = DCTERMS + "contributor"
DC_LICENSE = DCTERMS + "license"
DC_TITLE = DCTERMS + "title"
DC_SOURCE = DCTERMS + "source"
DC_DATE = DCTERMS + "date"
DC_DESCRIPTION = DCTERMS + "description"
HAS_DBXREF = OIO + "hasDbXref"
HAS_EXACT_SYNONYM = OIO + "hasExactSynonym"
HAS_NARROW_SYNONYM = OIO + "hasNarrowSynonym"
HAS_BROAD_SYNONYM = OIO + "hasBroadSynonym"
HAS_RELATED_SYNONYM = OIO + "hasRelatedSynonym"
HAS_SYNONYM_TYPE = OIO + "hasSynonymType"
IN_SUBSET = OIO + "inSubset"
CREATED_BY = OIO + "created_by"
CREATION_DATE = OIO + "creation_date"
IS_INFERRED = OIO + "is_inferred"

DEFAULT_PREFIXES: dict[str, str] = {
    "owl": OWL,
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "oboInOwl": OIO,
    "dcterms": DCTERMS,
    "obo": OBO,
}

_ABSOLUTE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*://|^(urn|mailto):", re.IGNORECASE)
_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S*$")


def is_absolute_iri(value: str) -> bool:
    return bool(_ABSOLUTE.match(value))


def check_iri(value: str) -> str:
    if not _SCHEME.match(value):
        raise ValueError(f"not an absolute IRI: {value!r}")
    return value


class PrefixMap(Mapping[str, str]):
    """Ordered prefix-name to IRI-prefix mapping."""

    def __init__(self, entries: Mapping[str, str] | Iterable[tuple[str, str]] | None = None) -> None:
        self._entries: dict[str, str] = dict(entries or {})
        for name, prefix in self._entries.items():
            if ":" in name or any(c.isspace() for c in name):
                raise ValueError(f"invalid prefix name {name!r}")
            if any(c.isspace() for c in prefix):
                raise ValueError(f"invalid IRI prefix {prefix!r}")

    def __getitem__(self, key: str) -> str:
        return self._entries[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PrefixMap):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PrefixMap({self._entries!r})"

    def expand(self, curie: str) -> str:
        return expand_curie(curie, self)

    def contract(self, iri: str) -> str:
        return contract_iri(iri, self)

    def merged(self, other: Mapping[str, str]) -> PrefixMap:
        """Union where entries already present in ``self`` win."""
        entries = dict(self._entries)
        for name, prefix in other.items():
            if name in entries:
                if entries[name] != prefix:
                    logger.warning(
                        "prefix conflict for %r: keeping %s, ignoring %s", name, entries[name], prefix
                    )
                continue
            entries[name] = prefix
        return PrefixMap(entries)


def default_prefix_map(extra: Mapping[str, str] | None = None) -> PrefixMap:
    entries = dict(DEFAULT_PREFIXES)
    entries.update(extra or {})
    return PrefixMap(entries)


def expand_curie(curie: str, pm: Mapping[str, str]) -> Iri:
    if is_absolute_iri(curie):
        return curie
    name, sep, local = curie.partition(":")
    if not sep:
        raise UnknownPrefix("", curie)
    if name not in pm:
        raise UnknownPrefix(name, curie)
    return pm[name] + local


def contract_iri(iri: Iri, pm: Mapping[str, str]) -> str:
    best: tuple[int, str] | None = None
    for name, prefix in pm.items():
        if prefix and iri.startswith(prefix):
            # ties on equal-length prefixes resolve to the first-declared name
            if best is None or len(prefix) > best[0]:
                best = (len(prefix), name)
    if best is None:
        return iri
    curie = f"{best[1]}:{iri[best[0]:]}"
    if is_absolute_iri(curie):
        # would be read back as an absolute IRI, not as a CURIE
        return iri
    return curie


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Iri | None = None
    lang: str | None = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.lang is not None:
            raise ValueError("a literal cannot carry both a datatype and a language tag")

    def __str__(self) -> str:
        return self.lexical


@dataclass(frozen=True)
class Annotation:
    property: Iri
    value: Literal | Iri


# -- class expressions ------------------------------------------------------


@dataclass(frozen=True)
class Named:
    iri: Iri

    def __str__(self) -> str:
        return self.iri


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "owl:Thing"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "owl:Nothing"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class IntersectionOf:
    conjuncts: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        conjuncts = tuple(self.conjuncts)
        if len(conjuncts) < 2:
            raise ValueError("IntersectionOf needs at least two conjuncts")
        object.__setattr__(self, "conjuncts", tuple(sorted(conjuncts, key=expr_key)))

    def __str__(self) -> str:
        return "(" + " and ".join(str(c) for c in self.conjuncts) + ")"


@dataclass(frozen=True)
class SomeValuesFrom:
    property: Iri
    filler: ClassExpression

    def __str__(self) -> str:
        return f"({self.property} some {self.filler})"


ClassExpression = Union[Named, Top, Bottom, IntersectionOf, SomeValuesFrom]


def expr_key(e: ClassExpression) -> tuple:
    """Total order: Top < Bottom < Named < SomeValuesFrom < IntersectionOf."""
    if isinstance(e, Top):
        return (0,)
    if isinstance(e, Bottom):
        return (1,)
    if isinstance(e, Named):
        return (2, e.iri)
    if isinstance(e, SomeValuesFrom):
        return (3, e.property, expr_key(e.filler))
    if isinstance(e, IntersectionOf):
        return (4, tuple(expr_key(c) for c in e.conjuncts))
    raise TypeError(f"not a class expression: {e!r}")


def named_classes_in(e: ClassExpression) -> Iterator[Iri]:
    if isinstance(e, Named):
        yield e.iri
    elif isinstance(e, SomeValuesFrom):
        yield from named_classes_in(e.filler)
    elif isinstance(e, IntersectionOf):
        for c in e.conjuncts:
            yield from named_classes_in(c)


def properties_in(e: ClassExpression) -> Iterator[Iri]:
    if isinstance(e, SomeValuesFrom):
        yield e.property
        yield from properties_in(e.filler)
    elif isinstance(e, IntersectionOf):
        for c in e.conjuncts:
            yield from properties_in(c)


# -- axioms -----------------------------------------------------------------

CLASS = "Class"
OBJECT_PROPERTY = "ObjectProperty"
ANNOTATION_PROPERTY = "AnnotationProperty"
ENTITY_KINDS = (CLASS, OBJECT_PROPERTY, ANNOTATION_PROPERTY)


def _annotations(value: Iterable[Annotation]) -> tuple[Annotation, ...]:
    # axiom annotations are a set; canonical order keeps == structural
    return tuple(sorted(value, key=annotation_key))


@dataclass(frozen=True)
class Declaration:
    kind: str
    entity: Iri
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ENTITY_KINDS:
            raise ValueError(f"unknown entity kind {self.kind!r}")
        object.__setattr__(self, "annotations", _annotations(self.annotations))


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotations", _annotations(self.annotations))


@dataclass(frozen=True)
class EquivalentClasses:
    exprs: tuple[ClassExpression, ...]
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "exprs", tuple(self.exprs))
        object.__setattr__(self, "annotations", _annotations(self.annotations))
        if len(self.exprs) < 2:
            raise ValueError("EquivalentClasses needs at least two expressions")


@dataclass(frozen=True)
class DisjointClasses:
    exprs: tuple[ClassExpression, ...]
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "exprs", tuple(self.exprs))
        object.__setattr__(self, "annotations", _annotations(self.annotations))
        if len(self.exprs) < 2:
            raise ValueError("DisjointClasses needs at least two expressions")


@dataclass(frozen=True)
class SubObjectPropertyOf:
    sub: Iri
    sup: Iri
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotations", _annotations(self.annotations))


@dataclass(frozen=True)
class AnnotationAssertion:
    subject: Iri
    annotation: Annotation
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotations", _annotations(self.annotations))

    @property
    def value(self) -> Literal | Iri:
        return self.annotation.value

    # defined last: the name shadows the builtin inside the class body
    @property
    def property(self) -> Iri:
        return self.annotation.property


Axiom = Union[
    Declaration, SubClassOf, EquivalentClasses, DisjointClasses, SubObjectPropertyOf, AnnotationAssertion
]
LOGICAL_AXIOMS = (SubClassOf, EquivalentClasses, DisjointClasses, SubObjectPropertyOf)

_KIND_RANK = {CLASS: 0, OBJECT_PROPERTY: 1, ANNOTATION_PROPERTY: 2}


def value_key(value: Literal | Iri) -> tuple:
    if isinstance(value, Literal):
        return (1, value.lexical, value.datatype or "", value.lang or "")
    return (0, value)


def annotation_key(a: Annotation) -> tuple:
    return (a.property, value_key(a.value))


def axiom_key(ax: Axiom) -> tuple:
    """Canonical sort key; two axioms are structurally equal iff keys are equal."""
    anns = tuple(sorted(annotation_key(a) for a in ax.annotations))
    if isinstance(ax, Declaration):
        return (0, _KIND_RANK[ax.kind], ax.entity, anns)
    if isinstance(ax, SubClassOf):
        return (1, expr_key(ax.sub), expr_key(ax.sup), anns)
    if isinstance(ax, EquivalentClasses):
        return (2, tuple(sorted(expr_key(e) for e in ax.exprs)), anns)
    if isinstance(ax, DisjointClasses):
        return (3, tuple(sorted(expr_key(e) for e in ax.exprs)), anns)
    if isinstance(ax, SubObjectPropertyOf):
        return (4, ax.sub, ax.sup, anns)
    if isinstance(ax, AnnotationAssertion):
        return (5, ax.subject, annotation_key(ax.annotation), anns)
    raise TypeError(f"not an axiom: {ax!r}")


def logical_key(ax: Axiom) -> tuple:
    """Like :func:`axiom_key` but ignoring axiom-level annotations."""
    return axiom_key(ax)[:-1]


def strip_annotations(ax: Axiom) -> Axiom:
    return replace(ax, annotations=()) if ax.annotations else ax


def is_logical(ax: Axiom) -> bool:
    return isinstance(ax, LOGICAL_AXIOMS)


def axiom_classes(ax: Axiom) -> Iterator[Iri]:
    if isinstance(ax, SubClassOf):
        yield from named_classes_in(ax.sub)
        yield from named_classes_in(ax.sup)
    elif isinstance(ax, (EquivalentClasses, DisjointClasses)):
        for e in ax.exprs:
            yield from named_classes_in(e)


def axiom_properties(ax: Axiom) -> Iterator[Iri]:
    if isinstance(ax, SubClassOf):
        yield from properties_in(ax.sub)
        yield from properties_in(ax.sup)
    elif isinstance(ax, (EquivalentClasses, DisjointClasses)):
        for e in ax.exprs:
            yield from properties_in(e)
    elif isinstance(ax, SubObjectPropertyOf):
        yield ax.sub
        yield ax.sup


def axiom_entities(ax: Axiom) -> Iterator[tuple[Iri, str]]:
    """Entities used by a logical axiom or declaration, with their kinds."""
    if isinstance(ax, Declaration):
        yield ax.entity, ax.kind
        return
    for iri in axiom_classes(ax):
        yield iri, CLASS
    for iri in axiom_properties(ax):
        yield iri, OBJECT_PROPERTY


def dedup_axioms(axioms: Iterable[Axiom]) -> list[Axiom]:
    seen: set[tuple] = set()
    out = []
    for ax in axioms:
        key = axiom_key(ax)
        if key not in seen:
            seen.add(key)
            out.append(ax)
    return out


@dataclass(frozen=True)
class Ontology:
    ontology_iri: Iri | None = None
    version_iri: Iri | None = None
    imports: tuple[Iri, ...] = ()
    prefix_map: PrefixMap = field(default_factory=default_prefix_map)
    axioms: tuple[Axiom, ...] = ()
    ontology_annotations: tuple[Annotation, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.prefix_map, PrefixMap):
            object.__setattr__(self, "prefix_map", PrefixMap(self.prefix_map))
        object.__setattr__(self, "imports", tuple(self.imports))
        object.__setattr__(self, "ontology_annotations", tuple(self.ontology_annotations))
        unique = dedup_axioms(self.axioms)
        object.__setattr__(self, "axioms", tuple(sorted(unique, key=axiom_key)))
        if self.version_iri is not None and self.version_iri == self.ontology_iri:
            raise ValueError("version IRI must differ from the ontology IRI")

    __hash__ = None  # type: ignore[assignment]

    def replace(self, **changes) -> Ontology:
        return replace(self, **changes)

    def with_axioms(self, axioms: Iterable[Axiom]) -> Ontology:
        return replace(self, axioms=tuple(axioms))

    @cached_property
    def logical_axioms(self) -> tuple[Axiom, ...]:
        return tuple(ax for ax in self.axioms if is_logical(ax))

    @cached_property
    def annotation_index(self) -> dict[Iri, list[AnnotationAssertion]]:
        index: dict[Iri, list[AnnotationAssertion]] = {}
        for ax in self.axioms:
            if isinstance(ax, AnnotationAssertion):
                index.setdefault(ax.subject, []).append(ax)
        return index

    @cached_property
    def declared(self) -> dict[Iri, set[str]]:
        out: dict[Iri, set[str]] = {}
        for ax in self.axioms:
            if isinstance(ax, Declaration):
                out.setdefault(ax.entity, set()).add(ax.kind)
        return out

    def annotation_values(self, subject: Iri, prop: Iri) -> list[Literal | Iri]:
        return [ax.value for ax in self.annotation_index.get(subject, ()) if ax.property == prop]

    def label(self, subject: Iri) -> str | None:
        for value in self.annotation_values(subject, RDFS_LABEL):
            return str(value)
        return None

    def is_obsolete(self, subject: Iri) -> bool:
        for value in self.annotation_values(subject, OWL_DEPRECATED):
            if isinstance(value, Literal) and value.lexical.strip().lower() == "true":
                return True
        label = self.label(subject)
        return label is not None and label.startswith("obsolete ")


def signature(o: Ontology) -> list[tuple[Iri, str]]:
    """Entities of the logical axioms and declarations, sorted by IRI then kind."""
    entities: set[tuple[Iri, str]] = set()
    for ax in o.axioms:
        if isinstance(ax, AnnotationAssertion):
            continue
        entities.update(axiom_entities(ax))
    return sorted(entities, key=lambda e: (e[0], _KIND_RANK[e[1]]))


def class_signature(o: Ontology) -> set[Iri]:
    return {iri for iri, kind in signature(o) if kind == CLASS}


def is_native(iri: Iri, base_iri_prefixes: Sequence[str]) -> bool:
    return any(iri.startswith(p) for p in base_iri_prefixes)


def defined_subject_is_native(ax: Axiom, base_iri_prefixes: Sequence[str]) -> bool:
    if isinstance(ax, SubClassOf):
        return isinstance(ax.sub, Named) and is_native(ax.sub.iri, base_iri_prefixes)
    if isinstance(ax, EquivalentClasses):
        first = ax.exprs[0]
        return isinstance(first, Named) and is_native(first.iri, base_iri_prefixes)
    if isinstance(ax, DisjointClasses):
        return any(isinstance(e, Named) and is_native(e.iri, base_iri_prefixes) for e in ax.exprs)
    if isinstance(ax, SubObjectPropertyOf):
        return is_native(ax.sub, base_iri_prefixes)
    if isinstance(ax, AnnotationAssertion):
        return is_native(ax.subject, base_iri_prefixes)
    if isinstance(ax, Declaration):
        return is_native(ax.entity, base_iri_prefixes)
    return False


def native_axioms(o: Ontology, base_iri_prefixes: Sequence[str]) -> list[Axiom]:
    if not base_iri_prefixes:
        raise ValueError("at least one base IRI prefix is required")
    return [ax for ax in o.axioms if defined_subject_is_native(ax, base_iri_prefixes)]


def merge(ontologies: Sequence[Ontology]) -> Ontology:
    """Union into the first ontology; its IRI, version and annotations are kept."""
    if not ontologies:
        raise ValueError("merge needs at least one ontology")
    root = ontologies[0]
    pm = root.prefix_map
    axioms: list[Axiom] = list(root.axioms)
    for other in ontologies[1:]:
        pm = pm.merged(other.prefix_map)
        axioms.extend(other.axioms)
    return Ontology(
        ontology_iri=root.ontology_iri,
        version_iri=root.version_iri,
        imports=(),
        prefix_map=pm,
        axioms=tuple(axioms),
        ontology_annotations=root.ontology_annotations,
    )


def declarations_for(axioms: Iterable[Axiom]) -> list[Declaration]:
    """Declarations covering every entity used by the given logical axioms."""
    decls = []
    seen = set()
    for ax in axioms:
        if isinstance(ax, AnnotationAssertion):
            continue
        for iri, kind in axiom_entities(ax):
            if (iri, kind) not in seen:
                seen.add((iri, kind))
                decls.append(Declaration(kind, iri))
    return decls

"""OBO Graphs JSON writer (emit only)."""

from __future__ import annotations

import json

from ..model import (
    CLASS,
    HAS_DBXREF,
    IAO_DEFINITION,
    OBJECT_PROPERTY,
    OWL_DEPRECATED,
    RDFS_COMMENT,
    RDFS_LABEL,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    signature,
)
from .obo import SYNONYM_SCOPES

_SYNONYM_PRED = {iri: "has" + scope.capitalize() + "Synonym" for scope, iri in SYNONYM_SCOPES.items()}

_PROPERTY_VALUE = {
    "type": "object",
    "required": ["pred", "val"],
    "properties": {"pred": {"type": "string"}, "val": {"type": "string"}},
}
OBOGRAPH_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["graphs"],
    "additionalProperties": False,
    "properties": {
        "graphs": {
            "type": "array",
            "minItems": 1,
            "maxItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "meta", "nodes", "edges", "logicalDefinitionAxioms"],
                "properties": {
                    "id": {"type": "string"},
                    "meta": {
                        "type": "object",
                        "properties": {
                            "version": {"type": "string"},
                            "basicPropertyValues": {"type": "array", "items": _PROPERTY_VALUE},
                        },
                    },
                    "nodes": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "type"],
                            "additionalProperties": False,
                            "properties": {
                                "id": {"type": "string"},
                                "lbl": {"type": "string"},
                                "type": {"enum": ["CLASS", "PROPERTY"]},
                                "meta": {
                                    "type": "object",
                                    "additionalProperties": False,
                                    "properties": {
                                        "definition": {
                                            "type": "object",
                                            "required": ["val"],
                                            "properties": {
                                                "val": {"type": "string"},
                                                "xrefs": {"type": "array", "items": {"type": "string"}},
                                            },
                                        },
                                        "xrefs": {
                                            "type": "array",
                                            "items": {
                                                "type": "object",
                                                "required": ["val"],
                                                "properties": {"val": {"type": "string"}},
                                            },
                                        },
                                        "synonyms": {"type": "array", "items": _PROPERTY_VALUE},
                                        "comments": {"type": "array", "items": {"type": "string"}},
                                        "deprecated": {"type": "boolean"},
                                        "basicPropertyValues": {"type": "array", "items": _PROPERTY_VALUE},
                                    },
                                },
                            },
                        },
                    },
                    "edges": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["sub", "pred", "obj"],
                            "additionalProperties": False,
                            "properties": {
                                "sub": {"type": "string"},
                                "pred": {"type": "string"},
                                "obj": {"type": "string"},
                            },
                        },
                    },
                    "logicalDefinitionAxioms": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["definedClassId", "genusIds", "restrictions"],
                            "properties": {
                                "definedClassId": {"type": "string"},
                                "genusIds": {"type": "array", "items": {"type": "string"}},
                                "restrictions": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "required": ["propertyId", "fillerId"],
                                        "properties": {
                                            "propertyId": {"type": "string"},
                                            "fillerId": {"type": "string"},
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        }
    },
}


def _text(value) -> str:
    return value.lexical if isinstance(value, Literal) else value


def _node_meta(o: Ontology, iri: str) -> dict:
    meta: dict = {}
    xrefs, synonyms, comments, pvs = [], [], [], []
    for ax in o.annotation_index.get(iri, ()):
        prop, value = ax.property, ax.value
        if prop == RDFS_LABEL:
            continue
        if prop == IAO_DEFINITION and "definition" not in meta:
            defn = {"val": _text(value)}
            refs = sorted(_text(a.value) for a in ax.annotations if a.property == HAS_DBXREF)
            if refs:
                defn["xrefs"] = refs
            meta["definition"] = defn
        elif prop == HAS_DBXREF:
            xrefs.append(_text(value))
        elif prop in _SYNONYM_PRED:
            synonyms.append({"pred": _SYNONYM_PRED[prop], "val": _text(value)})
        elif prop == RDFS_COMMENT:
            comments.append(_text(value))
        elif prop == OWL_DEPRECATED:
            if _text(value).strip().lower() == "true":
                meta["deprecated"] = True
        else:
            pvs.append({"pred": prop, "val": _text(value)})
    if xrefs:
        meta["xrefs"] = [{"val": x} for x in sorted(xrefs)]
    if synonyms:
        meta["synonyms"] = sorted(synonyms, key=lambda s: (s["pred"], s["val"]))
    if comments:
        meta["comments"] = sorted(comments)
    if pvs:
        meta["basicPropertyValues"] = sorted(pvs, key=lambda p: (p["pred"], p["val"]))
    return meta


def build_obograph(o: Ontology) -> dict:
    nodes = []
    for iri, kind in signature(o):
        if kind not in (CLASS, OBJECT_PROPERTY):
            continue
        node: dict = {"id": iri, "type": "CLASS" if kind == CLASS else "PROPERTY"}
        label = o.label(iri)
        if label is not None:
            node["lbl"] = label
        meta = _node_meta(o, iri)
        if meta:
            node["meta"] = meta
        nodes.append(node)

    edges = set()
    ldefs = []
    for ax in o.axioms:
        if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named):
            if isinstance(ax.sup, Named):
                edges.add((ax.sub.iri, "is_a", ax.sup.iri))
            elif isinstance(ax.sup, SomeValuesFrom) and isinstance(ax.sup.filler, Named):
                edges.add((ax.sub.iri, ax.sup.property, ax.sup.filler.iri))
        elif isinstance(ax, SubObjectPropertyOf):
            edges.add((ax.sub, "is_a", ax.sup))
        elif isinstance(ax, EquivalentClasses) and len(ax.exprs) == 2:
            defined, body = ax.exprs
            if isinstance(defined, Named) and isinstance(body, IntersectionOf):
                genus = [c.iri for c in body.conjuncts if isinstance(c, Named)]
                restr = [
                    {"propertyId": c.property, "fillerId": c.filler.iri}
                    for c in body.conjuncts
                    if isinstance(c, SomeValuesFrom) and isinstance(c.filler, Named)
                ]
                if len(genus) + len(restr) == len(body.conjuncts):
                    ldefs.append({"definedClassId": defined.iri, "genusIds": genus, "restrictions": restr})

    graph_meta: dict = {}
    if o.version_iri:
        graph_meta["version"] = o.version_iri
    pvs = [{"pred": a.property, "val": _text(a.value)} for a in o.ontology_annotations]
    if pvs:
        graph_meta["basicPropertyValues"] = sorted(pvs, key=lambda p: (p["pred"], p["val"]))
    graph = {
        "id": o.ontology_iri or "",
        "meta": graph_meta,
        "nodes": sorted(nodes, key=lambda n: n["id"]),
        "edges": [{"sub": s, "pred": p, "obj": b} for s, p, b in sorted(edges)],
        "logicalDefinitionAxioms": sorted(ldefs, key=lambda d: json.dumps(d, sort_keys=True)),
    }
    return {"graphs": [graph]}


def emit_obograph_json(o: Ontology) -> str:
    return json.dumps(build_obograph(o), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


__all__ = ["OBOGRAPH_SCHEMA", "build_obograph", "emit_obograph_json"]

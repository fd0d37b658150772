"""Ontology lifecycle toolkit: formats, EL classification, QC, imports, templates and releases."""

from .config import ProjectConfig, parse_config, to_yaml
from .io import emit_functional, emit_obo, emit_obograph_json, parse_functional, parse_obo, parse_seed_file
from .model import (
    Annotation,
    AnnotationAssertion,
    Bottom,
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
    Top,
    contract_iri,
    expand_curie,
    merge,
    native_axioms,
    signature,
)
from .reasoner import Taxonomy, classify, unintended_equivalences, unsatisfiable_classes

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "AnnotationAssertion",
    "Bottom",
    "Declaration",
    "DisjointClasses",
    "EquivalentClasses",
    "IntersectionOf",
    "Literal",
    "Named",
    "Ontology",
    "PrefixMap",
    "ProjectConfig",
    "SomeValuesFrom",
    "SubClassOf",
    "SubObjectPropertyOf",
    "Taxonomy",
    "Top",
    "classify",
    "contract_iri",
    "emit_functional",
    "emit_obo",
    "emit_obograph_json",
    "expand_curie",
    "merge",
    "native_axioms",
    "parse_config",
    "parse_functional",
    "parse_obo",
    "parse_seed_file",
    "signature",
    "to_yaml",
    "unintended_equivalences",
    "unsatisfiable_classes",
]

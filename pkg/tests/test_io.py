import json

import jsonschema
import pytest
from conftest import OBO_FIXTURES, OFN_FIXTURES

from ontoforge.errors import DuplicateId, Inexpressible, ParseError
from ontoforge.io import (
    OBOGRAPH_SCHEMA,
    emit_functional,
    emit_obo,
    emit_obograph_json,
    emit_seed_file,
    load_ontology,
    parse_functional,
    parse_obo,
    parse_seed_file,
)
from ontoforge.model import (
    CLASS,
    OBO,
    RDFS_LABEL,
    Annotation,
    AnnotationAssertion,
    Declaration,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
)

EX = OBO + "EX_"
GO = OBO + "GO_"


def obo_expressible(o: Ontology) -> bool:
    try:
        emit_obo(o)
    except Inexpressible:
        return False
    return True


class TestFunctional:
    def test_corpus_size(self):
        assert len(OFN_FIXTURES) >= 10

    @pytest.mark.parametrize("path", OFN_FIXTURES, ids=lambda p: p.name)
    def test_round_trip(self, path):
        o = load_ontology(path)
        assert parse_functional(emit_functional(o)) == o

    @pytest.mark.parametrize("path", OFN_FIXTURES, ids=lambda p: p.name)
    def test_emit_is_fixpoint(self, path):
        text = emit_functional(load_ontology(path))
        assert emit_functional(parse_functional(text)) == text

    def test_single_axiom(self):
        o = parse_functional("Prefix(:=<http://e.org/>) Ontology(<http://e.org/o> SubClassOf(:A :B))")
        assert o.axioms == (SubClassOf(Named("http://e.org/A"), Named("http://e.org/B")),)
        assert o.ontology_iri == "http://e.org/o"

    def test_anonymous_empty(self):
        o = parse_functional("Ontology()")
        assert o.ontology_iri is None and o.axioms == ()

    @pytest.mark.parametrize(
        "text",
        [
            "Ontology(<http://e/o> SubClassOf(<http://e/A> <http://e/B>)",
            "Ontology(<http://e/o> SubClassOf(<http://e/A> <http://e/B>)))",
            "Prefix(:=<http://e/>) Ontology(<http://e/o> Frobnicate(:A))",
            "Ontology(<http://e/o> SubClassOf(zz:A <http://e/B>))",
        ],
    )
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse_functional(text)

    def test_error_has_line(self):
        with pytest.raises(ParseError) as info:
            parse_functional("Ontology(<http://e/o>\n\nSubClassOf(<http://e/A>\n")
        assert info.value.line >= 1

    def test_empty_emits_default_prefixes(self):
        text = emit_functional(Ontology())
        assert "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)" in text
        assert text.rstrip().endswith("Ontology()")

    def test_version_header(self):
        o = Ontology(ontology_iri="http://e/o", version_iri="http://e/o/v1")
        assert "Ontology(<http://e/o> <http://e/o/v1>" in emit_functional(o)

    @pytest.mark.parametrize("path", OFN_FIXTURES, ids=lambda p: p.name)
    def test_byte_stable(self, path):
        o = load_ontology(path)
        outputs = {emit_functional(o) for _ in range(3)}
        outputs |= {emit_obograph_json(o) for _ in range(3)}
        assert len(outputs) == 2


class TestObo:
    def test_stanza(self):
        o = parse_obo("format-version: 1.4\nontology: ex\n\n[Term]\nid: EX:1\nname: heart\nis_a: EX:2\n")
        assert Declaration(CLASS, EX + "1") in o.axioms
        assert AnnotationAssertion(EX + "1", Annotation(RDFS_LABEL, Literal("heart"))) in o.axioms
        assert SubClassOf(Named(EX + "1"), Named(EX + "2")) in o.axioms
        assert o.ontology_iri == OBO + "ex.owl"

    def test_header_only(self):
        o = parse_obo("format-version: 1.4\nontology: ex\n")
        assert o.axioms == ()

    def test_single_intersection_is_error(self):
        text = "ontology: ex\n\n[Term]\nid: EX:1\nintersection_of: EX:2\n"
        with pytest.raises(ParseError) as info:
            parse_obo(text)
        assert info.value.line == 5

    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            parse_obo("ontology: ex\n\n[Term]\nid: EX:1\n\n[Term]\nid: EX:1\n")

    def test_unterminated_quote(self):
        with pytest.raises(ParseError):
            parse_obo('ontology: ex\n\n[Term]\nid: EX:1\ndef: "open []\n')

    def test_intersection_superclass_inexpressible(self):
        ax = SubClassOf(Named(EX + "1"), IntersectionOf((Named(EX + "2"), Named(EX + "3"))))
        with pytest.raises(Inexpressible) as info:
            emit_obo(Ontology(ontology_iri=OBO + "ex.owl", axioms=(ax,)))
        assert info.value.axioms == [ax]

    def test_empty_with_iri(self):
        text = emit_obo(Ontology(ontology_iri=OBO + "ex.owl"))
        assert "[" not in text and "ontology: ex" in text

    def test_relationship(self):
        o = parse_obo("ontology: ex\n\n[Term]\nid: EX:1\nrelationship: BFO:0000050 EX:3\n")
        assert SubClassOf(Named(EX + "1"), SomeValuesFrom(OBO + "BFO_0000050", Named(EX + "3"))) in o.axioms

    @pytest.mark.parametrize("path", OBO_FIXTURES, ids=lambda p: p.name)
    def test_obo_fixpoint(self, path):
        o = load_ontology(path)
        assert parse_obo(emit_obo(o)) == o
        assert len({emit_obo(o) for _ in range(3)}) == 1

    @pytest.mark.parametrize("path", OFN_FIXTURES, ids=lambda p: p.name)
    def test_expressible_ofn_fixpoint(self, path):
        o = load_ontology(path)
        if not obo_expressible(o):
            pytest.skip("not OBO-expressible")
        once = parse_obo(emit_obo(o))
        assert parse_obo(emit_obo(once)) == once

    def test_basic_fixture_is_canonical(self):
        path = next(p for p in OBO_FIXTURES if p.name == "01_basic.obo")
        assert emit_obo(load_ontology(path)) == path.read_text()

    def test_escapes(self):
        path = next(p for p in OBO_FIXTURES if p.name == "03_escapes.obo")
        o = load_ontology(path)
        assert o.label(OBO + "ESC_1") == "a name with ! bang and a colon: here"

    def test_foreign_ids_written_as_iris(self):
        o = parse_functional(
            "Prefix(:=<http://example.org/x#>) Ontology(<http://example.org/x.owl> "
            "Declaration(Class(:A)) SubClassOf(:A :B))"
        )
        text = emit_obo(o)
        assert "id: http://example.org/x#A" in text
        assert parse_obo(text).axioms == parse_obo(emit_obo(parse_obo(text))).axioms


class TestObograph:
    @pytest.mark.parametrize("path", OFN_FIXTURES, ids=lambda p: p.name)
    def test_schema_valid(self, path):
        doc = json.loads(emit_obograph_json(load_ontology(path)))
        jsonschema.validate(doc, OBOGRAPH_SCHEMA)

    def test_is_a_edge(self):
        o = Ontology(axioms=(SubClassOf(Named(EX + "1"), Named(EX + "2")),))
        graph = json.loads(emit_obograph_json(o))["graphs"][0]
        assert graph["edges"] == [{"sub": EX + "1", "pred": "is_a", "obj": EX + "2"}]

    def test_empty(self):
        graph = json.loads(emit_obograph_json(Ontology()))["graphs"][0]
        assert graph["nodes"] == [] and graph["edges"] == []

    def test_existential_edge(self):
        part_of = OBO + "BFO_0000050"
        o = Ontology(axioms=(SubClassOf(Named(EX + "1"), SomeValuesFrom(part_of, Named(EX + "3"))),))
        (edge,) = json.loads(emit_obograph_json(o))["graphs"][0]["edges"]
        assert edge["pred"] == part_of

    def test_schema_rejects_bad_shape(self):
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate({"graphs": [{"nodes": "oops"}]}, OBOGRAPH_SCHEMA)


class TestSeeds:
    pm = {"GO": GO}

    def test_comments(self):
        assert parse_seed_file("GO:1\n# note\nGO:2\n", self.pm).terms == [GO + "1", GO + "2"]

    def test_duplicate(self):
        seeds = parse_seed_file("GO:1\nGO:1\n", self.pm)
        assert seeds.terms == [GO + "1"] and len(seeds.warnings) == 1

    def test_unknown_prefix(self):
        seeds = parse_seed_file("ZZ:1", self.pm)
        assert seeds.terms == [] and len(seeds.errors) == 1

    def test_emit_round_trip(self):
        text = emit_seed_file([GO + "1", "http://x/y"], self.pm, "header")
        assert text == "# header\nGO:1\nhttp://x/y\n"
        assert parse_seed_file(text, self.pm).terms == [GO + "1", "http://x/y"]

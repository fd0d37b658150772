import json
from datetime import date

import jsonschema
import pytest
from conftest import FIXTURES

from ontoforge.errors import IncoherentOntology, QCGateFailed, ReleaseStepError
from ontoforge.io import OBOGRAPH_SCHEMA, load_ontology, parse_functional, parse_obo
from ontoforge.model import (
    OBO,
    OWL_VERSION_INFO,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    defined_subject_is_native,
    is_native,
    merge,
)
from ontoforge.reasoner import THING, classify, transitive_reduction
from ontoforge.release import (
    ReleasePlan,
    build_base,
    build_full,
    build_simple,
    load_import_modules,
    load_project,
    prepare_release,
    release_filename,
    stamp_version,
    working_ontology,
)

EXO = OBO + "EXO_"
FAO = OBO + "FAO_"
PART_OF = OBO + "BFO_0000050"
DATE = date(2022, 6, 22)


def plan(**kw):
    return ReleasePlan(release_date=DATE, base_iri_prefixes=[EXO], **kw)


def sub(a, b):
    return SubClassOf(Named(a), Named(b))


def taxonomy_pairs(o, classes):
    t = classify(o)
    return {(a, b) for a in classes for b in t.supers.get(a, {a, THING}) if b in classes}


def append_axioms(project, *lines):
    path = project / "src" / "ontology" / "exo-edit.ofn"
    text = path.read_text()
    head, _, _ = text.rpartition(")")
    path.write_text(head + "\n".join(lines) + "\n)\n")


@pytest.fixture
def released(project):
    artifacts = prepare_release(project, plan())
    cfg = load_project(project)
    merged = merge([working_ontology(project, cfg), *load_import_modules(project, cfg)])
    return project, artifacts, merged


def product(project, name):
    return load_ontology(project / "release" / release_filename("exo", name, "ofn"))


class TestPipeline:
    def test_all_files(self, released):
        project, artifacts, _ = released
        names = sorted(e.filename for e in artifacts.manifest)
        expected = sorted(release_filename("exo", p, f) for p in ("base", "full", "simple") for f in ("ofn", "obo", "json"))
        assert names == expected and artifacts.notes == []
        for name in names:
            assert (project / "release" / name).exists()

    def test_deterministic(self, project):
        prepare_release(project, plan())
        first = {p.name: p.read_bytes() for p in (project / "release").iterdir()}
        prepare_release(project, plan())
        second = {p.name: p.read_bytes() for p in (project / "release").iterdir()}
        assert first == second

    def test_full_has_template_and_import(self, released):
        project, _, _ = released
        full = product(project, "full")
        assert sub(EXO + "0000010", FAO + "0000003") in full.axioms
        assert full.label(FAO + "0000003") == "epithelial cell"

    def test_artifacts_reparse(self, released):
        project, artifacts, _ = released
        for (name, fmt), data in artifacts.files.items():
            text = data.decode()
            if fmt == "ofn":
                parse_functional(text)
            elif fmt == "obo":
                parse_obo(text)
            else:
                jsonschema.validate(json.loads(text), OBOGRAPH_SCHEMA)

    def test_version_stamped(self, released):
        project, _, _ = released
        full = product(project, "full")
        assert full.version_iri == OBO + "exo/releases/2022-06-22/exo-full.owl"
        assert [a.value.lexical for a in full.ontology_annotations if a.property == OWL_VERSION_INFO] == ["2022-06-22"]


class TestProducts:
    def test_base_refilter(self, released):
        project, _, merged = released
        base = product(project, "base")
        logical = [ax for ax in base.axioms if not isinstance(ax, Declaration)]
        assert logical and all(defined_subject_is_native(ax, [EXO]) for ax in logical)
        assert base.imports == () and base.version_iri.endswith("exo-base.owl")

    def test_base_keeps_native_logic(self, released):
        project, _, merged = released
        cfg = load_project(project)
        base = product(project, "base")
        full = product(project, "full")
        imports = load_import_modules(project, cfg)
        native = [c for c in classify(full).named() if is_native(c, [EXO])]
        assert taxonomy_pairs(merge([base, *imports]), native) == taxonomy_pairs(full, native)

    def test_full_matches_merged(self, released):
        project, _, merged = released
        full = product(project, "full")
        names = classify(merged).named()
        assert taxonomy_pairs(full, names) == taxonomy_pairs(merged, names)

    def test_simple_shape(self, released):
        project, _, _ = released
        simple = product(project, "simple")
        for ax in simple.logical_axioms:
            assert not isinstance(ax, EquivalentClasses)
            assert isinstance(ax, SubClassOf) and isinstance(ax.sub, Named)
            assert is_native(ax.sub.iri, [EXO])
            assert isinstance(ax.sup, Named) or (
                isinstance(ax.sup, SomeValuesFrom) and isinstance(ax.sup.filler, Named)
            )
            assert not isinstance(ax.sup, IntersectionOf)
        assert transitive_reduction(simple, classify(simple)) == simple

    def test_simple_splits_definition(self, released):
        project, _, _ = released
        simple = product(project, "simple")
        assert sub(EXO + "0000003", EXO + "0000001") in simple.axioms
        assert SubClassOf(Named(EXO + "0000003"), SomeValuesFrom(PART_OF, Named(FAO + "0000004"))) in simple.axioms
        # the asserted nodal cell -> muscle cell edge is implied via cardiac muscle cell
        assert sub(EXO + "0000002", FAO + "0000002") not in simple.axioms


A, B, C, R = (OBO + f"EXO_{n}" for n in ("A", "B", "C", "r"))
FO1, FO2 = FAO + "1", FAO + "2"


class TestBuilders:
    def test_base_example(self):
        native = Ontology(axioms=(sub(A, FO1),))
        merged = merge([native, Ontology(axioms=(sub(FO1, FO2),))])
        base = build_base(merged, native, [EXO])
        assert [ax for ax in base.axioms if not isinstance(ax, Declaration)] == [sub(A, FO1)]

    def test_base_header_only(self):
        native = Ontology(ontology_iri=OBO + "exo.owl", axioms=(sub(FO1, FO2),))
        assert build_base(native, native, [EXO]).axioms == ()

    def test_full_adds_inference(self):
        o = Ontology(axioms=(EquivalentClasses((Named(A), SomeValuesFrom(R, Named(C)))), SubClassOf(Named(B), SomeValuesFrom(R, Named(C)))))
        full = build_full(o, classify(o))
        assert any(isinstance(ax, SubClassOf) and ax.sub == Named(B) and ax.sup == Named(A) for ax in full.axioms)

    def test_full_saturated_unchanged(self):
        o = Ontology(axioms=(sub(A, B),))
        assert build_full(o, classify(o)) == o

    def test_full_incoherent(self):
        o = Ontology(axioms=(sub(A, B), sub(A, C), DisjointClasses((Named(B), Named(C)))))
        with pytest.raises(IncoherentOntology):
            build_full(o, classify(o))

    def test_simple_example(self):
        o = Ontology(axioms=(EquivalentClasses((Named(A), IntersectionOf((Named(B), SomeValuesFrom(R, Named(C)))))),))
        simple = build_simple(o, classify(o), [EXO])
        assert sub(A, B) in simple.axioms
        assert SubClassOf(Named(A), SomeValuesFrom(R, Named(C))) in simple.axioms
        assert not any(isinstance(ax, EquivalentClasses) for ax in simple.axioms)

    def test_simple_reduces(self):
        o = Ontology(axioms=(sub(A, B), sub(B, C), sub(A, C)))
        assert sub(A, C) not in build_simple(o, classify(o), [EXO]).axioms

    def test_simple_empty(self):
        assert build_simple(Ontology(), classify(Ontology()), [EXO]).axioms == ()

    def test_stamp(self):
        p = plan()
        once = stamp_version(Ontology(ontology_iri=OBO + "exo.owl"), p, "full", "exo")
        assert once.version_iri == OBO + "exo/releases/2022-06-22/exo-full.owl"
        assert stamp_version(once, p, "full", "exo") == once

    def test_stamp_custom_template(self):
        p = plan(version_iri_template="http://x/{id}/{date}/{product}")
        assert stamp_version(Ontology(), p, "base", "exo").version_iri == "http://x/exo/2022-06-22/base"

    def test_plan_validation(self):
        with pytest.raises(ValueError):
            ReleasePlan(products=["tiny"])
        assert ReleasePlan(products=["simple", "base"], formats=["json", "ofn"]).products == ["base", "simple"]


class TestFailures:
    def test_unsatisfiable_blocks_release(self, project):
        append_axioms(project, "DisjointClasses(EXO:0000001 FAO:0000002)")
        with pytest.raises(QCGateFailed) as info:
            prepare_release(project, plan())
        assert {r.check_id for r in info.value.report.rows} >= {"incoherent_class"}
        assert sorted(p.name for p in (project / "release").iterdir()) == ["qc-report.tsv"]

    def test_unsatisfiable_forced(self, project):
        append_axioms(project, "DisjointClasses(EXO:0000001 FAO:0000002)")
        with pytest.raises(ReleaseStepError) as info:
            prepare_release(project, plan(force=True))
        assert info.value.step == 3 and isinstance(info.value.cause, IncoherentOntology)

    def test_qc_error_writes_only_report(self, project):
        append_axioms(project, 'AnnotationAssertion(rdfs:comment EXO:0000001 "padded ")')
        with pytest.raises(QCGateFailed):
            prepare_release(project, plan())
        assert sorted(p.name for p in (project / "release").iterdir()) == ["qc-report.tsv"]

    def test_force_writes_products(self, project):
        append_axioms(project, 'AnnotationAssertion(rdfs:comment EXO:0000001 "padded ")')
        artifacts = prepare_release(project, plan(force=True))
        assert (project / "release" / "exo.ofn").exists() and artifacts.qc_report.summary["ERROR"] == 1

    def test_parse_error_reports_step(self, project):
        (project / "src" / "ontology" / "exo-edit.ofn").write_text("Ontology(")
        with pytest.raises(ReleaseStepError) as info:
            prepare_release(project, plan())
        assert info.value.step == 1

    def test_inexpressible_obo_noted(self, project):
        append_axioms(project, "SubClassOf(EXO:0000002 ObjectIntersectionOf(EXO:0000001 FAO:0000002))")
        artifacts = prepare_release(project, plan())
        assert "exo.obo" not in {e.filename for e in artifacts.manifest}
        assert any("exo.obo" in n for n in artifacts.notes)
        assert "# skipped exo.obo" in (project / "release" / "manifest.tsv").read_text()


class TestGoldens:
    def test_simple_and_manifest(self, released):
        project, _, _ = released
        golden = FIXTURES / "release_golden"
        for name in ("exo-simple.ofn", "manifest.tsv"):
            assert (project / "release" / name).read_bytes() == (golden / name).read_bytes(), name

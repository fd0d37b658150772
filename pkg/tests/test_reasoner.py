import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from oracle import dense_subsumptions, named_pairs, random_ontology

from ontoforge.errors import IncoherentOntology
from ontoforge.model import (
    BOTTOM,
    IS_INFERRED,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    class_signature,
)
from ontoforge.reasoner import (
    NOTHING,
    THING,
    assert_inferred,
    classify,
    normalize,
    transitive_reduction,
    unintended_equivalences,
    unsatisfiable_classes,
)

NS = "http://e/"
A, B, C, D, R = (NS + x for x in "ABCDr")


def n(iri):
    return Named(iri)


def sub(a, b):
    return SubClassOf(n(a), n(b))


def onto(*axioms):
    return Ontology(axioms=axioms)


def classes_of(o):
    return sorted(class_signature(o) - {THING, NOTHING})


def subclass_edges(o):
    return {(ax.sub.iri, ax.sup.iri) for ax in o.axioms if isinstance(ax, SubClassOf) and isinstance(ax.sup, Named)}


class TestNormalize:
    def test_plain_subclass_unchanged(self):
        ns = normalize(onto(sub(A, B)))
        assert ns.nf1 == {(A, B)} and not ns.aux

    def test_disjoint_pairwise(self):
        ns = normalize(onto(DisjointClasses((n(A), n(B), n(C)))))
        assert sorted(tuple(sorted(p[:2])) for p in ns.nf2 if p[2] == NOTHING) == [(A, B), (A, C), (B, C)]

    def test_definition_uses_fresh_name_for_existential(self):
        o = onto(EquivalentClasses((n(A), IntersectionOf((n(B), SomeValuesFrom(R, n(C)))))))
        ns = normalize(o)
        (fresh,) = ns.aux
        assert (A, R, fresh) in ns.nf3 or any(f == fresh for _, _, f in ns.nf4)
        assert classify(o).supers[A] >= {A, B}


class TestClassify:
    def test_transitivity(self):
        assert classify(onto(sub(A, B), sub(B, C))).subsumes(C, A)

    def test_disjoint_makes_unsatisfiable(self):
        t = classify(onto(sub(A, B), sub(A, C), DisjointClasses((n(B), n(C)))))
        assert unsatisfiable_classes(t) == [A]

    def test_defined_existential(self):
        o = onto(EquivalentClasses((n(A), SomeValuesFrom(R, n(C)))), SubClassOf(n(B), SomeValuesFrom(R, n(C))))
        assert classify(o).subsumes(A, B)

    def test_coherent(self):
        assert unsatisfiable_classes(classify(onto(sub(A, B)))) == []

    def test_direct_bottom(self):
        assert unsatisfiable_classes(classify(onto(SubClassOf(n(A), BOTTOM)))) == [A]

    def test_bottom_propagates_through_edges(self):
        o = onto(SubClassOf(n(A), SomeValuesFrom(R, n(B))), SubClassOf(n(B), BOTTOM))
        assert unsatisfiable_classes(classify(o)) == [A, B]

    def test_role_hierarchy(self):
        s = NS + "s"
        o = onto(
            SubClassOf(n(A), SomeValuesFrom(R, n(B))),
            SubObjectPropertyOf(R, s),
            EquivalentClasses((n(C), SomeValuesFrom(s, n(B)))),
        )
        assert classify(o).subsumes(C, A)


class TestOracleAgreement:
    @pytest.mark.parametrize("seed", range(40))
    def test_matches_dense_fixpoint(self, seed):
        o = random_ontology(seed)
        t = classify(o)
        assert named_pairs(t, classes_of(o)) == dense_subsumptions(o)

    def test_oracle_sees_hand_example(self):
        o = onto(EquivalentClasses((n(A), SomeValuesFrom(R, n(C)))), SubClassOf(n(B), SomeValuesFrom(R, n(C))))
        assert (B, A) in dense_subsumptions(o)


seeds = st.integers(0, 10_000)
fast = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


class TestProperties:
    @fast
    @given(seeds, st.integers(0, 10_000))
    def test_monotone(self, seed, extra_seed):
        base = random_ontology(seed, max_axioms=30)
        extra = random_ontology(extra_seed, max_axioms=15)
        bigger = base.with_axioms(base.axioms + extra.axioms)
        before, after = classify(base), classify(bigger)
        for a in classes_of(base):
            assert before.supers[a] <= after.supers[a]

    @fast
    @given(seeds)
    def test_reduction_preserves_taxonomy(self, seed):
        o = random_ontology(seed, disjoint_rate=0.0)
        t = classify(o)
        if t.unsatisfiable:
            return
        reduced = transitive_reduction(o, t)
        assert named_pairs(classify(reduced), classes_of(o)) == named_pairs(t, classes_of(o))

    @fast
    @given(seeds)
    def test_assert_inferred_adds_no_entailment(self, seed):
        o = random_ontology(seed, disjoint_rate=0.0)
        t = classify(o)
        if t.unsatisfiable:
            return
        full = assert_inferred(o, t)
        assert named_pairs(classify(full), classes_of(o)) == named_pairs(t, classes_of(o))


class TestUnintendedEquivalence:
    def test_mutual_subclass(self):
        o = onto(sub(A, B), sub(B, A))
        assert unintended_equivalences(classify(o), o) == [(A, B)]

    def test_sanctioned(self):
        o = onto(EquivalentClasses((n(A), n(B))))
        assert unintended_equivalences(classify(o), o) == []

    def test_unsatisfiable_excluded(self):
        o = onto(SubClassOf(n(A), BOTTOM), SubClassOf(n(B), BOTTOM))
        assert unintended_equivalences(classify(o), o) == []


class TestAssertInferred:
    def test_nothing_to_add(self):
        o = onto(sub(A, B))
        assert assert_inferred(o, classify(o)) == o

    def test_adds_annotated_edge(self):
        o = onto(EquivalentClasses((n(A), SomeValuesFrom(R, n(C)))), SubClassOf(n(B), SomeValuesFrom(R, n(C))))
        full = assert_inferred(o, classify(o))
        (added,) = set(full.axioms) - set(o.axioms)
        assert (added.sub, added.sup) == (n(B), n(A))
        assert [a.property for a in added.annotations] == [IS_INFERRED]

    def test_incoherent(self):
        o = onto(sub(A, B), sub(A, C), DisjointClasses((n(B), n(C))))
        with pytest.raises(IncoherentOntology):
            assert_inferred(o, classify(o))


class TestReduction:
    def test_drops_shortcut(self):
        o = onto(sub(A, B), sub(B, C), sub(A, C))
        assert subclass_edges(transitive_reduction(o, classify(o))) == {(A, B), (B, C)}

    def test_chain_unchanged(self):
        o = onto(sub(A, B), sub(B, C))
        assert transitive_reduction(o, classify(o)) == o

    def test_diamond(self):
        o = onto(sub(A, B), sub(A, C), sub(B, D), sub(C, D), sub(A, D))
        reduced = subclass_edges(transitive_reduction(o, classify(o)))
        assert reduced == subclass_edges(o) - {(A, D)}

    def test_incoherent(self):
        o = onto(SubClassOf(n(A), BOTTOM))
        with pytest.raises(IncoherentOntology):
            transitive_reduction(o, classify(o))

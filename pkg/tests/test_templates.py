import pytest
from conftest import FIXTURES, TEMPLATE_PREFIXES
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoforge.errors import ExpressionSyntaxError, PatternError, UnboundVariable, UnknownTemplateString
from ontoforge.io import emit_functional, parse_functional
from ontoforge.model import (
    OBO,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    declarations_for,
    default_prefix_map,
    expand_curie,
    merge,
)
from ontoforge.qc import CheckConfig, run_checks
from ontoforge.templates import (
    FillerTable,
    compile_pattern,
    compile_table_template,
    load_pattern,
    parse_expression,
    parse_filler_table,
    term_resolver,
)

T = FIXTURES / "templates"
EX = OBO + "EX_"
PART_OF = OBO + "BFO_0000050"


@pytest.fixture(scope="module")
def pattern():
    return load_pattern((T / "part_of_whole.pattern.yaml").read_text())


@pytest.fixture
def labels(template_pm):
    rows = [line.split("\t") for line in (T / "labels.tsv").read_text().splitlines()]
    return {expand_curie(curie, template_pm): text for curie, text in rows}


def render(axioms, pm):
    return emit_functional(Ontology(prefix_map=pm, axioms=tuple(axioms)))


class TestGoldens:
    def test_pattern(self, pattern, template_pm, labels):
        table = parse_filler_table((T / "part_of_whole.tsv").read_text())
        out = render(compile_pattern(pattern, table, template_pm, labels), template_pm)
        assert out == (T / "part_of_whole.golden.ofn").read_text()

    def test_table(self, template_pm):
        out = render(compile_table_template((T / "cells.tsv").read_text(), template_pm), template_pm)
        assert out == (T / "cells.golden.ofn").read_text()

    def test_golden_parses(self):
        for name in ("part_of_whole", "cells"):
            o = parse_functional((T / f"{name}.golden.ofn").read_text())
            assert o.logical_axioms


class TestPatternExamples:
    def test_equivalence_shape(self, template_pm):
        p = load_pattern(
            "pattern_name: pw\nrelations:\n  partOf: BFO:0000050\nvars:\n  part: owl:Thing\n  whole: owl:Thing\n"
            "equivalentTo: \"{part} and (partOf some {whole})\"\n"
        )
        table = FillerTable(["defined_class", "part", "whole"], [["EX:10", "EX:1", "EX:2"]])
        axioms = compile_pattern(p, table, template_pm, {})
        expected = EquivalentClasses(
            (Named(EX + "10"), IntersectionOf((Named(EX + "1"), SomeValuesFrom(PART_OF, Named(EX + "2")))))
        )
        assert expected in axioms

    def test_empty_table(self, pattern, template_pm):
        assert compile_pattern(pattern, FillerTable(["defined_class", "part", "whole"], []), template_pm, {}) == []

    def test_missing_var_column(self, pattern, template_pm):
        with pytest.raises(UnboundVariable):
            compile_pattern(pattern, FillerTable(["defined_class", "part"], [["EX:1", "EX:2"]]), template_pm, {})

    def test_undeclared_slot(self):
        with pytest.raises(UnboundVariable):
            load_pattern("pattern_name: p\nvars:\n  a: owl:Thing\nequivalentTo: \"{a} and {b}\"\n")

    def test_needs_one_logic_template(self):
        with pytest.raises(PatternError):
            load_pattern("pattern_name: p\nvars:\n  a: owl:Thing\n")

    def test_bad_expression(self, template_pm):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression("EX:1 and (", term_resolver(template_pm))

    def test_missing_labels_fall_back(self, pattern, template_pm):
        warnings = []
        table = parse_filler_table((T / "part_of_whole.tsv").read_text())
        compile_pattern(pattern, table, template_pm, {}, warnings)
        assert warnings and all("no label" in w for w in warnings)


class TestTableExamples:
    def test_mapping(self, template_pm):
        table = "ID\tLabel\tParent\nID\tLABEL\tSC %\nEX:5\tlung cell\tEX:4\n"
        axioms = compile_table_template(table, template_pm)
        assert SubClassOf(Named(EX + "5"), Named(EX + "4")) in axioms
        o = Ontology(axioms=tuple(axioms))
        assert o.label(EX + "5") == "lung cell" and EX + "5" in o.declared

    def test_empty_sc_cell(self, template_pm):
        axioms = compile_table_template("ID\tParent\nID\tSC %\nEX:5\t\n", template_pm)
        assert not any(isinstance(a, SubClassOf) for a in axioms)

    def test_unknown_template_string(self, template_pm):
        with pytest.raises(UnknownTemplateString) as info:
            compile_table_template("ID\tOdd\nID\tXYZ %\nEX:5\tx\n", template_pm)
        assert info.value.row == 2 and info.value.column == "Odd"


rows = st.lists(
    st.tuples(st.integers(10, 99), st.sampled_from(["UBERON:0000042", "UBERON:0002349"]), st.sampled_from(["UBERON:0000948", "UBERON:0002048"])),
    min_size=2,
    max_size=6,
    unique_by=lambda r: r[0],
)


class TestProperties:
    @settings(max_examples=30, deadline=None)
    @given(rows, st.randoms())
    def test_row_local(self, data, rnd):
        pm = default_prefix_map(TEMPLATE_PREFIXES)
        p = load_pattern((T / "part_of_whole.pattern.yaml").read_text())
        table_rows = [[f"EX:00000{a}", b, c] for a, b, c in data]
        cols = ["defined_class", "part", "whole"]
        whole = set(compile_pattern(p, FillerTable(cols, table_rows), pm, {}))
        pieces = set()
        for row in table_rows:
            pieces |= set(compile_pattern(p, FillerTable(cols, [row]), pm, {}))
        shuffled = list(table_rows)
        rnd.shuffle(shuffled)
        assert whole == pieces == set(compile_pattern(p, FillerTable(cols, shuffled), pm, {}))

    def test_no_dangling_after_declaring_imports(self, pattern, template_pm, labels):
        table = parse_filler_table((T / "part_of_whole.tsv").read_text())
        axioms = compile_pattern(pattern, table, template_pm, labels)
        imported = Ontology(axioms=tuple(declarations_for(axioms)))
        merged = merge([Ontology(axioms=tuple(axioms)), imported])
        assert run_checks(merged, None, CheckConfig(enabled=["dangling_reference"])).rows == []

    def test_byte_stable(self, pattern, template_pm, labels):
        table = parse_filler_table((T / "part_of_whole.tsv").read_text())
        outs = {render(compile_pattern(pattern, table, template_pm, labels), template_pm) for _ in range(3)}
        assert len(outs) == 1

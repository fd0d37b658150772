import pytest
from hypothesis import given
from hypothesis import strategies as st

from ontoforge.config import (
    DEFAULT_LICENSE,
    FORMATS,
    PRODUCTS,
    ChecksConfig,
    ImportConfig,
    ProjectConfig,
    parse_config,
    to_yaml,
)
from ontoforge.errors import InvalidConfig
from ontoforge.model import OBO


def test_defaults():
    cfg = parse_config("id: exo\ntitle: Example Ontology\n")
    assert cfg.export_formats == FORMATS and cfg.release_products == PRODUCTS
    assert cfg.title == "Example Ontology"
    assert cfg.license == DEFAULT_LICENSE
    assert cfg.base_iri == OBO + "EXO_"
    assert cfg.edit_file == "src/ontology/exo-edit.ofn"
    assert cfg.ontology_iri == OBO + "exo.owl"


@pytest.mark.parametrize(
    "text",
    [
        "id: 9bad\n",
        "title: no id\n",
        "id: exo\nimports:\n  - id: fao\n    source: x.ofn\n    method: mireot\n    relations: [BFO:0000050]\n",
        "id: exo\nimports:\n  - id: fao\n    source: x.ofn\n    method: relation\n",
        "id: exo\nimports:\n  - id: fao\n    source: x.ofn\n  - id: fao\n    source: y.ofn\n",
        "id: exo\nimports:\n  - id: fao\n    source: x.ofn\n    method: guess\n",
        "id: exo\nexport_formats: [owl]\n",
        "id: exo\nchecks:\n  severity_overrides:\n    missing_label: FATAL\n",
        "id: exo\nchecks:\n  enabled: [no_such_check]\n",
        "- just\n- a list\n",
        "id: [unclosed\n",
    ],
)
def test_invalid(text):
    with pytest.raises(InvalidConfig):
        parse_config(text)


def test_unknown_keys_warn():
    warnings = []
    parse_config("id: exo\nmystery: 1\n", warnings)
    assert any("mystery" in w for w in warnings)


def test_prefix_map():
    cfg = parse_config(
        "id: exo\nimports:\n  - id: fao\n    source: x.ofn\nprefixes:\n  BFO: http://purl.obolibrary.org/obo/BFO_\n"
    )
    pm = cfg.prefix_map()
    assert pm["EXO"] == OBO + "EXO_" and pm["FAO"] == OBO + "FAO_" and pm["BFO"] == OBO + "BFO_"


def test_check_config():
    cfg = parse_config("id: exo\nchecks:\n  disabled: [missing_definition]\n  severity_overrides:\n    missing_label: WARN\n")
    cc = cfg.check_config()
    assert cc.disabled == ["missing_definition"]
    assert cc.severity_overrides == {"missing_label": "WARN"}
    assert cc.base_iri_prefixes == [OBO + "EXO_"]


def test_custom_checks():
    cfg = parse_config(
        "id: exo\nchecks:\n  custom:\n    - id: needs_comment\n      severity: WARN\n"
        "      property: http://www.w3.org/2000/01/rdf-schema#comment\n"
    )
    (rule,) = cfg.check_config().custom_checks
    assert (rule.id, rule.severity, rule.mode) == ("needs_comment", "WARN", "required")


ids = st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)
imports = st.lists(
    st.builds(
        ImportConfig,
        id=ids,
        source=st.sampled_from(["sources/a.ofn", "https://example.org/b.obo"]),
        method=st.sampled_from(["mireot", "slme_bot"]),
    ),
    max_size=3,
    unique_by=lambda i: i.id,
).map(tuple)


@given(
    ids,
    st.text("abc XYZ", min_size=1, max_size=20).map(str.strip).filter(bool),
    st.lists(st.sampled_from(FORMATS), min_size=1, unique=True),
    st.lists(st.sampled_from(PRODUCTS), min_size=1, unique=True),
    imports,
)
def test_yaml_round_trip(pid, title, formats, products, imps):
    cfg = ProjectConfig(
        id=pid,
        title=title,
        base_iri=OBO + pid.upper() + "_",
        export_formats=tuple(f for f in FORMATS if f in formats),
        release_products=tuple(p for p in PRODUCTS if p in products),
        imports=imps,
        checks=ChecksConfig(disabled=("missing_definition",)),
    )
    assert parse_config(to_yaml(cfg)) == cfg


def test_defaults_round_trip():
    cfg = parse_config("id: exo\n")
    assert parse_config(to_yaml(cfg)) == cfg

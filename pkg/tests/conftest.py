from __future__ import annotations

import logging
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ontoforge.model import default_prefix_map  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
OFN_FIXTURES = sorted((FIXTURES / "ofn").glob("*.ofn"))
OBO_FIXTURES = sorted((FIXTURES / "obo").glob("*.obo"))

TEMPLATE_PREFIXES = {
    p: f"http://purl.obolibrary.org/obo/{p}_" for p in ("EX", "UBERON", "BFO", "CL")
}


@pytest.fixture
def template_pm():
    return default_prefix_map(TEMPLATE_PREFIXES)


@pytest.fixture
def project(tmp_path) -> Path:
    """A writable copy of the end-to-end fixture project."""
    dest = tmp_path / "exo"
    shutil.copytree(FIXTURES / "project", dest)
    return dest


@pytest.fixture(autouse=True)
def _isolated_cache(monkeypatch, tmp_path):
    monkeypatch.delenv("ONTOFORGE_CACHE", raising=False)


@pytest.fixture(autouse=True)
def _reset_logging():
    """The CLI binds a handler to whatever stderr is current; drop it so later tests don't log to a closed capture."""
    yield
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)

import json
from pathlib import Path

import pytest

from film_accord.catalog_ingest import load_catalog
from film_accord.channels import ColorEmotionKB, EmotionLexicon
from film_accord.emotion_model import EmotionScores
from film_accord.fuzzy_inference import default_system

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fis():
    return default_system()


@pytest.fixture(scope="session")
def lexicon():
    return EmotionLexicon.default()


@pytest.fixture(scope="session")
def color_kb():
    return ColorEmotionKB.default()


@pytest.fixture(scope="session")
def paper_catalog():
    return load_catalog(FIXTURES / "paper_12.catalog")


@pytest.fixture(scope="session")
def favorites_catalog():
    return load_catalog(FIXTURES / "favorites.catalog")


@pytest.fixture(scope="session")
def survey_scores():
    doc = json.loads((FIXTURES / "survey_scores.json").read_text("utf-8"))
    return {
        entry["id"]: EmotionScores.from_mapping(entry["scores"], where=entry["id"])
        for entry in doc["movies"]
    }


def pytest_terminal_summary(terminalreporter):
    import sys

    # Read the results off whichever module object pytest actually loaded.
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None) if module else None
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)

from __future__ import annotations

from pathlib import Path

import pytest

from gramtrans.backends import TMBackend, TranslationMemory
from gramtrans.conllu import FixtureParseProvider
from gramtrans.grammar import locale_by_code
from gramtrans.lexicon import Lexicon, load_lexicon
from gramtrans.realize import default_context
from gramtrans.templates import load_project, load_records
from gramtrans.transfer import Gazetteer

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def en_locale():
    return locale_by_code("en-US")


@pytest.fixture(scope="session")
def de_locale():
    return locale_by_code("de-DE")


@pytest.fixture(scope="session")
def en_ctx(en_locale):
    entries = load_lexicon(FIXTURES / "lexicons" / "en-US.json")
    return default_context(en_locale, Lexicon(entries))


@pytest.fixture(scope="session")
def de_ctx(de_locale):
    entries = load_lexicon(FIXTURES / "lexicons" / "de-DE.json")
    return default_context(de_locale, Lexicon(entries))


@pytest.fixture(scope="session")
def bulls_project():
    return load_project(FIXTURES / "bulls_nuggets" / "project.json")


@pytest.fixture(scope="session")
def bulls_records():
    return load_records(FIXTURES / "bulls_nuggets" / "data.jsonl")


@pytest.fixture(scope="session")
def bulls_backend():
    return TMBackend(TranslationMemory.from_file(FIXTURES / "bulls_nuggets" / "tm.json"))


@pytest.fixture(scope="session")
def bulls_parses(de_locale):
    return FixtureParseProvider.from_file(
        FIXTURES / "bulls_nuggets" / "parses.de-DE.conllu", de_locale
    )


@pytest.fixture(scope="session")
def gazetteer():
    return Gazetteer.from_file(FIXTURES / "bulls_nuggets" / "gazetteer.txt")


REFERENCE_RECAP_EN = [
    "Chicago Bulls vs. Denver Nuggets",
    "The match between the Chicago Bulls and the Denver Nuggets took place "
    "on Thursday (January 1, 2015) at the sold-out United Center (Illinois).",
    "Over 20000 enthusiastic fans came to Chicago on the 1st gameday of the "
    "2015 season, completely filling the stadium.",
    "The home team won with 106 - 101 against the visiting team from Denver.",
    "The best player of the game was undoubtedly Jimmy Butler of the Chicago "
    "Bulls. He led the team to victory with 26 points, 8 impressive rebounds, "
    "8 precise assists, 2 crucial steals, and 1 spectacular block.",
    "On the contrary, the Denver Nuggets were unable to secure a win despite "
    "the impressive performances of their top player. Wilson Chandler was "
    "the leading scorer on the team with 22 points...",
]


@pytest.fixture(scope="session")
def reference_recap_en():
    return list(REFERENCE_RECAP_EN)

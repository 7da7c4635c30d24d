"""Explicit-table lexicon: every surface form is enumerated, none guessed.

Inflection-table keys are dotted strings:

* nouns and pronouns: ``<case>.<number>`` with case in
  nom/gen/dat/acc/loc/ins/voc and number in sg/du/pl, e.g. ``dat.sg``
* verbs: ``<tense>.<person>.<number>`` with tense in past/pres/fut and
  person in 1/2/3, e.g. ``past.3.sg``

A lexicon file is one JSON document per locale holding an array of
entry objects: {"lemma", "pos", "locale", "gender"?, "inflections",
"plural_stem"?}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .grammar import (
    Case,
    Gender,
    Number,
    PartOfSpeech,
    Person,
    Tense,
)

CASE_CODES: dict[Case, str] = {
    Case.NOMINATIVE: "nom",
    Case.GENITIVE: "gen",
    Case.DATIVE: "dat",
    Case.ACCUSATIVE: "acc",
    Case.LOCATIVE: "loc",
    Case.INSTRUMENTAL: "ins",
    Case.VOCATIVE: "voc",
}

NUMBER_CODES: dict[Number, str] = {
    Number.SINGULAR: "sg",
    Number.DUAL: "du",
    Number.PLURAL: "pl",
}

TENSE_CODES: dict[Tense, str] = {
    Tense.PAST: "past",
    Tense.PRESENT: "pres",
    Tense.FUTURE: "fut",
}

PERSON_CODES: dict[Person, str] = {
    Person.FIRST: "1",
    Person.SECOND: "2",
    Person.THIRD: "3",
}

_CASE_BY_CODE = {v: k for k, v in CASE_CODES.items()}
_NUMBER_BY_CODE = {v: k for k, v in NUMBER_CODES.items()}
_TENSE_BY_CODE = {v: k for k, v in TENSE_CODES.items()}
_PERSON_BY_CODE = {v: k for k, v in PERSON_CODES.items()}


def nominal_key(case: Case, number: Number) -> str:
    return f"{CASE_CODES[case]}.{NUMBER_CODES[number]}"


def verb_key(tense: Tense, person: Person, number: Number) -> str:
    return f"{TENSE_CODES[tense]}.{PERSON_CODES[person]}.{NUMBER_CODES[number]}"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    pos: PartOfSpeech
    locale: str
    gender: Optional[Gender] = None
    inflections: Mapping[str, str] = field(default_factory=dict)
    plural_stem: Optional[str] = None


def _check_key(entry_lemma: str, pos: PartOfSpeech, key: str) -> None:
    parts = key.split(".")
    if pos in (PartOfSpeech.NOUN, PartOfSpeech.PRONOUN):
        ok = (
            len(parts) == 2
            and parts[0] in _CASE_BY_CODE
            and parts[1] in _NUMBER_BY_CODE
        )
    else:
        ok = (
            len(parts) == 3
            and parts[0] in _TENSE_BY_CODE
            and parts[1] in _PERSON_BY_CODE
            and parts[2] in _NUMBER_BY_CODE
        )
    if not ok:
        raise LexiconError(
            f"entry {entry_lemma!r}: key {key!r} is not legal for {pos.value}"
        )


def entry_from_dict(data: Mapping) -> LexiconEntry:
    pos = PartOfSpeech(data["pos"])
    gender = Gender(data["gender"]) if "gender" in data else None
    inflections = dict(data.get("inflections", {}))
    for key in inflections:
        _check_key(data["lemma"], pos, key)
    entry = LexiconEntry(
        lemma=data["lemma"],
        pos=pos,
        locale=data["locale"],
        gender=gender,
        inflections=inflections,
        plural_stem=data.get("plural_stem"),
    )
    if entry.locale == "de-DE" and pos is PartOfSpeech.NOUN and gender is None:
        raise LexiconError(f"de-DE noun {entry.lemma!r} must declare a gender")
    return entry


def entry_to_dict(entry: LexiconEntry) -> dict:
    out: dict = {
        "lemma": entry.lemma,
        "pos": entry.pos.value,
        "locale": entry.locale,
    }
    if entry.gender is not None:
        out["gender"] = entry.gender.value
    out["inflections"] = dict(entry.inflections)
    if entry.plural_stem is not None:
        out["plural_stem"] = entry.plural_stem
    return out


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    """Load one locale's lexicon file (a JSON array of entries)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise LexiconError(f"{path}: lexicon file must be a JSON array")
    return [entry_from_dict(item) for item in data]


class Lexicon:
    """Entries of one locale indexed by (pos, lemma)."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self._by_key: dict[tuple[PartOfSpeech, str], LexiconEntry] = {}
        for entry in entries:
            self._by_key[(entry.pos, entry.lemma)] = entry

    def find(self, pos: PartOfSpeech, lemma: str) -> Optional[LexiconEntry]:
        return self._by_key.get((pos, lemma))

    def __len__(self) -> int:
        return len(self._by_key)

    def __iter__(self):
        return iter(self._by_key.values())

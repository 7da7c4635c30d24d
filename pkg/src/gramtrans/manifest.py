"""Legality manifest: the validator's accepted feature values, enumerated.

The manifest is generated by running every candidate value through
validate_unit, so it is the validator's actual contract rather than a
re-statement of the rules. The review UI builds its edit forms from this
document (served at /legality and exportable via the CLI).
"""

from __future__ import annotations

from .grammar import (
    Case,
    DeterminerKind,
    FeatureSet,
    Gender,
    GrammarUnit,
    LOCALES,
    Number,
    NumeralType,
    Numeral,
    PartOfSpeech,
    Person,
    PronounType,
    Tense,
    validate_unit,
)

_ENUM_FEATURES = {
    "case": Case,
    "number": Number,
    "tense": Tense,
    "person": Person,
    "gender": Gender,
    "determiner": DeterminerKind,
    "pronoun_type": PronounType,
}

_TEXT_FEATURES = ("preposition",)
_LIST_FEATURES = ("adjectives", "conjunctions")


def _probe(locale, pos: PartOfSpeech, **feature) -> bool:
    unit = GrammarUnit(
        id="probe",
        locale=locale,
        pos=pos,
        features=FeatureSet(lemma="probe-word", **feature),
    )
    return not validate_unit(unit)


def build_manifest() -> dict:
    legality: dict = {}
    for code in sorted(LOCALES):
        locale = LOCALES[code]
        per_pos: dict = {}
        for pos in PartOfSpeech:
            features: dict = {}
            for name, enum_type in _ENUM_FEATURES.items():
                accepted = [
                    member.value for member in enum_type
                    if _probe(locale, pos, **{name: member})
                ]
                if accepted:
                    features[name] = {"kind": "enum", "values": accepted}
            for name in _TEXT_FEATURES:
                if _probe(locale, pos, **{name: "of"}):
                    features[name] = {"kind": "text"}
            for name in _LIST_FEATURES:
                if _probe(locale, pos, **{name: ("probe",)}):
                    features[name] = {"kind": "list"}
            if _probe(locale, pos,
                      numerals=Numeral(1, NumeralType.CARDINAL)):
                features["numerals"] = {
                    "kind": "numeral",
                    "types": [t.value for t in NumeralType],
                }
            probe_unit = GrammarUnit(
                id="probe", locale=locale, pos=pos,
                features=FeatureSet(lemma="probe-word two", head_index=1),
            )
            if not validate_unit(probe_unit):
                features["head_index"] = {"kind": "integer"}
            per_pos[pos.value] = features
        legality[code] = per_pos
    return {"version": 1, "legality": legality}

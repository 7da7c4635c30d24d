"""Grammar units: the transferable containers of grammatical settings.

A grammar unit bundles the grammatical configuration of one variable text
span (lemma, case, number, tense, ...). Which features a unit may carry
depends on its part of speech; the legality matrix below is the single
source of truth for that rule, shared by validation, the transfer engine,
the service validator, and the review UI's legality manifest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional

FULL_REALIZATION = "full-realization"
TRANSFER_ONLY = "transfer-only"


class PartOfSpeech(str, Enum):
    NOUN = "noun"
    PRONOUN = "pronoun"
    VERB = "verb"


class Case(str, Enum):
    NOMINATIVE = "nominative"
    GENITIVE = "genitive"
    DATIVE = "dative"
    ACCUSATIVE = "accusative"
    LOCATIVE = "locative"
    INSTRUMENTAL = "instrumental"
    VOCATIVE = "vocative"


class Number(str, Enum):
    SINGULAR = "singular"
    DUAL = "dual"
    PLURAL = "plural"


class Tense(str, Enum):
    PAST = "past"
    PRESENT = "present"
    FUTURE = "future"


class Person(str, Enum):
    FIRST = "first"
    SECOND = "second"
    THIRD = "third"


class Gender(str, Enum):
    MASCULINE = "masculine"
    FEMININE = "feminine"
    NEUTER = "neuter"
    COMMON = "common"


class DeterminerKind(str, Enum):
    DEFINITE = "definite"
    INDEFINITE = "indefinite"
    NONE = "none"


class PronounType(str, Enum):
    PERSONAL = "personal"
    POSSESSIVE = "possessive"
    DEMONSTRATIVE = "demonstrative"
    RELATIVE = "relative"
    INTERROGATIVE = "interrogative"


class NumeralType(str, Enum):
    CARDINAL = "cardinal"
    ORDINAL = "ordinal"


@dataclass(frozen=True)
class Locale:
    """An IETF language tag plus what the toolkit can do for it."""

    code: str
    capabilities: frozenset[str]

    def __str__(self) -> str:
        return self.code

    @property
    def language(self) -> str:
        return self.code.split("-", 1)[0]


def _locale(code: str, *capabilities: str) -> Locale:
    return Locale(code=code, capabilities=frozenset(capabilities))


LOCALES: dict[str, Locale] = {
    loc.code: loc
    for loc in (
        _locale("en-US", FULL_REALIZATION, TRANSFER_ONLY),
        _locale("de-DE", FULL_REALIZATION, TRANSFER_ONLY),
        _locale("es-ES", TRANSFER_ONLY),
        _locale("fr-FR", TRANSFER_ONLY),
        _locale("pl-PL", TRANSFER_ONLY),
        _locale("pt-BR", TRANSFER_ONLY),
        _locale("sl-SI", TRANSFER_ONLY),
        _locale("zh-CN", TRANSFER_ONLY),
    )
}

assert FULL_REALIZATION in LOCALES["en-US"].capabilities
assert FULL_REALIZATION in LOCALES["de-DE"].capabilities
assert all(TRANSFER_ONLY in loc.capabilities for loc in LOCALES.values())

_ALL_CASES = frozenset(Case)
_CORE_CASES = frozenset({Case.NOMINATIVE, Case.GENITIVE, Case.DATIVE, Case.ACCUSATIVE})

#: Case values a locale actually uses. The value inventory is a fixed
#: superset; each locale declares the subset its grammar distinguishes.
LOCALE_CASES: dict[str, frozenset[Case]] = {
    "en-US": frozenset({Case.NOMINATIVE, Case.GENITIVE, Case.ACCUSATIVE}),
    "de-DE": _CORE_CASES,
    "es-ES": _CORE_CASES,
    "fr-FR": _CORE_CASES,
    "pt-BR": _CORE_CASES,
    "pl-PL": _ALL_CASES,
    "sl-SI": _ALL_CASES - {Case.VOCATIVE},
    "zh-CN": frozenset(),
}


def locale_by_code(code: str) -> Locale:
    try:
        return LOCALES[code]
    except KeyError:
        raise UnknownLocale(code) from None


class UnknownLocale(ValueError):
    def __init__(self, code: str):
        super().__init__(f"unknown locale code: {code!r}")
        self.code = code


@dataclass(frozen=True)
class Numeral:
    value: int
    numeral_type: NumeralType


@dataclass(frozen=True)
class FeatureSet:
    """Grammatical settings of one unit. All fields but lemma are optional."""

    lemma: str
    case: Optional[Case] = None
    number: Optional[Number] = None
    tense: Optional[Tense] = None
    person: Optional[Person] = None
    gender: Optional[Gender] = None
    preposition: Optional[str] = None
    adjectives: tuple[str, ...] = ()
    numerals: Optional[Numeral] = None
    conjunctions: tuple[str, ...] = ()
    determiner: Optional[DeterminerKind] = None
    pronoun_type: Optional[PronounType] = None
    head_index: Optional[int] = None

    def set_fields(self) -> tuple[str, ...]:
        """Names of the optional features that carry a value."""
        out = []
        for name in _OPTIONAL_FEATURES:
            value = getattr(self, name)
            if name in ("adjectives", "conjunctions"):
                if value:
                    out.append(name)
            elif value is not None:
                out.append(name)
        return tuple(out)


_OPTIONAL_FEATURES = (
    "case",
    "number",
    "tense",
    "person",
    "gender",
    "preposition",
    "adjectives",
    "numerals",
    "conjunctions",
    "determiner",
    "pronoun_type",
    "head_index",
)

_ALL_POS = frozenset(PartOfSpeech)
_NOMINAL = frozenset({PartOfSpeech.NOUN, PartOfSpeech.PRONOUN})

#: Feature -> parts of speech the feature is legal on.
FEATURE_LEGALITY: dict[str, frozenset[PartOfSpeech]] = {
    "lemma": _ALL_POS,
    "case": _NOMINAL,
    "number": _ALL_POS,
    "tense": frozenset({PartOfSpeech.VERB}),
    "person": frozenset({PartOfSpeech.VERB}),
    "gender": _ALL_POS,
    "preposition": _NOMINAL,
    "adjectives": frozenset({PartOfSpeech.NOUN}),
    "numerals": frozenset({PartOfSpeech.NOUN}),
    "conjunctions": frozenset({PartOfSpeech.NOUN}),
    "determiner": frozenset({PartOfSpeech.NOUN}),
    "pronoun_type": frozenset({PartOfSpeech.PRONOUN}),
    # Compound-head marking lives outside the transferable-feature matrix
    # but only ever applies to nouns.
    "head_index": frozenset({PartOfSpeech.NOUN}),
}

_SEGMENT_SPLIT = re.compile(r"[-\s]+")


def lemma_segments(lemma: str) -> tuple[str, ...]:
    """Split a compound lemma on hyphens and spaces, jointly."""
    return tuple(seg for seg in _SEGMENT_SPLIT.split(lemma) if seg)


@dataclass(frozen=True)
class GrammarUnit:
    """Grammatical settings attached to one variable span of a statement."""

    id: str
    locale: Locale
    pos: PartOfSpeech
    features: FeatureSet
    agreement_source: Optional[str] = None
    span: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Violation:
    feature: str
    message: str


def validate_unit(unit: GrammarUnit) -> list[Violation]:
    """Check a unit against the per-POS legality matrix.

    Returns one violation per illegal (feature, pos) pair; an empty list
    means the unit is valid. Pure and deterministic.
    """
    violations: list[Violation] = []
    feats = unit.features
    if not feats.lemma:
        violations.append(Violation("lemma", "lemma must be a non-empty string"))
    for name in feats.set_fields():
        legal_pos = FEATURE_LEGALITY[name]
        if unit.pos not in legal_pos:
            violations.append(
                Violation(name, f"{name} illegal on {unit.pos.value}")
            )
    if feats.case is not None and unit.pos in FEATURE_LEGALITY["case"]:
        allowed = LOCALE_CASES.get(unit.locale.code, _ALL_CASES)
        if feats.case not in allowed:
            violations.append(
                Violation(
                    "case",
                    f"case {feats.case.value!r} not used in locale {unit.locale.code}",
                )
            )
    if feats.head_index is not None and unit.pos is PartOfSpeech.NOUN:
        segments = lemma_segments(feats.lemma)
        if not 0 <= feats.head_index < len(segments):
            violations.append(
                Violation(
                    "head_index",
                    f"head_index {feats.head_index} outside the "
                    f"{len(segments)} segment(s) of {feats.lemma!r}",
                )
            )
    return violations


class IllegalFeatures(ValueError):
    """An operation would produce a unit that fails validation."""

    def __init__(self, violations: list[Violation]):
        detail = "; ".join(v.message for v in violations)
        super().__init__(f"illegal feature combination: {detail}")
        self.violations = violations


class MissingAgreementSource(ValueError):
    def __init__(self, unit_id: str):
        super().__init__(f"unit {unit_id!r} has no agreement_source")
        self.unit_id = unit_id


def count_to_number(locale: Locale, count: int) -> Number:
    """Grammatical number for a counted noun under the locale's count rule."""
    magnitude = abs(count)
    if locale.code == "zh-CN":
        # Number is not grammaticalised; realization ignores it.
        return Number.SINGULAR
    if locale.code == "sl-SI":
        tail = magnitude % 100
        if tail == 1:
            return Number.SINGULAR
        if tail == 2:
            return Number.DUAL
        return Number.PLURAL
    return Number.SINGULAR if magnitude == 1 else Number.PLURAL


def genitive_of_amount(locale: Locale, count: int) -> bool:
    """Whether the count triggers a genitive amount construction (sl-SI).

    Recorded for transfer reporting only; sl-SI is transfer-only and the
    construction is never realized here.
    """
    if locale.code != "sl-SI":
        return False
    tail = abs(count) % 100
    return tail == 0 or tail > 4


def resolve_agreement(unit: GrammarUnit, data_value: int, locale: Locale) -> Number:
    """Grammatical number of the unit's surface form for a bound count."""
    if unit.agreement_source is None:
        raise MissingAgreementSource(unit.id)
    return count_to_number(locale, data_value)


#: Sentinel distinct from None: "clear this feature" in an override mapping.
CLEAR = None

_UNIT_LEVEL_OVERRIDES = ("agreement_source",)


def apply_overrides(base: GrammarUnit, overrides: Mapping[str, object]) -> GrammarUnit:
    """Return a copy of ``base`` with the given features replaced.

    Keys are FeatureSet field names (plus ``agreement_source``); a value of
    None clears the field. Unspecified fields are unchanged and the input
    unit is never modified. Raises IllegalFeatures if the result would
    violate the legality matrix.
    """
    feature_changes: dict[str, object] = {}
    unit_changes: dict[str, object] = {}
    for key, value in overrides.items():
        if key in _UNIT_LEVEL_OVERRIDES:
            unit_changes[key] = value
        elif key == "lemma" or key in _OPTIONAL_FEATURES:
            feature_changes[key] = _coerce_feature(key, value)
        else:
            raise KeyError(f"unknown override field: {key!r}")
    result = base
    if feature_changes:
        result = replace(result, features=replace(base.features, **feature_changes))
    if unit_changes:
        result = replace(result, **unit_changes)
    violations = validate_unit(result)
    if violations:
        raise IllegalFeatures(violations)
    return result


_ENUM_FEATURES: dict[str, type] = {
    "case": Case,
    "number": Number,
    "tense": Tense,
    "person": Person,
    "gender": Gender,
    "determiner": DeterminerKind,
    "pronoun_type": PronounType,
}


def _coerce_feature(key: str, value: object) -> object:
    """Accept enum members, their string values, and plain JSON shapes."""
    if value is None:
        return () if key in ("adjectives", "conjunctions") else None
    if key in _ENUM_FEATURES:
        enum_type = _ENUM_FEATURES[key]
        return value if isinstance(value, enum_type) else enum_type(value)
    if key in ("adjectives", "conjunctions"):
        return tuple(value)  # type: ignore[arg-type]
    if key == "numerals":
        if isinstance(value, Numeral):
            return value
        if isinstance(value, Mapping):
            return Numeral(int(value["value"]), NumeralType(value["numeral_type"]))
        raise TypeError(f"numerals override must be a Numeral or mapping, got {value!r}")
    if key == "head_index":
        return int(value)  # type: ignore[arg-type]
    return value


# --- canonical JSON form -------------------------------------------------
#
# Grammar units serialize to one canonical object shape shared by project
# files, the transfer engine, the edit log, and the service API. Absent
# optionals are omitted, never null.

def features_to_dict(feats: FeatureSet) -> dict:
    out: dict = {"lemma": feats.lemma}
    for name in _OPTIONAL_FEATURES:
        value = getattr(feats, name)
        if name in ("adjectives", "conjunctions"):
            if value:
                out[name] = list(value)
        elif isinstance(value, Numeral):
            out[name] = {"value": value.value, "numeral_type": value.numeral_type.value}
        elif isinstance(value, Enum):
            out[name] = value.value
        elif value is not None:
            out[name] = value
    return out


def features_from_dict(data: Mapping) -> FeatureSet:
    kwargs: dict = {"lemma": data["lemma"]}
    for name in _OPTIONAL_FEATURES:
        if name in data:
            kwargs[name] = _coerce_feature(name, data[name])
    return FeatureSet(**kwargs)


def unit_to_dict(unit: GrammarUnit) -> dict:
    out: dict = {
        "id": unit.id,
        "locale": unit.locale.code,
        "pos": unit.pos.value,
        "features": features_to_dict(unit.features),
    }
    if unit.agreement_source is not None:
        out["agreement_source"] = unit.agreement_source
    if unit.span is not None:
        out["span"] = [unit.span[0], unit.span[1]]
    return out


def unit_from_dict(data: Mapping) -> GrammarUnit:
    span = data.get("span")
    return GrammarUnit(
        id=data["id"],
        locale=locale_by_code(data["locale"]),
        pos=PartOfSpeech(data["pos"]),
        features=features_from_dict(data["features"]),
        agreement_source=data.get("agreement_source"),
        span=(span[0], span[1]) if span is not None else None,
    )

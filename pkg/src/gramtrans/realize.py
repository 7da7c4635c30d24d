"""Surface realization: grammar unit + lexicon -> inflected text.

Full realization (determiners, case endings, adjective agreement,
preposition-determiner contraction, verb conjugation) is provided for
en-US and de-DE. zh-CN passes lemmas and function characters through
unchanged. The remaining locales are transfer-only: their units travel
through the pipeline but cannot be rendered here.

Noun phrases are assembled in a fixed order:
[preposition] [determiner] [numeral] [adjectives...] [head noun].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .grammar import (
    FULL_REALIZATION,
    Case,
    DeterminerKind,
    FeatureSet,
    Gender,
    GrammarUnit,
    Locale,
    Number,
    NumeralType,
    PartOfSpeech,
    Person,
    count_to_number,
    lemma_segments,
    validate_unit,
)
from .lexicon import Lexicon, LexiconEntry, nominal_key, verb_key


class RealizationError(Exception):
    pass


class MissingInflection(RealizationError):
    def __init__(self, lemma: str, key: str):
        super().__init__(f"no inflection {key!r} for lemma {lemma!r}")
        self.lemma = lemma
        self.key = key


class IllegalUnit(RealizationError):
    def __init__(self, unit_id: str, violations):
        detail = "; ".join(v.message for v in violations)
        super().__init__(f"unit {unit_id!r} fails validation: {detail}")
        self.unit_id = unit_id
        self.violations = violations


class RealizationUnsupported(RealizationError):
    def __init__(self, locale: Locale):
        super().__init__(
            f"locale {locale.code} is transfer-only; no surface realization"
        )
        self.locale = locale


# Contractions merge an adjacent preposition + determiner form into one
# token ("an" + "dem" -> "am"). Left sides must be unique within a rule set.
DE_CONTRACTIONS: tuple[tuple[tuple[str, str], str], ...] = (
    (("an", "dem"), "am"),
    (("in", "dem"), "im"),
    (("bei", "dem"), "beim"),
    (("von", "dem"), "vom"),
    (("zu", "dem"), "zum"),
    (("zu", "der"), "zur"),
)


@dataclass(frozen=True)
class RealizationContext:
    """Immutable bundle of everything realization needs for one locale."""

    locale: Locale
    lexicon: Lexicon
    contraction_rules: tuple[tuple[tuple[str, str], str], ...] = ()

    def __post_init__(self):
        left_sides = [left for left, _ in self.contraction_rules]
        if len(left_sides) != len(set(left_sides)):
            raise ValueError("contraction rules must not share a left side")


def default_context(locale: Locale, lexicon: Lexicon) -> RealizationContext:
    rules = DE_CONTRACTIONS if locale.code == "de-DE" else ()
    return RealizationContext(locale=locale, lexicon=lexicon, contraction_rules=rules)


# --- German closed-class paradigms ---------------------------------------

_G = {Gender.MASCULINE: 0, Gender.FEMININE: 1, Gender.NEUTER: 2}

# case -> (masc, fem, neut, plural)
_DE_DEFINITE = {
    Case.NOMINATIVE: ("der", "die", "das", "die"),
    Case.ACCUSATIVE: ("den", "die", "das", "die"),
    Case.DATIVE: ("dem", "der", "dem", "den"),
    Case.GENITIVE: ("des", "der", "des", "der"),
}

# No plural indefinite article exists; a None cell renders nothing.
_DE_INDEFINITE = {
    Case.NOMINATIVE: ("ein", "eine", "ein", None),
    Case.ACCUSATIVE: ("einen", "eine", "ein", None),
    Case.DATIVE: ("einem", "einer", "einem", None),
    Case.GENITIVE: ("eines", "einer", "eines", None),
}

# Adjective endings, case -> (masc, fem, neut, plural), per declension.
_DE_ADJ_WEAK = {
    Case.NOMINATIVE: ("e", "e", "e", "en"),
    Case.ACCUSATIVE: ("en", "e", "e", "en"),
    Case.DATIVE: ("en", "en", "en", "en"),
    Case.GENITIVE: ("en", "en", "en", "en"),
}
_DE_ADJ_MIXED = {
    Case.NOMINATIVE: ("er", "e", "es", "en"),
    Case.ACCUSATIVE: ("en", "e", "es", "en"),
    Case.DATIVE: ("en", "en", "en", "en"),
    Case.GENITIVE: ("en", "en", "en", "en"),
}
_DE_ADJ_STRONG = {
    Case.NOMINATIVE: ("er", "e", "es", "e"),
    Case.ACCUSATIVE: ("en", "e", "es", "e"),
    Case.DATIVE: ("em", "er", "em", "en"),
    Case.GENITIVE: ("en", "er", "en", "er"),
}


def _de_cell(table, case: Case, number: Number, gender: Optional[Gender], what: str):
    row = table.get(case)
    if row is None:
        raise MissingInflection(what, f"{case.value}")
    if number is not Number.SINGULAR:
        return row[3]
    if gender is None or gender not in _G:
        raise MissingInflection(what, f"{case.value}.{number.value} (gender unknown)")
    return row[_G[gender]]


def _de_determiner(kind: DeterminerKind, case: Case, number: Number,
                   gender: Optional[Gender]) -> Optional[str]:
    if kind is DeterminerKind.NONE:
        return None
    table = _DE_DEFINITE if kind is DeterminerKind.DEFINITE else _DE_INDEFINITE
    return _de_cell(table, case, number, gender, f"{kind.value} determiner")


def _de_adjective(lemma: str, declension, case: Case, number: Number,
                  gender: Optional[Gender]) -> str:
    ending = _de_cell(declension, case, number, gender, lemma)
    stem = lemma
    if stem.endswith("e") and ending.startswith("e"):
        stem = stem[:-1]
    return stem + ending


def _en_determiner(kind: DeterminerKind, next_word: Optional[str]) -> Optional[str]:
    if kind is DeterminerKind.NONE:
        return None
    if kind is DeterminerKind.DEFINITE:
        return "the"
    if next_word and next_word[:1].lower() in "aeiou":
        return "an"
    return "a"


_EN_ORDINAL_SUFFIX = {1: "st", 2: "nd", 3: "rd"}


def render_numeral(value: int, numeral_type: NumeralType, locale: Locale) -> str:
    if numeral_type is NumeralType.CARDINAL:
        return str(value)
    if locale.language == "de":
        return f"{value}."
    tail = abs(value) % 100
    if 11 <= tail <= 13:
        return f"{value}th"
    return f"{value}{_EN_ORDINAL_SUFFIX.get(abs(value) % 10, 'th')}"


# --- noun/pronoun form lookup ---------------------------------------------


def _lookup_nominal(entry: LexiconEntry, case: Case, number: Number,
                    locale: Locale) -> str:
    key = nominal_key(case, number)
    form = entry.inflections.get(key)
    if form is not None:
        return form
    # English nouns do not mark case: fall back to nominative of the same
    # number. No other locale ever falls back.
    if locale.code == "en-US" and entry.pos is PartOfSpeech.NOUN:
        fallback = entry.inflections.get(nominal_key(Case.NOMINATIVE, number))
        if fallback is not None:
            return fallback
        if number is Number.PLURAL and entry.plural_stem is not None:
            return entry.plural_stem
    raise MissingInflection(entry.lemma, key)


def inflect_noun(entry: LexiconEntry, features: FeatureSet,
                 ctx: Optional[RealizationContext] = None) -> str:
    """Inflected form of a noun entry for the feature set's (case, number).

    When head_index marks a compound segment, inflection applies to that
    segment (looked up as its own lexicon entry via ctx) and the remaining
    segments pass through unchanged.
    """
    locale = ctx.locale if ctx is not None else _guess_locale(entry)
    case = features.case or Case.NOMINATIVE
    number = features.number or Number.SINGULAR
    if features.head_index is None:
        return _lookup_nominal(entry, case, number, locale)
    lemma = features.lemma or entry.lemma
    segments = list(lemma_segments(lemma))
    head = segments[features.head_index]
    head_entry = ctx.lexicon.find(PartOfSpeech.NOUN, head) if ctx else None
    if head_entry is None:
        raise MissingInflection(head, nominal_key(case, number))
    inflected = _lookup_nominal(head_entry, case, number, locale)
    # Re-inflect inside the original spelling so delimiters survive.
    prefix_end = lemma.rfind(head)
    if prefix_end < 0:
        return inflected
    return lemma[:prefix_end] + inflected + lemma[prefix_end + len(head):]


def _guess_locale(entry: LexiconEntry) -> Locale:
    from .grammar import locale_by_code

    return locale_by_code(entry.locale)


def _noun_head(ctx: RealizationContext, features: FeatureSet,
               case: Case, number: Number) -> tuple[str, Optional[Gender]]:
    """Resolve the head noun's surface form and grammatical gender."""
    lemma = features.lemma
    entry = ctx.lexicon.find(PartOfSpeech.NOUN, lemma)
    effective = FeatureSet(
        lemma=lemma, case=case, number=number, head_index=features.head_index
    )
    if features.head_index is not None:
        head = lemma_segments(lemma)[features.head_index]
        head_entry = ctx.lexicon.find(PartOfSpeech.NOUN, head)
        gender = features.gender or (head_entry.gender if head_entry else None)
        base = entry or LexiconEntry(lemma=lemma, pos=PartOfSpeech.NOUN,
                                     locale=ctx.locale.code)
        return inflect_noun(base, effective, ctx), gender
    if entry is None:
        raise MissingInflection(lemma, nominal_key(case, number))
    gender = features.gender or entry.gender
    return inflect_noun(entry, effective, ctx), gender


def _apply_contractions(tokens: list[str], ctx: RealizationContext) -> list[str]:
    rules = dict(ctx.contraction_rules)
    out: list[str] = []
    i = 0
    while i < len(tokens):
        if i + 1 < len(tokens) and (tokens[i], tokens[i + 1]) in rules:
            out.append(rules[(tokens[i], tokens[i + 1])])
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def _join(tokens: Iterable[str], locale: Locale) -> str:
    sep = "" if locale.language == "zh" else " "
    return sep.join(tokens)


def realize_np(unit: GrammarUnit, ctx: RealizationContext,
               count: Optional[int] = None) -> str:
    """Realize a noun or pronoun unit as a surface string.

    ``count`` is the runtime value bound through the unit's agreement
    source; it drives grammatical number and the rendered numeral. Stored
    number/numeral values are advisory when a count is supplied.
    """
    if unit.pos not in (PartOfSpeech.NOUN, PartOfSpeech.PRONOUN):
        raise ValueError(f"realize_np expects a nominal unit, got {unit.pos.value}")
    violations = validate_unit(unit)
    if violations:
        raise IllegalUnit(unit.id, violations)
    locale = ctx.locale
    feats = unit.features
    if locale.language == "zh":
        tokens = [t for t in (feats.preposition, feats.lemma) if t]
        return "".join(tokens)
    if FULL_REALIZATION not in locale.capabilities:
        raise RealizationUnsupported(locale)

    # A bound count drives grammatical number, except under an ordinal
    # numeral: "the 2nd gameday" selects a position and stays singular.
    ordinal = (feats.numerals is not None
               and feats.numerals.numeral_type is NumeralType.ORDINAL)
    number = feats.number or Number.SINGULAR
    if count is not None and not ordinal:
        number = count_to_number(locale, count)
    case = feats.case or Case.NOMINATIVE

    if unit.pos is PartOfSpeech.PRONOUN:
        entry = ctx.lexicon.find(PartOfSpeech.PRONOUN, feats.lemma)
        if entry is None:
            raise MissingInflection(feats.lemma, nominal_key(case, number))
        form = entry.inflections.get(nominal_key(case, number))
        if form is None:
            raise MissingInflection(feats.lemma, nominal_key(case, number))
        tokens = [feats.preposition, form]
        return _join([t for t in tokens if t], locale)

    head, gender = _noun_head(ctx, feats, case, number)

    numeral: Optional[str] = None
    if feats.numerals is not None:
        value = count if count is not None else feats.numerals.value
        numeral = render_numeral(value, feats.numerals.numeral_type, locale)

    det_kind = feats.determiner
    determiner: Optional[str] = None
    adjectives: list[str] = []
    if locale.code == "de-DE":
        if det_kind is not None:
            determiner = _de_determiner(det_kind, case, number, gender)
        if det_kind is DeterminerKind.DEFINITE:
            declension = _DE_ADJ_WEAK
        elif det_kind is DeterminerKind.INDEFINITE and determiner is not None:
            declension = _DE_ADJ_MIXED
        else:
            declension = _DE_ADJ_STRONG
        adjectives = [
            _de_adjective(adj, declension, case, number, gender)
            for adj in feats.adjectives
        ]
    else:
        adjectives = list(feats.adjectives)
        if det_kind is not None:
            next_word = numeral or (adjectives[0] if adjectives else head)
            determiner = _en_determiner(det_kind, next_word)

    tokens = [feats.preposition, determiner, numeral, *adjectives, head]
    present = [t for t in tokens if t]
    present = _apply_contractions(present, ctx)
    return _join(present, locale)


def realize_verb(unit: GrammarUnit, ctx: RealizationContext,
                 count: Optional[int] = None) -> str:
    """Conjugated form of a verb unit for its (tense, person, number)."""
    if unit.pos is not PartOfSpeech.VERB:
        raise ValueError(f"realize_verb expects a verb unit, got {unit.pos.value}")
    violations = validate_unit(unit)
    if violations:
        raise IllegalUnit(unit.id, violations)
    locale = ctx.locale
    feats = unit.features
    if locale.language == "zh":
        return feats.lemma
    if FULL_REALIZATION not in locale.capabilities:
        raise RealizationUnsupported(locale)
    if feats.tense is None:
        # No tense requested: the citation form stands.
        return feats.lemma
    number = feats.number or Number.SINGULAR
    if count is not None:
        number = count_to_number(locale, count)
    person = feats.person or Person.THIRD
    entry = ctx.lexicon.find(PartOfSpeech.VERB, feats.lemma)
    key = verb_key(feats.tense, person, number)
    if entry is None or key not in entry.inflections:
        raise MissingInflection(feats.lemma, key)
    return entry.inflections[key]


def realize_unit(unit: GrammarUnit, ctx: RealizationContext,
                 count: Optional[int] = None) -> str:
    """Dispatch to the POS-appropriate realizer."""
    if unit.pos is PartOfSpeech.VERB:
        return realize_verb(unit, ctx, count)
    return realize_np(unit, ctx, count)

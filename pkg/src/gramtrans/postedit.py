"""Post-edit analytics: match units, classify edits, aggregate statistics.

The change taxonomy is a closed set: 23 grammatical categories plus the
two structural ones (add unit / remove unit). Nothing else is ever
emitted, and the CSV emitter writes exactly the 23 grammatical labels.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .grammar import (
    GrammarUnit,
    PartOfSpeech,
    unit_from_dict,
    unit_to_dict,
)


class ChangeCategory(str, Enum):
    ADD_ADJECTIVE = "add adjective"
    ADD_DETERMINER = "add determiner"
    ADD_NOUN = "add noun"
    ADD_NUMBER = "add number"
    ADD_PREPOSITION = "add preposition"
    ADD_PRONOUN = "add pronoun"
    CAPITALIZE = "capitalize"
    CHANGE_POS = "change POS"
    CHANGE_ADJECTIVE_LEMMA = "change adjective lemma"
    CHANGE_CASE = "change case"
    CHANGE_CONJUNCTION = "change conjunction"
    CHANGE_DETERMINER = "change determiner"
    CHANGE_NOUN_LEMMA = "change noun lemma"
    CHANGE_NUMBER = "change number"
    CHANGE_NUMERAL_TYPE = "change numeral type"
    CHANGE_PREPOSITION = "change preposition"
    CHANGE_TENSE = "change tense"
    CHANGE_VERB_LEMMA = "change verb lemma"
    LOWERCASE = "lowercase"
    MARK_HEAD = "mark head"
    REMOVE_ADJECTIVE = "remove adjective"
    REMOVE_DETERMINER = "remove determiner"
    REMOVE_PREPOSITION = "remove preposition"
    ADD_UNIT = "add unit"
    REMOVE_UNIT = "remove unit"


#: The grammatical categories, in report row order.
GRAMMATICAL_CATEGORIES: tuple[ChangeCategory, ...] = tuple(
    c for c in ChangeCategory
    if c not in (ChangeCategory.ADD_UNIT, ChangeCategory.REMOVE_UNIT)
)
STRUCTURAL_CATEGORIES = (ChangeCategory.ADD_UNIT, ChangeCategory.REMOVE_UNIT)

assert len(GRAMMATICAL_CATEGORIES) == 23
assert len(ChangeCategory) == 25


class ConflictingInput(ValueError):
    """A change was logged although nothing differs: upstream tracking bug."""


class UnknownLocale(KeyError):
    def __init__(self, code: str):
        super().__init__(code)
        self.code = code

    def __str__(self) -> str:
        return f"records reference locale {self.code!r} missing from unit totals"


_LEMMA_CATEGORY = {
    PartOfSpeech.NOUN: ChangeCategory.CHANGE_NOUN_LEMMA,
    PartOfSpeech.VERB: ChangeCategory.CHANGE_VERB_LEMMA,
}


def classify_change(before: Optional[GrammarUnit], after: Optional[GrammarUnit],
                    before_text: Optional[str] = None,
                    after_text: Optional[str] = None) -> frozenset[ChangeCategory]:
    """Categories of one edit, one per differing dimension.

    Dimensions with no closed-set category (gender, person, numeral value,
    pronoun lemma) contribute nothing; an edit touching only those yields
    an empty set and is excluded from tabular aggregation.
    """
    if before is None and after is None:
        raise ValueError("classify_change needs at least one unit")
    if before is None:
        categories = {ChangeCategory.ADD_UNIT}
        if after.pos is PartOfSpeech.NOUN:
            categories.add(ChangeCategory.ADD_NOUN)
        elif after.pos is PartOfSpeech.PRONOUN:
            categories.add(ChangeCategory.ADD_PRONOUN)
        return frozenset(categories)
    if after is None:
        return frozenset({ChangeCategory.REMOVE_UNIT})

    categories: set[ChangeCategory] = set()
    bf, af = before.features, after.features

    if before.pos is not after.pos:
        categories.add(ChangeCategory.CHANGE_POS)

    casing_only_lemma = (
        bf.lemma != af.lemma and bf.lemma.casefold() == af.lemma.casefold()
    )
    if bf.lemma != af.lemma and not casing_only_lemma:
        lemma_category = _LEMMA_CATEGORY.get(after.pos)
        if lemma_category is not None:
            categories.add(lemma_category)

    if bf.case != af.case:
        categories.add(ChangeCategory.CHANGE_CASE)
    if bf.number != af.number:
        categories.add(ChangeCategory.CHANGE_NUMBER)
    if bf.tense != af.tense:
        categories.add(ChangeCategory.CHANGE_TENSE)

    categories.update(_diff_slot(
        bf.preposition, af.preposition,
        ChangeCategory.ADD_PREPOSITION,
        ChangeCategory.CHANGE_PREPOSITION,
        ChangeCategory.REMOVE_PREPOSITION,
    ))
    from .grammar import DeterminerKind

    before_det = None if bf.determiner in (None, DeterminerKind.NONE) else bf.determiner
    after_det = None if af.determiner in (None, DeterminerKind.NONE) else af.determiner
    categories.update(_diff_slot(
        before_det, after_det,
        ChangeCategory.ADD_DETERMINER,
        ChangeCategory.CHANGE_DETERMINER,
        ChangeCategory.REMOVE_DETERMINER,
    ))

    added_adj = _multiset_minus(af.adjectives, bf.adjectives)
    removed_adj = _multiset_minus(bf.adjectives, af.adjectives)
    if added_adj and removed_adj:
        categories.add(ChangeCategory.CHANGE_ADJECTIVE_LEMMA)
    elif added_adj:
        categories.add(ChangeCategory.ADD_ADJECTIVE)
    elif removed_adj:
        categories.add(ChangeCategory.REMOVE_ADJECTIVE)

    if tuple(bf.conjunctions) != tuple(af.conjunctions):
        categories.add(ChangeCategory.CHANGE_CONJUNCTION)

    if bf.numerals is None and af.numerals is not None:
        categories.add(ChangeCategory.ADD_NUMBER)
    elif bf.numerals is not None and af.numerals is not None \
            and bf.numerals.numeral_type is not af.numerals.numeral_type:
        categories.add(ChangeCategory.CHANGE_NUMERAL_TYPE)

    if af.head_index is not None and bf.head_index != af.head_index:
        categories.add(ChangeCategory.MARK_HEAD)

    texts = (before_text, after_text)
    if casing_only_lemma and (None in texts or before_text == after_text):
        # No rendered text to judge by: fall back to the lemma spelling.
        texts = (bf.lemma, af.lemma)
    categories.update(_casing_diff(*texts))
    return frozenset(categories)


def _diff_slot(before, after, add_cat, change_cat, remove_cat):
    if before is None and after is not None:
        return {add_cat}
    if before is not None and after is None:
        return {remove_cat}
    if before is not None and before != after:
        return {change_cat}
    return set()


def _multiset_minus(left: Sequence[str], right: Sequence[str]) -> Counter:
    out = Counter(left)
    out.subtract(Counter(right))
    return +out


def _casing_diff(before_text: Optional[str],
                 after_text: Optional[str]) -> set[ChangeCategory]:
    if not before_text or not after_text or before_text == after_text:
        return set()
    if before_text.casefold() != after_text.casefold():
        return set()
    for b_char, a_char in zip(before_text, after_text):
        if b_char != a_char:
            if a_char.isupper() and not b_char.isupper():
                return {ChangeCategory.CAPITALIZE}
            if a_char.islower() and not b_char.islower():
                return {ChangeCategory.LOWERCASE}
    return set()


@dataclass(frozen=True)
class ChangeRecord:
    """One tracked post-edit to one grammar unit."""

    session_id: str
    participant_id: str
    locale: str
    unit_id: str
    categories: frozenset[ChangeCategory]
    before: Optional[GrammarUnit] = None
    after: Optional[GrammarUnit] = None
    timestamp: str = ""

    def to_dict(self) -> dict:
        out: dict = {
            "session_id": self.session_id,
            "participant_id": self.participant_id,
            "locale": self.locale,
            "unit_id": self.unit_id,
            "categories": sorted(c.value for c in self.categories),
        }
        if self.before is not None:
            out["before"] = unit_to_dict(self.before)
        if self.after is not None:
            out["after"] = unit_to_dict(self.after)
        out["timestamp"] = self.timestamp
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChangeRecord":
        return cls(
            session_id=data["session_id"],
            participant_id=data["participant_id"],
            locale=data["locale"],
            unit_id=data["unit_id"],
            categories=frozenset(ChangeCategory(c) for c in data["categories"]),
            before=unit_from_dict(data["before"]) if "before" in data else None,
            after=unit_from_dict(data["after"]) if "after" in data else None,
            timestamp=data.get("timestamp", ""),
        )


def build_change_record(session_id: str, participant_id: str, locale: str,
                        unit_id: str, before: Optional[GrammarUnit],
                        after: Optional[GrammarUnit],
                        before_text: Optional[str] = None,
                        after_text: Optional[str] = None,
                        timestamp: Optional[str] = None) -> ChangeRecord:
    """Classify and wrap one logged edit. Raises ConflictingInput when the
    supposed edit changes nothing at all."""
    categories = classify_change(before, after, before_text, after_text)
    if not categories and before == after and before_text == after_text:
        raise ConflictingInput(
            f"unit {unit_id!r}: change logged but nothing differs"
        )
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return ChangeRecord(
        session_id=session_id,
        participant_id=participant_id,
        locale=locale,
        unit_id=unit_id,
        categories=categories,
        before=before,
        after=after,
        timestamp=timestamp,
    )


# --- unit matching ----------------------------------------------------------


@dataclass(frozen=True)
class MatchPair:
    auto: GrammarUnit
    edited: GrammarUnit
    #: which pass produced the pair; feature-overlap pairs are low confidence
    basis: str

    @property
    def low_confidence(self) -> bool:
        return self.basis == "feature-overlap"


@dataclass(frozen=True)
class MatchResult:
    pairs: tuple[MatchPair, ...]
    unmatched_auto: tuple[GrammarUnit, ...]
    unmatched_edited: tuple[GrammarUnit, ...]
    match_rate: Fraction


_OVERLAP_THRESHOLD = Fraction(1, 2)


def _overlap_score(a: GrammarUnit, b: GrammarUnit) -> Fraction:
    """Share of jointly-set dimensions (lemma always counts) that agree."""
    af, bf = a.features, b.features
    considered = 1
    agreeing = 1 if af.lemma == bf.lemma else 0
    for name in ("case", "number", "tense", "person", "gender", "preposition",
                 "determiner", "pronoun_type"):
        av, bv = getattr(af, name), getattr(bf, name)
        if av is not None and bv is not None:
            considered += 1
            agreeing += 1 if av == bv else 0
    if af.adjectives and bf.adjectives:
        considered += 1
        agreeing += 1 if tuple(af.adjectives) == tuple(bf.adjectives) else 0
    if af.numerals is not None and bf.numerals is not None:
        considered += 1
        agreeing += 1 if af.numerals == bf.numerals else 0
    return Fraction(agreeing, considered)


def match_units(auto: Sequence[GrammarUnit],
                edited: Sequence[GrammarUnit]) -> MatchResult:
    """Greedy three-pass matching between two unit lists of one statement.

    Pass 1 pairs identical ids, pass 2 identical (lemma, pos), pass 3 the
    highest feature-overlap score at or above 50%, ties broken by list
    position proximity. Deterministic for a fixed input order.
    """
    auto_left = list(range(len(auto)))
    edited_left = list(range(len(edited)))
    pairs: list[tuple[int, int, str]] = []

    def take(a_idx: int, e_idx: int, basis: str):
        pairs.append((a_idx, e_idx, basis))
        auto_left.remove(a_idx)
        edited_left.remove(e_idx)

    for a_idx in list(auto_left):
        for e_idx in edited_left:
            if auto[a_idx].id == edited[e_idx].id:
                take(a_idx, e_idx, "id")
                break

    for a_idx in list(auto_left):
        key = (auto[a_idx].features.lemma, auto[a_idx].pos)
        for e_idx in edited_left:
            if (edited[e_idx].features.lemma, edited[e_idx].pos) == key:
                take(a_idx, e_idx, "lemma-pos")
                break

    candidates = []
    for a_idx in auto_left:
        for e_idx in edited_left:
            score = _overlap_score(auto[a_idx], edited[e_idx])
            if score >= _OVERLAP_THRESHOLD:
                candidates.append((-score, abs(a_idx - e_idx), a_idx, e_idx))
    used_a: set[int] = set()
    used_e: set[int] = set()
    for neg_score, _distance, a_idx, e_idx in sorted(candidates):
        if a_idx in used_a or e_idx in used_e:
            continue
        used_a.add(a_idx)
        used_e.add(e_idx)
        take(a_idx, e_idx, "feature-overlap")

    total = len(auto) + len(edited)
    rate = Fraction(1) if total == 0 else Fraction(2 * len(pairs), total)
    pairs.sort()
    return MatchResult(
        pairs=tuple(MatchPair(auto[a], edited[e], basis) for a, e, basis in pairs),
        unmatched_auto=tuple(auto[i] for i in sorted(auto_left)),
        unmatched_edited=tuple(edited[i] for i in sorted(edited_left)),
        match_rate=rate,
    )


# --- aggregation ------------------------------------------------------------


@dataclass(frozen=True)
class ChangeTable:
    """Exact per-(locale, category) change fractions plus display rounding."""

    cells: Mapping[tuple[str, ChangeCategory], Fraction]
    locales: tuple[str, ...]
    unit_totals: Mapping[str, int]

    def percent(self, locale: str, category: ChangeCategory) -> Fraction:
        return self.cells.get((locale, category), Fraction(0)) * 100

    def display(self, locale: str, category: ChangeCategory) -> str:
        """Integer percent, half-up; blank if and only if exactly zero."""
        value = self.percent(locale, category)
        if value == 0:
            return ""
        return str(int(value + Fraction(1, 2)))


def aggregate_changes(records: Iterable[ChangeRecord],
                      unit_totals: Mapping[str, int]) -> ChangeTable:
    """Per-locale share of units affected by each change category."""
    for locale, total in unit_totals.items():
        if total <= 0:
            raise ValueError(f"unit total for {locale!r} must be positive")
    counts: Counter = Counter()
    for record in records:
        if record.locale not in unit_totals:
            raise UnknownLocale(record.locale)
        for category in record.categories:
            counts[(record.locale, category)] += 1
    cells = {
        key: Fraction(count, unit_totals[key[0]])
        for key, count in counts.items()
    }
    return ChangeTable(
        cells=cells,
        locales=tuple(sorted(unit_totals)),
        unit_totals=dict(unit_totals),
    )


def per_participant_counts(records: Iterable[ChangeRecord]) -> dict[str, int]:
    counts: Counter = Counter()
    for record in records:
        counts[record.participant_id] += 1
    return dict(sorted(counts.items()))


def changed_unit_fractions(records: Iterable[ChangeRecord],
                           unit_totals: Mapping[str, int]
                           ) -> dict[str, Fraction]:
    """Distinct changed units per locale as a fraction of all units."""
    changed: dict[str, set[str]] = {}
    for record in records:
        if record.locale not in unit_totals:
            raise UnknownLocale(record.locale)
        changed.setdefault(record.locale, set()).add(record.unit_id)
    return {
        locale: Fraction(len(changed.get(locale, ())), total)
        for locale, total in sorted(unit_totals.items())
    }


# --- edit log IO ------------------------------------------------------------


class EditLogError(ValueError):
    def __init__(self, path: str, lineno: int, detail: str):
        super().__init__(f"{path}:{lineno}: {detail}")
        self.path = path
        self.lineno = lineno


def append_record(path: str | Path, record: ChangeRecord) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def load_edit_log(path: str | Path) -> list[ChangeRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(ChangeRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise EditLogError(str(path), lineno, str(exc)) from None
    return records

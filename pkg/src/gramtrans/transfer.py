"""Grammar transfer: derive target-language units from snippet parses.

Pipeline per statement: render the source, mark unit spans, translate
through a backend, re-locate the marked snippets in the target, parse each
snippet, aggregate the parse into a target unit, and assemble a target
statement template whose literals are the in-between translated text.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .backends import BackendError, TranslationBackend, TranslationRequest
from .conllu import DependencyToken, ParseFragment, ParseProvider
from .grammar import (
    Case,
    DeterminerKind,
    FeatureSet,
    Gender,
    GrammarUnit,
    Locale,
    Number,
    Numeral,
    NumeralType,
    PartOfSpeech,
    Person,
    PronounType,
    Tense,
    LOCALE_CASES,
    lemma_segments,
    validate_unit,
)
from .markers import align_translation, mark_units
from .planner import RenderedStatement, render_statement
from .realize import RealizationContext
from .templates import (
    DataRecord,
    Literal,
    Project,
    Segment,
    StatementTemplate,
    UnitRef,
)


class UnsupportedHead(ValueError):
    def __init__(self, unit_id: str, upos: str):
        super().__init__(
            f"fragment {unit_id!r}: head tag {upos!r} maps to no part of speech"
        )
        self.unit_id = unit_id
        self.upos = upos


_UPOS_TO_POS = {
    "NOUN": PartOfSpeech.NOUN,
    "PROPN": PartOfSpeech.NOUN,
    "PRON": PartOfSpeech.PRONOUN,
    "VERB": PartOfSpeech.VERB,
    "AUX": PartOfSpeech.VERB,
}

_UD_CASE = {
    "Nom": Case.NOMINATIVE,
    "Gen": Case.GENITIVE,
    "Dat": Case.DATIVE,
    "Acc": Case.ACCUSATIVE,
    "Loc": Case.LOCATIVE,
    "Ins": Case.INSTRUMENTAL,
    "Voc": Case.VOCATIVE,
}
_UD_NUMBER = {"Sing": Number.SINGULAR, "Dual": Number.DUAL, "Plur": Number.PLURAL}
_UD_GENDER = {
    "Masc": Gender.MASCULINE,
    "Fem": Gender.FEMININE,
    "Neut": Gender.NEUTER,
    "Com": Gender.COMMON,
}
_UD_TENSE = {"Past": Tense.PAST, "Pres": Tense.PRESENT, "Fut": Tense.FUTURE}
_UD_PERSON = {"1": Person.FIRST, "2": Person.SECOND, "3": Person.THIRD}
_UD_PRONTYPE = {
    "Prs": PronounType.PERSONAL,
    "Dem": PronounType.DEMONSTRATIVE,
    "Rel": PronounType.RELATIVE,
    "Int": PronounType.INTERROGATIVE,
}

_FOLDING_DEPRELS = {"flat", "flat:name", "compound"}


def _head_case(head: DependencyToken, locale: Locale) -> Optional[Case]:
    case = _UD_CASE.get(head.feats.get("Case", ""))
    if case is None:
        return None
    # A case value the locale does not distinguish is a parser artifact.
    if case not in LOCALE_CASES.get(locale.code, frozenset(Case)):
        return None
    return case


def _fold_lemma(frag: ParseFragment, head: DependencyToken) -> str:
    """Merge flat/compound nominal children into a multiword lemma."""
    pieces = [(head.index, head.lemma)]
    for child in frag.children(head):
        if child.deprel in _FOLDING_DEPRELS and child.upos in ("NOUN", "PROPN"):
            pieces.append((child.index, child.lemma))
    pieces.sort()
    return " ".join(lemma for _idx, lemma in pieces)


def _numeral_from_token(token: DependencyToken) -> Optional[Numeral]:
    ntype = NumeralType.ORDINAL if token.feats.get("NumType") == "Ord" \
        else NumeralType.CARDINAL
    for candidate in (token.form, token.lemma):
        digits = candidate.rstrip(".")
        try:
            return Numeral(int(digits), ntype)
        except ValueError:
            continue
    return None


def aggregate_fragment(frag: ParseFragment) -> GrammarUnit:
    """Fold a snippet's dependency parse into one grammar unit.

    The root token supplies the part of speech and its UD features; its
    direct dependents contribute preposition, determiner, adjectives,
    numeral, and conjunctions, each only where legal for the head's POS.
    """
    head = frag.root()
    pos = _UPOS_TO_POS.get(head.upos)
    if pos is None:
        raise UnsupportedHead(frag.unit_id, head.upos)

    lemma = _fold_lemma(frag, head) if pos is PartOfSpeech.NOUN else head.lemma
    kwargs: dict = {"lemma": lemma}
    kwargs["number"] = _UD_NUMBER.get(head.feats.get("Number", ""))
    kwargs["gender"] = _UD_GENDER.get(head.feats.get("Gender", ""))
    if pos in (PartOfSpeech.NOUN, PartOfSpeech.PRONOUN):
        kwargs["case"] = _head_case(head, frag.locale)
    if pos is PartOfSpeech.VERB:
        kwargs["tense"] = _UD_TENSE.get(head.feats.get("Tense", ""))
        kwargs["person"] = _UD_PERSON.get(head.feats.get("Person", ""))
    if pos is PartOfSpeech.PRONOUN:
        prontype = _UD_PRONTYPE.get(head.feats.get("PronType", ""))
        if head.feats.get("Poss") == "Yes":
            prontype = PronounType.POSSESSIVE
        kwargs["pronoun_type"] = prontype

    adjectives: list[tuple[int, str]] = []
    conjunctions: list[tuple[int, str]] = []
    for child in frag.children(head):
        if child.upos == "ADP" and pos in (PartOfSpeech.NOUN, PartOfSpeech.PRONOUN):
            kwargs.setdefault("preposition", child.lemma)
        elif pos is PartOfSpeech.NOUN:
            if child.upos == "DET":
                definite = child.feats.get("Definite")
                if definite == "Def":
                    kwargs["determiner"] = DeterminerKind.DEFINITE
                elif definite == "Ind":
                    kwargs["determiner"] = DeterminerKind.INDEFINITE
            elif child.upos == "ADJ":
                adjectives.append((child.index, child.lemma))
            elif child.upos == "NUM" and "numerals" not in kwargs:
                numeral = _numeral_from_token(child)
                if numeral is not None:
                    kwargs["numerals"] = numeral
            elif child.upos == "CCONJ":
                conjunctions.append((child.index, child.lemma))
    if adjectives:
        kwargs["adjectives"] = tuple(lemma for _i, lemma in sorted(adjectives))
    if conjunctions:
        kwargs["conjunctions"] = tuple(lemma for _i, lemma in sorted(conjunctions))

    # German-style compounds are head-final; default the compound head to
    # the last segment so inflection lands on it.
    if pos is PartOfSpeech.NOUN and "-" in head.form:
        segments = lemma_segments(lemma)
        if len(segments) > 1:
            kwargs["head_index"] = len(segments) - 1

    unit = GrammarUnit(
        id=frag.unit_id,
        locale=frag.locale,
        pos=pos,
        features=FeatureSet(**{k: v for k, v in kwargs.items() if v is not None}),
    )
    violations = validate_unit(unit)
    if violations:
        # Drop whatever feature a defective parse smuggled in rather than
        # emitting an illegal unit.
        cleaned = dict(kwargs)
        for violation in violations:
            if violation.feature != "lemma":
                cleaned.pop(violation.feature, None)
        unit = GrammarUnit(
            id=frag.unit_id,
            locale=frag.locale,
            pos=pos,
            features=FeatureSet(**{k: v for k, v in cleaned.items() if v is not None}),
        )
    return unit


class Gazetteer:
    """Known proper names whose parses habitually misreport case."""

    def __init__(self, names: Iterable[str] = ()):
        self._names = {name.strip() for name in names if name.strip()}

    def __contains__(self, name: str) -> bool:
        return name in self._names

    def __len__(self) -> int:
        return len(self._names)

    @classmethod
    def from_file(cls, path: str | Path) -> "Gazetteer":
        with open(path, encoding="utf-8") as fh:
            return cls(fh.readlines())


@dataclass(frozen=True)
class CaseOverride:
    unit_id: str
    parsed_case: Optional[Case]
    forced_case: Optional[Case]


def transfer_unit(source: GrammarUnit, target_parse: ParseFragment,
                  gazetteer: Optional[Gazetteer] = None
                  ) -> tuple[GrammarUnit, Optional[CaseOverride]]:
    """Aggregate the target parse and carry over the source unit's metadata.

    Identity (id), agreement binding, and the bound numeral value travel
    from the source; target-side morphology (case, determiner, gender)
    wins. Exception: parses of gazetteer names that claim genitive keep
    the source case instead -- dependency parsers habitually misread
    s-final team names as singular genitives.
    """
    aggregated = aggregate_fragment(target_parse)
    feats = aggregated.features

    override: Optional[CaseOverride] = None
    if gazetteer is not None and feats.case is Case.GENITIVE \
            and source.features.case is not Case.GENITIVE:
        head = target_parse.root()
        names = {feats.lemma, head.lemma, head.form}
        if any(name in gazetteer for name in names):
            forced = source.features.case or Case.NOMINATIVE
            if forced in LOCALE_CASES.get(aggregated.locale.code, frozenset(Case)):
                override = CaseOverride(source.id, feats.case, forced)
                feats = _replace_features(feats, case=forced)

    if source.features.numerals is not None:
        ntype = feats.numerals.numeral_type if feats.numerals is not None \
            else source.features.numerals.numeral_type
        feats = _replace_features(
            feats, numerals=Numeral(source.features.numerals.value, ntype)
        )

    unit = GrammarUnit(
        id=source.id,
        locale=aggregated.locale,
        pos=aggregated.pos,
        features=feats,
        agreement_source=source.agreement_source,
    )
    return unit, override


def _replace_features(feats: FeatureSet, **changes) -> FeatureSet:
    from dataclasses import replace

    return replace(feats, **changes)


@dataclass(frozen=True)
class TransferFailure:
    unit_id: str
    reason: str


@dataclass(frozen=True)
class TransferReport:
    statement_id: str
    lost: tuple[str, ...] = ()
    failures: tuple[TransferFailure, ...] = ()
    case_overrides: tuple[CaseOverride, ...] = ()

    def to_dict(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "lost": list(self.lost),
            "failures": [
                {"unit_id": f.unit_id, "reason": f.reason} for f in self.failures
            ],
            "case_overrides": [
                {
                    "unit_id": o.unit_id,
                    "parsed_case": o.parsed_case.value if o.parsed_case else None,
                    "forced_case": o.forced_case.value if o.forced_case else None,
                }
                for o in self.case_overrides
            ],
        }


@dataclass(frozen=True)
class StatementTransfer:
    statement: StatementTemplate
    report: TransferReport
    rendered_source: RenderedStatement
    target_text: str


class TransferError(Exception):
    def __init__(self, statement_id: str, cause: Exception):
        super().__init__(f"statement {statement_id!r}: {cause}")
        self.statement_id = statement_id
        self.cause = cause


def transfer_statement(stmt: StatementTemplate, data: DataRecord,
                       ctx: RealizationContext, backend: TranslationBackend,
                       parses: ParseProvider, target_locale: Locale,
                       gazetteer: Optional[Gazetteer] = None) -> StatementTransfer:
    """Run the translation workflow for one statement.

    The returned statement's literal segments are the translated text
    between surviving snippets; its unit references point at the newly
    aggregated target units. Lost markers and aggregation failures are
    reported, never raised.
    """
    rendered = render_statement(stmt, data, ctx)
    tagged = mark_units(rendered.text, rendered.spans)
    request = TranslationRequest(
        source_locale=stmt.locale, target_locale=target_locale, tagged_text=tagged
    )
    try:
        translated = backend.translate(request)
    except BackendError as exc:
        raise TransferError(stmt.id, exc) from exc
    alignment = align_translation(translated, expected_ids=rendered.spans.keys())

    snippets = [(e.unit_id, e.text) for e in alignment.extractions]
    fragments = parses.parse_snippets(snippets, target_locale)

    failures: list[TransferFailure] = []
    overrides: list[CaseOverride] = []
    units: dict[str, GrammarUnit] = {}
    placed: list[tuple[int, int, str]] = []  # (start, end, unit_id) in target text
    for extraction in alignment.extractions:
        if extraction.unit_id not in rendered.units:
            failures.append(
                TransferFailure(extraction.unit_id, "marker id unknown to statement")
            )
            continue
        fragment = fragments.get(extraction.unit_id)
        if fragment is None:
            failures.append(
                TransferFailure(extraction.unit_id, "no dependency parse for snippet")
            )
            continue
        source_unit = rendered.units[extraction.unit_id]
        try:
            unit, override = transfer_unit(source_unit, fragment, gazetteer)
        except UnsupportedHead as exc:
            failures.append(TransferFailure(extraction.unit_id, str(exc)))
            continue
        units[extraction.unit_id] = unit
        if override is not None:
            overrides.append(override)
        placed.append((extraction.start, extraction.end, extraction.unit_id))

    segments: list[Segment] = []
    cursor = 0
    target_text = alignment.stripped_text
    for start, end, unit_id in sorted(placed):
        if start > cursor:
            segments.append(Literal(target_text[cursor:start]))
        segments.append(UnitRef(unit_id))
        cursor = end
    if cursor < len(target_text):
        segments.append(Literal(target_text[cursor:]))

    target_statement = StatementTemplate(
        id=stmt.id,
        locale=target_locale,
        segments=tuple(segments),
        units=units,
        condition=stmt.condition,
    )
    report = TransferReport(
        statement_id=stmt.id,
        lost=alignment.lost,
        failures=tuple(failures),
        case_overrides=tuple(overrides),
    )
    return StatementTransfer(
        statement=target_statement,
        report=report,
        rendered_source=rendered,
        target_text=target_text,
    )


@dataclass(frozen=True)
class ProjectTransfer:
    project: Project
    reports: tuple[TransferReport, ...]

    def report_dict(self) -> dict:
        return {
            "target_locale": self.project.source_locale.code,
            "statements": [r.to_dict() for r in self.reports],
            "lost_total": sum(len(r.lost) for r in self.reports),
            "failure_total": sum(len(r.failures) for r in self.reports),
            "case_override_total": sum(len(r.case_overrides) for r in self.reports),
        }


def transfer_project(project: Project, data: DataRecord, ctx: RealizationContext,
                     backend: TranslationBackend, parses: ParseProvider,
                     target_locale: Locale,
                     gazetteer: Optional[Gazetteer] = None) -> ProjectTransfer:
    """Transfer every statement; one failing statement fails the project."""
    from .templates import build_project

    statements: list[StatementTemplate] = []
    reports: list[TransferReport] = []
    for stmt in project.statements:
        result = transfer_statement(
            stmt, data, ctx, backend, parses, target_locale, gazetteer
        )
        statements.append(result.statement)
        reports.append(result.report)
    target_project = build_project(
        f"{project.id}.{target_locale.code}",
        target_locale,
        [],
        project.schema,
        statements,
    )
    return ProjectTransfer(project=target_project, reports=tuple(reports))

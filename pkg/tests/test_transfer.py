from __future__ import annotations

import pytest

from gramtrans.backends import TMBackend, TranslationMemory
from gramtrans.conllu import DependencyToken, FixtureParseProvider, ParseFragment
from gramtrans.grammar import (
    Case,
    DeterminerKind,
    FeatureSet,
    Gender,
    GrammarUnit,
    Number,
    Numeral,
    NumeralType,
    PartOfSpeech,
    Person,
    PronounType,
    Tense,
    locale_by_code,
    validate_unit,
)
from gramtrans.planner import render_statement
from gramtrans.transfer import (
    Gazetteer,
    TransferError,
    UnsupportedHead,
    aggregate_fragment,
    transfer_project,
    transfer_statement,
    transfer_unit,
)
from gramtrans.templates import DataRecord, build_statement

EN = locale_by_code("en-US")
DE = locale_by_code("de-DE")


def tok(index, form, upos, head, deprel="dep", lemma=None, **feats):
    return DependencyToken(
        index=index, form=form, lemma=lemma or form, upos=upos,
        feats={k: v for k, v in feats.items()}, head=head, deprel=deprel,
    )


def frag(*tokens, unit_id="u1", locale=DE):
    return ParseFragment(unit_id=unit_id, tokens=tokens, locale=locale)


class TestAggregateFragment:
    def test_prepositional_phrase_with_article(self):
        fragment = frag(
            tok(1, "an", "ADP", 3, "case"),
            tok(2, "dem", "DET", 3, "det", lemma="der", Definite="Def",
                Case="Dat", Gender="Masc", Number="Sing"),
            tok(3, "Samstag", "NOUN", 0, "root", Case="Dat", Gender="Masc",
                Number="Sing"),
        )
        unit = aggregate_fragment(fragment)
        feats = unit.features
        assert unit.pos is PartOfSpeech.NOUN
        assert feats.preposition == "an"
        assert feats.determiner is DeterminerKind.DEFINITE
        assert feats.lemma == "Samstag"
        assert feats.case is Case.DATIVE
        assert feats.number is Number.SINGULAR
        assert feats.gender is Gender.MASCULINE
        assert validate_unit(unit) == []

    def test_single_token_noun(self):
        unit = aggregate_fragment(frag(
            tok(1, "Samstag", "NOUN", 0, "root", Case="Nom", Number="Sing")
        ))
        assert unit.features.lemma == "Samstag"
        assert unit.features.case is Case.NOMINATIVE
        assert unit.features.number is Number.SINGULAR
        assert unit.features.determiner is None

    def test_verb_aggregation(self):
        # Hand-written row for "gewann" following the treebank convention:
        # VERB, lemma gewinnen, Number=Sing|Person=3|Tense=Past.
        unit = aggregate_fragment(frag(
            tok(1, "gewann", "VERB", 0, "root", lemma="gewinnen",
                Number="Sing", Person="3", Tense="Past")
        ))
        assert unit.pos is PartOfSpeech.VERB
        assert unit.features.lemma == "gewinnen"
        assert unit.features.tense is Tense.PAST
        assert unit.features.person is Person.THIRD
        assert unit.features.number is Number.SINGULAR

    def test_pronoun_with_possession(self):
        unit = aggregate_fragment(frag(
            tok(1, "ihres", "PRON", 0, "root", lemma="ihr", PronType="Prs",
                Poss="Yes", Case="Gen", Number="Sing")
        ))
        assert unit.pos is PartOfSpeech.PRONOUN
        assert unit.features.pronoun_type is PronounType.POSSESSIVE

    def test_adjectives_collected_in_surface_order(self):
        unit = aggregate_fragment(frag(
            tok(1, "große", "ADJ", 3, "amod", lemma="groß"),
            tok(2, "schnelle", "ADJ", 3, "amod", lemma="schnell"),
            tok(3, "Fans", "NOUN", 0, "root", lemma="Fan", Number="Plur"),
        ))
        assert unit.features.adjectives == ("groß", "schnell")

    def test_numeral_and_conjunction_children(self):
        unit = aggregate_fragment(frag(
            tok(1, "8", "NUM", 3, "nummod", NumType="Card"),
            tok(2, "und", "CCONJ", 3, "cc"),
            tok(3, "Punkte", "NOUN", 0, "root", lemma="Punkt", Number="Plur"),
        ))
        assert unit.features.numerals == Numeral(8, NumeralType.CARDINAL)
        assert unit.features.conjunctions == ("und",)

    def test_flat_name_children_fold_into_lemma(self):
        unit = aggregate_fragment(frag(
            tok(1, "den", "DET", 2, "det", lemma="der", Definite="Def"),
            tok(2, "Denver", "PROPN", 0, "root", Case="Dat", Number="Plur"),
            tok(3, "Nuggets", "PROPN", 2, "flat:name"),
        ))
        assert unit.features.lemma == "Denver Nuggets"

    def test_hyphenated_head_defaults_head_index_to_last_segment(self):
        unit = aggregate_fragment(frag(
            tok(1, "Double-Double-Ergebnis", "NOUN", 0, "root",
                Case="Nom", Number="Sing", Gender="Neut"),
        ))
        assert unit.features.head_index == 2

    def test_unsupported_head_flagged(self):
        with pytest.raises(UnsupportedHead):
            aggregate_fragment(frag(tok(1, "schnell", "ADV", 0, "root")))

    def test_locale_foreign_case_dropped(self):
        unit = aggregate_fragment(frag(
            tok(1, "Samstag", "NOUN", 0, "root", Case="Loc", Number="Sing"),
        ))
        assert unit.features.case is None

    def test_illegal_dependents_never_leak_into_verbs(self):
        unit = aggregate_fragment(frag(
            tok(1, "schöne", "ADJ", 2, "amod", lemma="schön"),
            tok(2, "gewann", "VERB", 0, "root", lemma="gewinnen", Tense="Past"),
        ))
        assert unit.features.adjectives == ()
        assert validate_unit(unit) == []

    def test_aggregation_always_validates(self, bulls_parses, bulls_project,
                                          de_locale):
        unit_ids = [u for s in bulls_project.statements for u in s.units]
        for unit_id, fragment in bulls_parses.parse_snippets(
                [(u, "") for u in unit_ids], de_locale).items():
            unit = aggregate_fragment(fragment)
            assert validate_unit(unit) == [], unit_id


def source_unit(**kw):
    feats = {
        "lemma": kw.pop("lemma", "Saturday"),
        "case": kw.pop("case", Case.NOMINATIVE),
        "number": kw.pop("number", Number.SINGULAR),
        "preposition": kw.pop("preposition", "on"),
        "determiner": kw.pop("determiner", DeterminerKind.NONE),
    }
    return GrammarUnit(
        id=kw.pop("id", "u1"), locale=EN, pos=PartOfSpeech.NOUN,
        features=FeatureSet(**feats), **kw,
    )


SAMSTAG_FRAGMENT = frag(
    tok(1, "an", "ADP", 3, "case"),
    tok(2, "dem", "DET", 3, "det", lemma="der", Definite="Def"),
    tok(3, "Samstag", "NOUN", 0, "root", Case="Dat", Gender="Masc",
        Number="Sing"),
)


class TestTransferUnit:
    def test_weekday_unit_gains_article_and_changes_case(self):
        unit, override = transfer_unit(source_unit(), SAMSTAG_FRAGMENT)
        assert override is None
        assert unit.id == "u1"
        assert unit.locale is DE
        assert unit.features.determiner is DeterminerKind.DEFINITE
        assert unit.features.case is Case.DATIVE
        assert unit.features.lemma == "Samstag"

    def test_identity_metadata_is_carried(self):
        src = source_unit(id="s3_fans", agreement_source="attendance")
        unit, _ = transfer_unit(src, SAMSTAG_FRAGMENT)
        assert unit.id == "s3_fans"
        assert unit.agreement_source == "attendance"

    def test_numeral_value_is_data_not_morphology(self):
        src = GrammarUnit(
            id="u1", locale=EN, pos=PartOfSpeech.NOUN,
            features=FeatureSet(lemma="rebound",
                                numerals=Numeral(8, NumeralType.CARDINAL)),
        )
        target = frag(
            tok(1, "acht", "NUM", 2, "nummod", NumType="Card"),
            tok(2, "Rückprallern", "NOUN", 0, "root", lemma="Rückpraller",
                Case="Dat", Number="Plur"),
        )
        unit, _ = transfer_unit(src, target)
        assert unit.features.numerals == Numeral(8, NumeralType.CARDINAL)

    def test_target_morphology_wins(self):
        src = source_unit(case=Case.GENITIVE, determiner=DeterminerKind.NONE)
        unit, _ = transfer_unit(src, SAMSTAG_FRAGMENT)
        assert unit.features.case is Case.DATIVE
        assert unit.features.determiner is DeterminerKind.DEFINITE


class TestGazetteerGuard:
    GAZ = Gazetteer(["Denver Nuggets", "Nuggets"])

    def misparse(self):
        return frag(
            tok(1, "die", "DET", 2, "det", lemma="der", Definite="Def"),
            tok(2, "Denver", "PROPN", 0, "root", Case="Gen", Gender="Fem",
                Number="Sing"),
            tok(3, "Nuggets", "PROPN", 2, "flat:name", Case="Gen"),
        )

    def test_genitive_misparse_forced_back_to_source_case(self):
        src = source_unit(lemma="Denver Nuggets", case=Case.NOMINATIVE,
                          determiner=DeterminerKind.DEFINITE, preposition=None)
        unit, override = transfer_unit(src, self.misparse(), self.GAZ)
        assert unit.features.case is Case.NOMINATIVE
        assert override is not None
        assert override.parsed_case is Case.GENITIVE
        assert override.forced_case is Case.NOMINATIVE

    def test_unset_source_case_defaults_to_nominative(self):
        src = source_unit(lemma="Denver Nuggets", case=None,
                          determiner=DeterminerKind.DEFINITE, preposition=None)
        unit, override = transfer_unit(src, self.misparse(), self.GAZ)
        assert unit.features.case is Case.NOMINATIVE
        assert override is not None

    def test_non_genitive_parse_untouched(self):
        correct = frag(
            tok(1, "den", "DET", 2, "det", lemma="der", Definite="Def"),
            tok(2, "Denver", "PROPN", 0, "root", Case="Dat", Number="Plur"),
            tok(3, "Nuggets", "PROPN", 2, "flat:name"),
        )
        src = source_unit(lemma="Denver Nuggets", case=Case.ACCUSATIVE,
                          determiner=DeterminerKind.DEFINITE, preposition=None)
        unit, override = transfer_unit(src, correct, self.GAZ)
        assert override is None
        assert unit.features.case is Case.DATIVE

    def test_names_off_gazetteer_untouched(self):
        misparse = frag(
            tok(1, "Leistungen", "NOUN", 0, "root", lemma="Leistung",
                Case="Gen", Number="Plur"),
        )
        src = source_unit(lemma="performance", case=Case.NOMINATIVE,
                          preposition=None, determiner=None)
        unit, override = transfer_unit(src, misparse, self.GAZ)
        assert override is None
        assert unit.features.case is Case.GENITIVE


def _statement_for(template, units, locale=EN):
    return build_statement("s1", locale, template, units)


def _tm_backend(source, target):
    memory = TranslationMemory([{
        "source_locale": "en-US", "target_locale": "de-DE",
        "source": source, "target": target,
    }])
    return TMBackend(memory)


class TestTransferStatement:
    def test_weekday_statement_end_to_end(self, en_ctx, de_ctx):
        stmt = _statement_for("The game takes place [u1].",
                              {"u1": source_unit()})
        backend = _tm_backend(
            "The game takes place ⟦gu:u1⟧on Saturday⟦/gu⟧.",
            "Das Spiel findet ⟦gu:u1⟧am Samstag⟦/gu⟧ statt.",
        )
        parses = FixtureParseProvider({"u1": SAMSTAG_FRAGMENT})
        result = transfer_statement(
            stmt, DataRecord(fields={}, provenance="r"), en_ctx, backend,
            parses, DE,
        )
        assert result.report.lost == ()
        rendered = render_statement(
            result.statement, DataRecord(fields={}, provenance="r"), de_ctx
        )
        assert rendered.text == "Das Spiel findet am Samstag statt."

    def test_zero_units_is_pure_literal_translation(self, en_ctx):
        stmt = _statement_for("Plain text.", {})
        backend = _tm_backend("Plain text.", "Einfacher Text.")
        result = transfer_statement(
            stmt, DataRecord(fields={}, provenance="r"), en_ctx, backend,
            FixtureParseProvider({}), DE,
        )
        assert result.report.lost == ()
        assert result.report.failures == ()
        assert result.statement.units == {}
        assert result.target_text == "Einfacher Text."

    def test_dropped_marker_reported_other_units_transfer(self, en_ctx):
        units = {
            "u1": source_unit(id="u1"),
            "u2": source_unit(id="u2", lemma="Thursday"),
        }
        stmt = _statement_for("[u1] and [u2].", units)
        backend = _tm_backend(
            "⟦gu:u1⟧on Saturday⟦/gu⟧ and ⟦gu:u2⟧on Thursday⟦/gu⟧.",
            "am Donnerstag und ⟦gu:u1⟧am Samstag⟦/gu⟧.",
        )
        parses = FixtureParseProvider({"u1": SAMSTAG_FRAGMENT})
        result = transfer_statement(
            stmt, DataRecord(fields={}, provenance="r"), en_ctx, backend,
            parses, DE,
        )
        assert result.report.lost == ("u2",)
        assert set(result.statement.units) == {"u1"}

    def test_unparseable_snippet_is_a_failure_not_an_error(self, en_ctx):
        stmt = _statement_for("[u1].", {"u1": source_unit()})
        backend = _tm_backend(
            "⟦gu:u1⟧on Saturday⟦/gu⟧.", "⟦gu:u1⟧schnell⟦/gu⟧.",
        )
        parses = FixtureParseProvider({
            "u1": frag(tok(1, "schnell", "ADV", 0, "root")),
        })
        result = transfer_statement(
            stmt, DataRecord(fields={}, provenance="r"), en_ctx, backend,
            parses, DE,
        )
        assert result.statement.units == {}
        assert len(result.report.failures) == 1
        assert "maps to no part of speech" in result.report.failures[0].reason

    def test_backend_error_carries_statement_id(self, en_ctx):
        stmt = _statement_for("Unknown text.", {})
        backend = _tm_backend("something else", "egal")
        with pytest.raises(TransferError) as err:
            transfer_statement(
                stmt, DataRecord(fields={}, provenance="r"), en_ctx, backend,
                FixtureParseProvider({}), DE,
            )
        assert err.value.statement_id == "s1"


class TestFixtureProjectTransfer:
    def test_transfer_report_is_clean_except_scripted_misparse(
            self, bulls_project, bulls_records, en_ctx, bulls_backend,
            bulls_parses, gazetteer):
        result = transfer_project(
            bulls_project, bulls_records[0], en_ctx, bulls_backend,
            bulls_parses, DE, gazetteer,
        )
        assert all(r.lost == () for r in result.reports)
        assert all(r.failures == () for r in result.reports)
        overrides = [o for r in result.reports for o in r.case_overrides]
        assert [(o.unit_id, o.parsed_case, o.forced_case) for o in overrides] \
            == [("s6_team", Case.GENITIVE, Case.NOMINATIVE)]

    def test_rerender_reproduces_expected_german(self, bulls_project,
                                                 bulls_records, en_ctx, de_ctx,
                                                 bulls_backend, bulls_parses,
                                                 gazetteer):
        result = transfer_project(
            bulls_project, bulls_records[0], en_ctx, bulls_backend,
            bulls_parses, DE, gazetteer,
        )
        texts = [
            render_statement(s, bulls_records[0], de_ctx).text
            for s in result.project.statements
        ]
        assert texts[3] == ("Die Heimmannschaft gewann mit 106 - 101 gegen "
                            "die Gastmannschaft aus Denver.")
        assert "8 beeindruckenden Rückprallern" in texts[4]
        assert "am Donnerstag (01. Januar 2015) im ausverkauften United Center" \
            in texts[1]
        assert "die Denver Nuggets konnten trotz der beeindruckenden " \
            "Leistungen" in texts[5]

    def test_without_gazetteer_the_misparse_surfaces(self, bulls_project,
                                                     bulls_records, en_ctx,
                                                     de_ctx, bulls_backend,
                                                     bulls_parses):
        result = transfer_project(
            bulls_project, bulls_records[0], en_ctx, bulls_backend,
            bulls_parses, DE, gazetteer=None,
        )
        s6 = next(s for s in result.project.statements if s.id == "s6")
        assert s6.units["s6_team"].features.case is Case.GENITIVE
        text = render_statement(s6, bulls_records[0], de_ctx).text
        assert "der Denver Nuggets konnten" in text  # visibly wrong German

    def test_transfer_is_deterministic(self, bulls_project, bulls_records,
                                       en_ctx, bulls_backend, bulls_parses,
                                       gazetteer):
        first = transfer_project(bulls_project, bulls_records[0], en_ctx,
                                 bulls_backend, bulls_parses, DE, gazetteer)
        second = transfer_project(bulls_project, bulls_records[0], en_ctx,
                                  bulls_backend, bulls_parses, DE, gazetteer)
        assert first.project == second.project

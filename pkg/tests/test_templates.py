from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gramtrans.grammar import (
    FeatureSet,
    GrammarUnit,
    PartOfSpeech,
    locale_by_code,
)
from gramtrans.templates import (
    Condition,
    ConditionTypeError,
    DataRecord,
    DataSlot,
    Literal,
    ParseError,
    ProjectError,
    UnitRef,
    UnknownField,
    build_project,
    build_statement,
    parse_condition,
    parse_template,
    serialize_segments,
)

EN = locale_by_code("en-US")


class TestParseTemplate:
    def test_slot_unit_and_agreement(self):
        segments = parse_template("Peter scored {goals} [u1|number=@goals].")
        assert segments == (
            Literal("Peter scored "),
            DataSlot("goals"),
            Literal(" "),
            UnitRef("u1", (("agreement_source", "goals"),)),
            Literal("."),
        )

    def test_empty_template(self):
        assert parse_template("") == ()

    def test_unterminated_unit_ref_offset(self):
        with pytest.raises(ParseError) as err:
            parse_template("missing close [u1")
        assert err.value.offset == 14
        assert err.value.line == 1 and err.value.column == 15
        assert "]" in err.value.expected

    def test_unterminated_slot(self):
        with pytest.raises(ParseError) as err:
            parse_template("and {field")
        assert err.value.offset == 4

    def test_slot_format(self):
        assert parse_template("{date:date-long}") == (DataSlot("date", "date-long"),)
        with pytest.raises(ParseError) as err:
            parse_template("{date:short}")
        assert "integer" in err.value.expected

    def test_bad_override_key(self):
        with pytest.raises(ParseError):
            parse_template("[u1|mood=indicative]")

    def test_override_values(self):
        (ref,) = parse_template(
            "[u1|case=dative,adjectives=big+red,numerals=8:cardinal,head_index=2]"
        )
        overrides = ref.overrides_dict()
        assert overrides["case"] == "dative"
        assert overrides["adjectives"] == ("big", "red")
        assert overrides["numerals"] == {"value": 8, "numeral_type": "cardinal"}
        assert overrides["head_index"] == 2

    def test_escapes(self):
        assert parse_template(r"literal \{brace\} and \[bracket\]") == (
            Literal("literal {brace} and [bracket]"),
        )

    def test_unmatched_close(self):
        with pytest.raises(ParseError):
            parse_template("oops ] here")


class TestSerialize:
    def test_canonical_round_trip(self):
        text = "Peter scored {goals} [u1|number=@goals]."
        assert serialize_segments(parse_template(text)) == text

    def test_override_order_is_canonical(self):
        a = parse_template("[u1|number=@goals,case=dative]")
        b = parse_template("[u1|case=dative,number=@goals]")
        assert serialize_segments(a) == serialize_segments(b)

    def test_escaping_round_trips(self):
        segments = (Literal("a { b [ c \\ d"),)
        assert parse_template(serialize_segments(segments)) == segments


_literal_text = st.text(
    alphabet="abc XY.,!ü⟦⟧-09", min_size=1, max_size=12,
)
_name = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)


@st.composite
def _segments(draw):
    out = []
    last_literal = False
    for _ in range(draw(st.integers(min_value=0, max_value=6))):
        kind = draw(st.sampled_from(["lit", "slot", "unit"]))
        if kind == "lit":
            if last_literal:
                continue  # adjacent literals merge on parse
            out.append(Literal(draw(_literal_text)))
            last_literal = True
            continue
        last_literal = False
        if kind == "slot":
            fmt = draw(st.sampled_from([None, "integer", "date-long"]))
            out.append(DataSlot(draw(_name), fmt))
        else:
            overrides = []
            if draw(st.booleans()):
                overrides.append(("case", draw(st.sampled_from(
                    ["nominative", "dative", "accusative"]))))
            if draw(st.booleans()):
                overrides.append(("agreement_source", draw(_name)))
            out.append(UnitRef(draw(_name), tuple(overrides)))
    return tuple(out)


@given(_segments())
def test_parse_serialize_identity_property(segments):
    text = serialize_segments(segments)
    assert serialize_segments(parse_template(text)) == text
    assert parse_template(text) == segments


class TestConditions:
    def test_comparison(self):
        cond = parse_condition("home_win == true")
        assert cond.evaluate({"home_win": True}) is True
        assert cond.evaluate({"home_win": False}) is False

    def test_boolean_operators(self):
        cond = parse_condition("points > 100 and not (city == 'Denver' or lost == true)")
        data = {"points": 106, "city": "Chicago", "lost": False}
        assert cond.evaluate(data) is True
        assert cond.evaluate({**data, "points": 99}) is False

    def test_unknown_field(self):
        with pytest.raises(UnknownField):
            parse_condition("ghosts > 3").evaluate({"points": 1})

    def test_fields_collected(self):
        cond = parse_condition("a > 1 and (b == 'x' or not c)")
        assert cond.fields == {"a", "b", "c"}

    def test_ordering_requires_same_type(self):
        with pytest.raises(ConditionTypeError):
            parse_condition("a < b").evaluate({"a": 1, "b": "two"})

    def test_string_literals(self):
        cond = parse_condition('team == "Chicago Bulls"')
        assert cond.evaluate({"team": "Chicago Bulls"})

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_condition("a ==")
        with pytest.raises(ParseError):
            parse_condition("(a == 1")
        with pytest.raises(ParseError):
            parse_condition("a == 1 extra")


def _unit(uid="u1"):
    return GrammarUnit(id=uid, locale=EN, pos=PartOfSpeech.NOUN,
                       features=FeatureSet(lemma="goal"))


class TestStatementsAndProjects:
    def test_unit_refs_must_resolve(self):
        with pytest.raises(ProjectError, match="not declared"):
            build_statement("s1", EN, "see [u9]", {"u1": _unit()})

    def test_duplicate_unit_ref_rejected(self):
        with pytest.raises(ProjectError, match="referenced twice"):
            build_statement("s1", EN, "[u1] and [u1]", {"u1": _unit()})

    def test_condition_fields_must_be_in_schema(self):
        stmt = build_statement("s1", EN, "hello", {}, condition="goals > 0")
        with pytest.raises(ProjectError, match="outside the schema"):
            build_project("p", EN, [], ["points"], [stmt])

    def test_statement_ids_unique(self):
        s = build_statement("s1", EN, "hello", {})
        with pytest.raises(ProjectError, match="unique"):
            build_project("p", EN, [], [], [s, s])

    def test_invalid_unit_rejected_at_build(self):
        bad = GrammarUnit(id="u1", locale=EN, pos=PartOfSpeech.VERB,
                          features=FeatureSet(lemma="win", adjectives=("big",)))
        with pytest.raises(ProjectError, match="invalid"):
            build_project("p", EN, [], [], [
                build_statement("s1", EN, "[u1]", {"u1": bad})
            ])

    def test_scalar_fields_only(self):
        with pytest.raises(ProjectError, match="not scalar"):
            DataRecord(fields={"nested": [1, 2]}, provenance="r1")

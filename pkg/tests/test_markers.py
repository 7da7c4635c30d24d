from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gramtrans.markers import (
    OverlappingSpans,
    align_translation,
    check_balanced,
    mark_units,
    strip_markers,
)


class TestMarkUnits:
    def test_single_span(self):
        out = mark_units("on Saturday we play", {"u1": (0, 11)})
        assert out == "⟦gu:u1⟧on Saturday⟦/gu⟧ we play"

    def test_empty_span_map(self):
        assert mark_units("unchanged", {}) == "unchanged"

    def test_adjacent_spans_stay_balanced(self):
        out = mark_units("abcd", {"a": (0, 2), "b": (2, 4)})
        assert out == "⟦gu:a⟧ab⟦/gu⟧⟦gu:b⟧cd⟦/gu⟧"
        assert check_balanced(out)
        assert strip_markers(out) == "abcd"

    def test_overlap_rejected(self):
        with pytest.raises(OverlappingSpans):
            mark_units("abcdef", {"a": (0, 4), "b": (2, 6)})

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            mark_units("ab", {"a": (0, 5)})


@given(
    st.text(alphabet="abc def✦", max_size=40),
    st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), max_size=4),
)
def test_marker_round_trip_property(text, raw_spans):
    spans = {}
    cursor = 0
    for i, (a, b) in enumerate(raw_spans):
        start, end = sorted((a % (len(text) + 1), b % (len(text) + 1)))
        if start < cursor:
            continue
        spans[f"u{i}"] = (start, end)
        cursor = end
    tagged = mark_units(text, spans)
    assert strip_markers(tagged) == text
    assert check_balanced(tagged)


class TestAlign:
    def test_surviving_pair_extracted(self):
        alignment = align_translation(
            "Das Spiel findet ⟦gu:u1⟧am Samstag⟦/gu⟧ statt.", ["u1"]
        )
        assert alignment.snippet_map() == {"u1": "am Samstag"}
        assert alignment.lost == ()
        assert alignment.stripped_text == "Das Spiel findet am Samstag statt."
        (extraction,) = alignment.extractions
        assert alignment.stripped_text[extraction.start:extraction.end] \
            == "am Samstag"

    def test_dropped_markers_reported_lost(self):
        alignment = align_translation("no markers here", ["u1"])
        assert alignment.snippet_map() == {}
        assert alignment.lost == ("u1",)

    def test_half_open_marker_is_a_loss(self):
        alignment = align_translation(
            "⟦gu:a⟧alpha⟦/gu⟧ and ⟦gu:b⟧beta with no close", ["a", "b"]
        )
        assert alignment.snippet_map() == {"a": "alpha"}
        assert alignment.lost == ("b",)

    def test_nested_marker_outer_is_lost(self):
        alignment = align_translation(
            "⟦gu:a⟧x ⟦gu:b⟧y⟦/gu⟧ z⟦/gu⟧", ["a", "b"]
        )
        assert alignment.snippet_map() == {"b": "y"}
        assert "a" in alignment.lost

    def test_duplicated_id_is_a_loss(self):
        alignment = align_translation(
            "⟦gu:a⟧one⟦/gu⟧ mid ⟦gu:a⟧two⟦/gu⟧", ["a"]
        )
        assert alignment.snippet_map() == {}
        assert alignment.lost == ("a",)

    def test_stray_closer_ignored(self):
        alignment = align_translation("before ⟦/gu⟧ after ⟦gu:a⟧ok⟦/gu⟧", ["a"])
        assert alignment.snippet_map() == {"a": "ok"}
        assert alignment.lost == ()

    def test_losses_never_raise(self):
        for mangled in ("", "⟦gu:⟧", "⟦gu:a⟧⟦gu:b⟧", "⟦/gu⟧⟦/gu⟧"):
            align_translation(mangled, ["a", "b"])

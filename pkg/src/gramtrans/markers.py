"""Inline unit markers: tagging spans for translation and recovering them.

Marked text wraps each unit span as ``⟦gu:ID⟧...⟦/gu⟧``. The rare bracket
characters survive more MT backends than XML-style tags; whatever a
backend mangles degrades to a reported loss, never an exception.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

OPEN_PREFIX = "⟦gu:"   # ⟦gu:
OPEN_SUFFIX = "⟧"       # ⟧
CLOSE = "⟦/gu⟧"    # ⟦/gu⟧

_OPEN_RE = re.compile(r"⟦gu:([^⟦⟧]*)⟧")
_ANY_MARKER = re.compile(r"⟦gu:[^⟦⟧]*⟧|⟦/gu⟧")


class OverlappingSpans(ValueError):
    def __init__(self, a: str, b: str):
        super().__init__(f"unit spans {a!r} and {b!r} overlap")


def open_marker(unit_id: str) -> str:
    return f"{OPEN_PREFIX}{unit_id}{OPEN_SUFFIX}"


def mark_units(text: str, spans: Mapping[str, tuple[int, int]]) -> str:
    """Insert marker pairs around each unit span.

    Spans must be in bounds and non-overlapping (adjacency is fine).
    Stripping the markers recovers the input text exactly.
    """
    ordered = sorted(spans.items(), key=lambda kv: (kv[1][0], kv[1][1]))
    previous_end = 0
    previous_id: Optional[str] = None
    for unit_id, (start, end) in ordered:
        if not (0 <= start <= end <= len(text)):
            raise ValueError(f"span of unit {unit_id!r} out of bounds")
        if previous_id is not None and start < previous_end:
            raise OverlappingSpans(previous_id, unit_id)
        previous_end = end
        previous_id = unit_id
    parts: list[str] = []
    cursor = 0
    for unit_id, (start, end) in ordered:
        parts.append(text[cursor:start])
        parts.append(open_marker(unit_id))
        parts.append(text[start:end])
        parts.append(CLOSE)
        cursor = end
    parts.append(text[cursor:])
    return "".join(parts)


def strip_markers(text: str) -> str:
    """Remove every marker, leaving the plain text."""
    return _ANY_MARKER.sub("", text)


def check_balanced(text: str) -> bool:
    """True when markers form non-nested, properly closed pairs."""
    depth = 0
    for match in _ANY_MARKER.finditer(text):
        if match.group(0) == CLOSE:
            depth -= 1
            if depth < 0:
                return False
        else:
            depth += 1
            if depth > 1:
                return False
    return depth == 0


@dataclass(frozen=True)
class Extraction:
    unit_id: str
    text: str
    #: span of the snippet within the marker-stripped target text
    start: int
    end: int


@dataclass(frozen=True)
class Alignment:
    """Surviving snippets (in target order) and the units that got lost."""

    extractions: tuple[Extraction, ...]
    lost: tuple[str, ...]
    stripped_text: str

    def snippet_map(self) -> dict[str, str]:
        return {e.unit_id: e.text for e in self.extractions}


def align_translation(translated: str,
                      expected_ids: Iterable[str] = ()) -> Alignment:
    """Recover unit snippets from translated text by their markers.

    A unit survives when its opening marker is followed by a closing
    marker with no other marker in between (contiguous survival). Anything
    else -- dropped, half-open, nested, or duplicated markers -- makes the
    unit a loss. Losses are data, not errors.
    """
    events: list[tuple[int, int, Optional[str]]] = []
    for match in _ANY_MARKER.finditer(translated):
        if match.group(0) == CLOSE:
            events.append((match.start(), match.end(), None))
        else:
            events.append(
                (match.start(), match.end(), _OPEN_RE.match(match.group(0)).group(1))
            )

    raw: list[tuple[str, int, int]] = []  # (unit_id, seg_start, seg_end) in tagged text
    index = 0
    while index < len(events):
        start, end, unit_id = events[index]
        if unit_id is not None and index + 1 < len(events):
            next_start, _next_end, next_id = events[index + 1]
            if next_id is None:
                raw.append((unit_id, end, next_start))
                index += 2
                continue
        index += 1

    # Map tagged-text offsets onto the stripped text.
    extractions: list[Extraction] = []
    seen: dict[str, int] = {}
    stripped_parts: list[str] = []
    cursor = 0
    removed = 0
    boundaries: dict[int, int] = {}
    for match in _ANY_MARKER.finditer(translated):
        stripped_parts.append(translated[cursor:match.start()])
        boundaries[match.start()] = match.start() - removed
        boundaries[match.end()] = match.end() - (removed + len(match.group(0)))
        removed += len(match.group(0))
        cursor = match.end()
    stripped_parts.append(translated[cursor:])
    stripped = "".join(stripped_parts)

    for unit_id, seg_start, seg_end in raw:
        snippet = strip_markers(translated[seg_start:seg_end])
        extractions.append(
            Extraction(
                unit_id=unit_id,
                text=snippet,
                start=boundaries[seg_start],
                end=boundaries[seg_start] + len(snippet),
            )
        )
        seen[unit_id] = seen.get(unit_id, 0) + 1

    # Duplicated ids indicate a split snippet: treat the unit as lost.
    surviving = tuple(e for e in extractions if seen[e.unit_id] == 1)
    lost = [uid for uid, count in seen.items() if count > 1]
    for uid in expected_ids:
        if uid not in seen:
            lost.append(uid)
    return Alignment(
        extractions=surviving,
        lost=tuple(dict.fromkeys(lost)),
        stripped_text=stripped,
    )

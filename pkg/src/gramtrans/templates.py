"""Statement templates: the small DSL for literals, data slots, and units.

Template syntax:

* ``{field}`` or ``{field:format}`` -- a data slot. Formats: ``integer``,
  ``date-long``. Without a format the value is rendered as-is (booleans as
  true/false).
* ``[unit_id]`` or ``[unit_id|key=value,...]`` -- a reference to a grammar
  unit declared in the statement's unit map, optionally overriding
  features. ``number=@field`` binds the unit's agreement source to a data
  field instead of fixing a number.
* ``\\{``, ``\\[``, ``\\\\`` escape literal braces, brackets, backslashes.

Conditions are a tiny boolean expression language over data fields:
comparisons (==, !=, <, >) of fields and literals combined with
and/or/not and parentheses. No arithmetic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from .grammar import (
    GrammarUnit,
    Locale,
    locale_by_code,
    unit_from_dict,
    unit_to_dict,
    validate_unit,
)


class ParseError(ValueError):
    """Malformed template or condition text."""

    def __init__(self, message: str, text: str, offset: int,
                 expected: tuple[str, ...] = ()):
        line = text.count("\n", 0, offset) + 1
        column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{suffix}")
        self.offset = offset
        self.line = line
        self.column = column
        self.expected = expected


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class DataSlot:
    field: str
    format: Optional[str] = None


@dataclass(frozen=True)
class UnitRef:
    unit_id: str
    overrides: tuple[tuple[str, object], ...] = ()

    def overrides_dict(self) -> dict[str, object]:
        return dict(self.overrides)


Segment = Union[Literal, DataSlot, UnitRef]

SLOT_FORMATS = ("integer", "date-long")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")

# Override keys in canonical serialization order.
_OVERRIDE_KEYS = (
    "lemma",
    "case",
    "number",
    "tense",
    "person",
    "gender",
    "preposition",
    "determiner",
    "pronoun_type",
    "numerals",
    "adjectives",
    "conjunctions",
    "head_index",
)


def parse_template(text: str) -> tuple[Segment, ...]:
    """Parse template text into segments. Raises ParseError on bad input."""
    segments: list[Segment] = []
    literal: list[str] = []
    i = 0
    n = len(text)

    def flush():
        if literal:
            segments.append(Literal("".join(literal)))
            literal.clear()

    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n:
                raise ParseError("dangling escape", text, i, ("{", "[", "\\",))
            literal.append(text[i + 1])
            i += 2
        elif ch == "{":
            end = text.find("}", i + 1)
            if end < 0:
                raise ParseError("unterminated data slot", text, i, ("}",))
            flush()
            segments.append(_parse_slot(text, i + 1, end))
            i = end + 1
        elif ch == "[":
            end = text.find("]", i + 1)
            if end < 0:
                raise ParseError("unterminated unit reference", text, i, ("]",))
            flush()
            segments.append(_parse_unit_ref(text, i + 1, end))
            i = end + 1
        elif ch in "}]":
            raise ParseError(f"unmatched {ch!r}", text, i)
        else:
            literal.append(ch)
            i += 1
    flush()
    return tuple(segments)


def _parse_slot(text: str, start: int, end: int) -> DataSlot:
    body = text[start:end]
    name, sep, fmt = body.partition(":")
    m = _NAME.fullmatch(name)
    if not m:
        raise ParseError(f"bad field name {name!r}", text, start)
    if sep:
        if fmt not in SLOT_FORMATS:
            raise ParseError(f"unknown slot format {fmt!r}", text,
                             start + len(name) + 1, SLOT_FORMATS)
        return DataSlot(name, fmt)
    return DataSlot(name)


def _parse_unit_ref(text: str, start: int, end: int) -> UnitRef:
    body = text[start:end]
    unit_id, sep, rest = body.partition("|")
    if not _NAME.fullmatch(unit_id):
        raise ParseError(f"bad unit id {unit_id!r}", text, start)
    if not sep:
        return UnitRef(unit_id)
    overrides: list[tuple[str, object]] = []
    seen: set[str] = set()
    offset = start + len(unit_id) + 1
    for part in rest.split(","):
        key, eq, raw = part.partition("=")
        key = key.strip()
        if not eq or key not in _OVERRIDE_KEYS:
            raise ParseError(f"bad override {part!r}", text, offset, _OVERRIDE_KEYS)
        if key in seen:
            raise ParseError(f"duplicate override {key!r}", text, offset)
        seen.add(key)
        overrides.append(_parse_override(key, raw.strip(), text, offset))
        offset += len(part) + 1
    order = {k: i for i, k in enumerate(_OVERRIDE_KEYS + ("agreement_source",))}
    overrides.sort(key=lambda kv: order[kv[0]])
    return UnitRef(unit_id, tuple(overrides))


def _parse_override(key: str, raw: str, text: str, offset: int) -> tuple[str, object]:
    if key == "number" and raw.startswith("@"):
        fname = raw[1:]
        if not _NAME.fullmatch(fname):
            raise ParseError(f"bad agreement field {raw!r}", text, offset)
        return ("agreement_source", fname)
    if key in ("adjectives", "conjunctions"):
        return (key, tuple(v for v in raw.split("+") if v))
    if key == "numerals":
        value, sep, ntype = raw.partition(":")
        if not sep or ntype not in ("cardinal", "ordinal"):
            raise ParseError(f"bad numeral override {raw!r}", text, offset,
                             ("<int>:cardinal", "<int>:ordinal"))
        try:
            return (key, {"value": int(value), "numeral_type": ntype})
        except ValueError:
            raise ParseError(f"bad numeral value {value!r}", text, offset) from None
    if key == "head_index":
        try:
            return (key, int(raw))
        except ValueError:
            raise ParseError(f"bad head_index {raw!r}", text, offset) from None
    return (key, raw)


_ESCAPE = re.compile(r"[\\{}\[\]]")


def _escape_literal(text: str) -> str:
    return _ESCAPE.sub(lambda m: "\\" + m.group(0), text)


def serialize_segments(segments: Iterable[Segment]) -> str:
    """Render segments back to canonical template text.

    parse(serialize(parse(t))) == parse(t); serialization is the canonical
    spelling (override keys in fixed order, no stray whitespace).
    """
    parts: list[str] = []
    for seg in segments:
        if isinstance(seg, Literal):
            parts.append(_escape_literal(seg.text))
        elif isinstance(seg, DataSlot):
            parts.append("{%s}" % seg.field if seg.format is None
                         else "{%s:%s}" % (seg.field, seg.format))
        else:
            parts.append(_serialize_unit_ref(seg))
    return "".join(parts)


def _serialize_unit_ref(ref: UnitRef) -> str:
    if not ref.overrides:
        return f"[{ref.unit_id}]"
    rendered = []
    for key, value in ref.overrides:
        if key == "agreement_source":
            rendered.append(f"number=@{value}")
        elif key in ("adjectives", "conjunctions"):
            rendered.append(f"{key}={'+'.join(value)}")
        elif key == "numerals":
            rendered.append(f"numerals={value['value']}:{value['numeral_type']}")
        else:
            rendered.append(f"{key}={value}")
    return f"[{ref.unit_id}|{','.join(rendered)}]"


# --- condition expressions -------------------------------------------------


class UnknownField(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.field = name

    def __str__(self) -> str:
        return f"unknown data field: {self.field!r}"


class ConditionTypeError(TypeError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<op>==|!=|<|>|\(|\))"
    r"|(?P<num>-?\d+)"
    r"|(?P<str>\"[^\"]*\"|'[^']*')"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_-]*))"
)

_KEYWORDS = {"and", "or", "not", "true", "false"}


def _tokenize_condition(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"bad condition token {stripped[:8]!r}", text, at)
        pos = m.end()
        if m.group("op"):
            tokens.append(("op", m.group("op"), m.start("op")))
        elif m.group("num"):
            tokens.append(("lit", int(m.group("num")), m.start("num")))
        elif m.group("str"):
            tokens.append(("lit", m.group("str")[1:-1], m.start("str")))
        else:
            word = m.group("word")
            if word in ("true", "false"):
                tokens.append(("lit", word == "true", m.start("word")))
            elif word in _KEYWORDS:
                tokens.append(("kw", word, m.start("word")))
            else:
                tokens.append(("field", word, m.start("word")))
    return tokens


@dataclass(frozen=True)
class Condition:
    """Parsed boolean expression over data fields."""

    source: str
    _ast: tuple = field(repr=False, default=())

    @property
    def fields(self) -> frozenset[str]:
        out: set[str] = set()

        def walk(node):
            kind = node[0]
            if kind == "field":
                out.add(node[1])
            elif kind in ("and", "or", "cmp"):
                walk(node[1] if kind != "cmp" else node[2])
                walk(node[2] if kind != "cmp" else node[3])
            elif kind == "not":
                walk(node[1])

        walk(self._ast)
        return frozenset(out)

    def evaluate(self, data: Mapping[str, object]) -> bool:
        return bool(_eval_node(self._ast, data))


def parse_condition(text: str) -> Condition:
    tokens = _tokenize_condition(text)
    if not tokens:
        raise ParseError("empty condition", text, 0)
    ast, index = _parse_or(tokens, 0, text)
    if index != len(tokens):
        raise ParseError("trailing tokens in condition", text, tokens[index][2])
    return Condition(source=text, _ast=ast)


def _parse_or(tokens, i, text):
    left, i = _parse_and(tokens, i, text)
    while i < len(tokens) and tokens[i][:2] == ("kw", "or"):
        right, i = _parse_and(tokens, i + 1, text)
        left = ("or", left, right)
    return left, i


def _parse_and(tokens, i, text):
    left, i = _parse_not(tokens, i, text)
    while i < len(tokens) and tokens[i][:2] == ("kw", "and"):
        right, i = _parse_not(tokens, i + 1, text)
        left = ("and", left, right)
    return left, i


def _parse_not(tokens, i, text):
    if i < len(tokens) and tokens[i][:2] == ("kw", "not"):
        inner, i = _parse_not(tokens, i + 1, text)
        return ("not", inner), i
    return _parse_comparison(tokens, i, text)


def _parse_comparison(tokens, i, text):
    left, i = _parse_primary(tokens, i, text)
    if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in ("==", "!=", "<", ">"):
        op = tokens[i][1]
        right, i = _parse_primary(tokens, i + 1, text)
        return ("cmp", op, left, right), i
    return left, i


def _parse_primary(tokens, i, text):
    if i >= len(tokens):
        raise ParseError("unexpected end of condition", text, len(text),
                         ("field", "literal", "("))
    kind, value, offset = tokens[i]
    if kind == "op" and value == "(":
        inner, i = _parse_or(tokens, i + 1, text)
        if i >= len(tokens) or tokens[i][:2] != ("op", ")"):
            raise ParseError("missing closing parenthesis", text, offset, (")",))
        return inner, i + 1
    if kind == "lit":
        return ("lit", value), i + 1
    if kind == "field":
        return ("field", value), i + 1
    raise ParseError(f"unexpected token {value!r}", text, offset)


def _eval_node(node, data):
    kind = node[0]
    if kind == "lit":
        return node[1]
    if kind == "field":
        if node[1] not in data:
            raise UnknownField(node[1])
        return data[node[1]]
    if kind == "not":
        return not _eval_node(node[1], data)
    if kind == "and":
        return _eval_node(node[1], data) and _eval_node(node[2], data)
    if kind == "or":
        return _eval_node(node[1], data) or _eval_node(node[2], data)
    op = node[1]
    left = _eval_node(node[2], data)
    right = _eval_node(node[3], data)
    if op == "==":
        return left == right
    if op == "!=":
        return left != right
    if type(left) is bool or type(right) is bool or type(left) is not type(right):
        raise ConditionTypeError(
            f"cannot order {left!r} and {right!r} with {op!r}"
        )
    return left < right if op == "<" else left > right


# --- statements, records, projects -----------------------------------------


class ProjectError(ValueError):
    pass


@dataclass(frozen=True)
class StatementTemplate:
    """One statement (possibly several sentences) of a project."""

    id: str
    locale: Locale
    segments: tuple[Segment, ...]
    units: Mapping[str, GrammarUnit]
    condition: Optional[Condition] = None

    @property
    def template_text(self) -> str:
        return serialize_segments(self.segments)

    def unit_refs(self) -> tuple[UnitRef, ...]:
        return tuple(s for s in self.segments if isinstance(s, UnitRef))


def build_statement(stmt_id: str, locale: Locale, template: str,
                    units: Mapping[str, GrammarUnit],
                    condition: Optional[str] = None) -> StatementTemplate:
    segments = parse_template(template)
    seen: set[str] = set()
    for seg in segments:
        if isinstance(seg, UnitRef):
            if seg.unit_id not in units:
                raise ProjectError(
                    f"statement {stmt_id!r}: unit {seg.unit_id!r} is not declared"
                )
            if seg.unit_id in seen:
                raise ProjectError(
                    f"statement {stmt_id!r}: unit {seg.unit_id!r} referenced twice"
                )
            seen.add(seg.unit_id)
    cond = parse_condition(condition) if condition else None
    return StatementTemplate(
        id=stmt_id, locale=locale, segments=segments,
        units=dict(units), condition=cond,
    )


@dataclass(frozen=True)
class DataRecord:
    """One flat record of scalar fields plus its dataset instance id."""

    fields: Mapping[str, object]
    provenance: str

    def __post_init__(self):
        for name, value in self.fields.items():
            if not isinstance(value, (int, str, bool)):
                raise ProjectError(
                    f"record {self.provenance}: field {name!r} is not scalar"
                )


def load_records(path: str | Path) -> list[DataRecord]:
    """Read a JSON-lines data file; a reserved "_id" field names the instance."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProjectError(f"{path}:{lineno}: bad JSON: {exc}") from None
            provenance = str(raw.pop("_id", lineno))
            records.append(DataRecord(fields=raw, provenance=provenance))
    return records


@dataclass(frozen=True)
class Project:
    id: str
    source_locale: Locale
    target_locales: tuple[Locale, ...]
    schema: frozenset[str]
    statements: tuple[StatementTemplate, ...]


def build_project(project_id: str, source_locale: Locale,
                  target_locales: Iterable[Locale], schema: Iterable[str],
                  statements: Iterable[StatementTemplate]) -> Project:
    statements = tuple(statements)
    schema = frozenset(schema)
    ids = [s.id for s in statements]
    if len(ids) != len(set(ids)):
        raise ProjectError("statement ids must be unique")
    for stmt in statements:
        if stmt.locale.code != source_locale.code:
            raise ProjectError(
                f"statement {stmt.id!r} locale {stmt.locale.code} differs "
                f"from project source locale {source_locale.code}"
            )
        if stmt.condition is not None:
            unknown = stmt.condition.fields - schema
            if unknown:
                raise ProjectError(
                    f"statement {stmt.id!r} condition references fields "
                    f"outside the schema: {sorted(unknown)}"
                )
        for unit in stmt.units.values():
            violations = validate_unit(unit)
            if violations:
                detail = "; ".join(v.message for v in violations)
                raise ProjectError(
                    f"statement {stmt.id!r} unit {unit.id!r} invalid: {detail}"
                )
    return Project(
        id=project_id,
        source_locale=source_locale,
        target_locales=tuple(target_locales),
        schema=schema,
        statements=statements,
    )


def project_to_dict(project: Project) -> dict:
    return {
        "id": project.id,
        "source_locale": project.source_locale.code,
        "target_locales": [loc.code for loc in project.target_locales],
        "schema": sorted(project.schema),
        "statements": [
            {
                "id": stmt.id,
                "template": stmt.template_text,
                **({"condition": stmt.condition.source} if stmt.condition else {}),
                "units": {uid: unit_to_dict(u) for uid, u in sorted(stmt.units.items())},
            }
            for stmt in project.statements
        ],
    }


def project_from_dict(data: Mapping) -> Project:
    source = locale_by_code(data["source_locale"])
    statements = []
    for raw in data["statements"]:
        units = {uid: unit_from_dict(u) for uid, u in raw.get("units", {}).items()}
        statements.append(
            build_statement(
                raw["id"], source, raw["template"], units, raw.get("condition")
            )
        )
    return build_project(
        data["id"],
        source,
        [locale_by_code(c) for c in data.get("target_locales", [])],
        data.get("schema", []),
        statements,
    )


def load_project(path: str | Path) -> Project:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProjectError(f"{path}: bad JSON: {exc}") from None
    return project_from_dict(data)


def save_project(project: Project, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(project_to_dict(project), fh, ensure_ascii=False, indent=2)
        fh.write("\n")

"""Document planning and rendering: pick statements, bind data, realize."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Mapping, Optional

from .grammar import GrammarUnit, apply_overrides
from .realize import RealizationContext, RealizationError, realize_unit
from .templates import (
    DataRecord,
    DataSlot,
    Literal,
    Project,
    StatementTemplate,
    UnitRef,
)


class MissingData(KeyError):
    def __init__(self, name: str, statement_id: str):
        super().__init__(name)
        self.field = name
        self.statement_id = statement_id

    def __str__(self) -> str:
        return (
            f"statement {self.statement_id!r}: no data for field {self.field!r}"
        )


class RenderError(Exception):
    """A statement failed to render; carries statement and unit context."""

    def __init__(self, statement_id: str, unit_id: Optional[str], cause: Exception):
        where = f" (unit {unit_id!r})" if unit_id else ""
        super().__init__(f"statement {statement_id!r}{where}: {cause}")
        self.statement_id = statement_id
        self.unit_id = unit_id
        self.cause = cause


_EN_MONTHS = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)
_DE_MONTHS = (
    "Januar", "Februar", "März", "April", "Mai", "Juni", "Juli",
    "August", "September", "Oktober", "November", "Dezember",
)


def format_date_long(value: str, locale_code: str) -> str:
    """Locale-patterned long date for an ISO-8601 date string."""
    d = date.fromisoformat(value)
    if locale_code == "en-US":
        return f"{_EN_MONTHS[d.month - 1]} {d.day}, {d.year}"
    if locale_code == "de-DE":
        return f"{d.day:02d}. {_DE_MONTHS[d.month - 1]} {d.year}"
    return d.isoformat()


def format_slot_value(value: object, fmt: Optional[str], locale_code: str) -> str:
    if fmt == "integer":
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"integer format needs an integer, got {value!r}")
        return str(value)
    if fmt == "date-long":
        if not isinstance(value, str):
            raise TypeError(f"date-long format needs an ISO date string, got {value!r}")
        return format_date_long(value, locale_code)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def select_statements(project: Project, data: DataRecord) -> list[StatementTemplate]:
    """Statements whose condition is absent or true, in project order."""
    selected = []
    for stmt in project.statements:
        if stmt.condition is None or stmt.condition.evaluate(data.fields):
            selected.append(stmt)
    return selected


def effective_unit(stmt: StatementTemplate, ref: UnitRef) -> GrammarUnit:
    """The declared unit with the reference's overrides applied."""
    return apply_overrides(stmt.units[ref.unit_id], ref.overrides_dict())


@dataclass(frozen=True)
class RenderedStatement:
    statement_id: str
    text: str
    spans: Mapping[str, tuple[int, int]]
    units: Mapping[str, GrammarUnit]


def render_statement(stmt: StatementTemplate, data: DataRecord,
                     ctx: RealizationContext) -> RenderedStatement:
    """Concatenate literals, formatted slots, and realized units.

    Returns the text plus the exact character span each unit occupies;
    slicing the text at a span yields exactly that unit's realization.
    """
    parts: list[str] = []
    spans: dict[str, tuple[int, int]] = {}
    units: dict[str, GrammarUnit] = {}
    length = 0
    for seg in stmt.segments:
        if isinstance(seg, Literal):
            chunk = seg.text
        elif isinstance(seg, DataSlot):
            if seg.field not in data.fields:
                raise MissingData(seg.field, stmt.id)
            try:
                chunk = format_slot_value(
                    data.fields[seg.field], seg.format, stmt.locale.code
                )
            except (TypeError, ValueError) as exc:
                raise RenderError(stmt.id, None, exc) from exc
        else:
            try:
                unit = effective_unit(stmt, seg)
                count: Optional[int] = None
                if unit.agreement_source is not None:
                    if unit.agreement_source not in data.fields:
                        raise MissingData(unit.agreement_source, stmt.id)
                    bound = data.fields[unit.agreement_source]
                    if isinstance(bound, bool) or not isinstance(bound, int):
                        raise RenderError(
                            stmt.id, seg.unit_id,
                            TypeError(f"agreement value must be an integer, "
                                      f"got {bound!r}"),
                        )
                    count = bound
                chunk = realize_unit(unit, ctx, count)
            except MissingData:
                raise
            except RenderError:
                raise
            except (RealizationError, ValueError) as exc:
                raise RenderError(stmt.id, seg.unit_id, exc) from exc
            spans[seg.unit_id] = (length, length + len(chunk))
            units[seg.unit_id] = unit
        parts.append(chunk)
        length += len(chunk)
    return RenderedStatement(
        statement_id=stmt.id, text="".join(parts), spans=spans, units=units
    )


def render_document(project: Project, data: DataRecord,
                    ctx: RealizationContext) -> list[RenderedStatement]:
    """Select and render every applicable statement for one record."""
    return [render_statement(s, data, ctx) for s in select_statements(project, data)]

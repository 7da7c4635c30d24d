"""Review service: the HTTP backend for the post-edit workflow.

Sessions pair an auto-translated target project with its source project;
each statement is reviewable side by side and can be regenerated in four
data variants. Every accepted unit edit is classified and appended to the
edit log. Revising earlier statements is always allowed; nothing enforces
a forward-only order.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .grammar import (
    GrammarUnit,
    IllegalFeatures,
    Locale,
    unit_to_dict,
)
from .lexicon import Lexicon, load_lexicon
from .manifest import build_manifest
from .planner import RenderError, render_statement
from .postedit import (
    ChangeRecord,
    ConflictingInput,
    append_record,
    build_change_record,
)
from .realize import RealizationError, default_context
from .templates import (
    DataRecord,
    Literal,
    Project,
    StatementTemplate,
    load_project,
    load_records,
)

VARIANTS_PER_STATEMENT = 4


@dataclass
class ServiceConfig:
    source_project: Path
    target_project: Path
    data: Path
    lexicons: Path
    edit_log: Path
    sessions_dir: Path

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        path = Path(path)
        raw = _read_config(path)
        base = path.parent

        def resolve(key: str) -> Path:
            p = Path(raw[key])
            return p if p.is_absolute() else base / p

        return cls(
            source_project=resolve("source_project"),
            target_project=resolve("target_project"),
            data=resolve("data"),
            lexicons=resolve("lexicons"),
            edit_log=resolve("edit_log"),
            sessions_dir=resolve("sessions_dir"),
        )


def _read_config(path: Path) -> dict:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        import tomllib

        return tomllib.loads(text)
    return json.loads(text)


@dataclass
class StatementState:
    template: StatementTemplate
    units: dict[str, GrammarUnit]
    versions: dict[str, int]
    edit_count: int = 0

    def current_template(self) -> StatementTemplate:
        return replace(self.template, units=dict(self.units))


@dataclass
class Session:
    session_id: str
    project_id: str
    participant_id: str
    target_locale: Locale
    statements: dict[str, StatementState]
    order: list[str]
    variants: list[DataRecord]
    completed: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


class ReviewService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.source_project: Project = load_project(config.source_project)
        self.target_project: Project = load_project(config.target_project)
        records = load_records(config.data)
        if len(records) < VARIANTS_PER_STATEMENT:
            raise ValueError(
                f"need at least {VARIANTS_PER_STATEMENT} data records for "
                f"review variants, found {len(records)}"
            )
        self.variants = records[:VARIANTS_PER_STATEMENT]
        self.source_ctx = self._context(self.source_project.source_locale)
        self.target_ctx = self._context(self.target_project.source_locale)
        self.sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()
        config.sessions_dir.mkdir(parents=True, exist_ok=True)
        config.edit_log.parent.mkdir(parents=True, exist_ok=True)

    def _context(self, locale: Locale):
        lexicon_path = self.config.lexicons / f"{locale.code}.json"
        lexicon = Lexicon(load_lexicon(lexicon_path)) if lexicon_path.exists() \
            else Lexicon()
        return default_context(locale, lexicon)

    # -- session lifecycle --------------------------------------------------

    def create_session(self, participant_id: str) -> Session:
        session_id = uuid.uuid4().hex[:12]
        statements: dict[str, StatementState] = {}
        order: list[str] = []
        for stmt in self.target_project.statements:
            statements[stmt.id] = StatementState(
                template=stmt,
                units=dict(stmt.units),
                versions={uid: 1 for uid in stmt.units},
            )
            order.append(stmt.id)
        session = Session(
            session_id=session_id,
            project_id=self.source_project.id,
            participant_id=participant_id,
            target_locale=self.target_project.source_locale,
            statements=statements,
            order=order,
            variants=list(self.variants),
        )
        with self._sessions_lock:
            self.sessions[session_id] = session
        self._persist(session)
        return session

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def _persist(self, session: Session) -> None:
        payload = {
            "session_id": session.session_id,
            "project_id": session.project_id,
            "participant_id": session.participant_id,
            "target_locale": session.target_locale.code,
            "completed": session.completed,
            "statements": {
                sid: {
                    "units": {uid: unit_to_dict(u) for uid, u in state.units.items()},
                    "versions": dict(state.versions),
                    "edit_count": state.edit_count,
                }
                for sid, state in session.statements.items()
            },
        }
        path = self.config.sessions_dir / f"{session.session_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8"
        )
        tmp.replace(path)

    # -- rendering ------------------------------------------------------------

    def _render_variants(self, state: StatementState) -> list[dict]:
        template = state.current_template()
        rendered = []
        for record in self.variants:
            result = render_statement(template, record, self.target_ctx)
            rendered.append(
                {
                    "record": record.provenance,
                    "text": result.text,
                    "spans": {uid: list(span) for uid, span in sorted(result.spans.items())},
                }
            )
        return rendered

    def statement_payload(self, session: Session, statement_id: str) -> dict:
        state = session.statements[statement_id]
        source_stmt = next(
            (s for s in self.source_project.statements if s.id == statement_id), None
        )
        source_text = ""
        if source_stmt is not None:
            source_text = render_statement(
                source_stmt, self.variants[0], self.source_ctx
            ).text
        variants = self._render_variants(state)
        return {
            "statement_id": statement_id,
            "source_text": source_text,
            "target_text": variants[0]["text"],
            "target_spans": variants[0]["spans"],
            "variants": variants,
            "units": {
                uid: {
                    "unit": unit_to_dict(unit),
                    "version": state.versions[uid],
                }
                for uid, unit in sorted(state.units.items())
            },
            "edit_count": state.edit_count,
        }

    # -- edits ----------------------------------------------------------------

    def patch_unit(self, session: Session, unit_id: str,
                   overrides: Mapping[str, object], version: int) -> dict:
        statement_id = None
        for sid in session.order:
            if unit_id in session.statements[sid].units:
                statement_id = sid
                break
        if statement_id is None:
            raise HTTPException(status_code=404, detail=f"unknown unit {unit_id!r}")
        with session.lock:
            state = session.statements[statement_id]
            current_version = state.versions[unit_id]
            if version != current_version:
                raise HTTPException(
                    status_code=409,
                    detail={
                        "message": "stale unit version",
                        "current_version": current_version,
                    },
                )
            before = state.units[unit_id]
            try:
                from .grammar import apply_overrides

                after = apply_overrides(before, dict(overrides))
            except IllegalFeatures as exc:
                raise HTTPException(
                    status_code=422,
                    detail=[v.message for v in exc.violations],
                ) from exc
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc

            if after == before:
                return {
                    "statement_id": statement_id,
                    "unit": unit_to_dict(before),
                    "version": current_version,
                    "categories": [],
                    "changed": False,
                    "variants": self._render_variants(state),
                }

            before_text = self._unit_text(state, unit_id)
            state.units[unit_id] = after
            try:
                variants = self._render_variants(state)
                after_text = self._unit_text(state, unit_id)
            except (RenderError, RealizationError) as exc:
                state.units[unit_id] = before
                raise HTTPException(status_code=422, detail=str(exc)) from exc

            state.versions[unit_id] = current_version + 1
            state.edit_count += 1
            try:
                record = build_change_record(
                    session_id=session.session_id,
                    participant_id=session.participant_id,
                    locale=session.target_locale.code,
                    unit_id=unit_id,
                    before=before,
                    after=after,
                    before_text=before_text,
                    after_text=after_text,
                )
            except ConflictingInput as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            append_record(self.config.edit_log, record)
            self._persist(session)
            return {
                "statement_id": statement_id,
                "unit": unit_to_dict(after),
                "version": state.versions[unit_id],
                "categories": sorted(c.value for c in record.categories),
                "changed": True,
                "variants": variants,
            }

    def _unit_text(self, state: StatementState, unit_id: str) -> Optional[str]:
        result = render_statement(
            state.current_template(), self.variants[0], self.target_ctx
        )
        span = result.spans.get(unit_id)
        return result.text[span[0]:span[1]] if span else None

    def patch_statement_text(self, session: Session, statement_id: str,
                             literal_index: int, text: str) -> dict:
        if statement_id not in session.statements:
            raise HTTPException(status_code=404, detail="unknown statement")
        with session.lock:
            state = session.statements[statement_id]
            literals = [
                i for i, seg in enumerate(state.template.segments)
                if isinstance(seg, Literal)
            ]
            if literal_index < 0 or literal_index >= len(literals):
                raise HTTPException(status_code=404, detail="unknown literal index")
            seg_index = literals[literal_index]
            old = state.template.segments[seg_index]
            if old.text == text:
                return {
                    "statement_id": statement_id,
                    "changed": False,
                    "variants": self._render_variants(state),
                }
            segments = list(state.template.segments)
            segments[seg_index] = Literal(text)
            state.template = replace(state.template, segments=tuple(segments))
            state.edit_count += 1
            # Free-text edits carry no grammatical category; they are kept
            # in the log but excluded from the change table.
            record = ChangeRecord(
                session_id=session.session_id,
                participant_id=session.participant_id,
                locale=session.target_locale.code,
                unit_id=f"text:{statement_id}",
                categories=frozenset(),
                timestamp=_now(),
            )
            append_record(self.config.edit_log, record)
            self._persist(session)
            return {
                "statement_id": statement_id,
                "changed": True,
                "variants": self._render_variants(state),
            }

    def complete(self, session: Session) -> dict:
        with session.lock:
            session.completed = True
            self._persist(session)
        return {"session_id": session.session_id, "completed": True}

    def report(self, session: Session) -> dict:
        per_statement = {
            sid: session.statements[sid].edit_count for sid in session.order
        }
        total = sum(per_statement.values())
        unit_total = sum(len(s.units) for s in session.statements.values())
        return {
            "session_id": session.session_id,
            "participant_id": session.participant_id,
            "completed": session.completed,
            "total_changes": total,
            "per_statement": per_statement,
            "unit_total": unit_total,
        }


def _now() -> str:
    from datetime import datetime, timezone

    return datetime.now(timezone.utc).isoformat()


# --- FastAPI wiring ----------------------------------------------------------


class CreateSessionBody(BaseModel):
    participant_id: str


class PatchUnitBody(BaseModel):
    features: dict
    version: int


class PatchStatementBody(BaseModel):
    literal_index: int
    text: str


def create_app(config: ServiceConfig) -> FastAPI:
    service = ReviewService(config)
    app = FastAPI(title="gramtrans review service")
    app.state.service = service

    @app.get("/legality")
    def legality() -> dict:
        return build_manifest()

    @app.post("/sessions")
    def create_session(body: CreateSessionBody) -> dict:
        session = service.create_session(body.participant_id)
        return {
            "session_id": session.session_id,
            "project_id": session.project_id,
            "participant_id": session.participant_id,
            "target_locale": session.target_locale.code,
            "statement_ids": list(session.order),
        }

    @app.get("/sessions/{session_id}/statements")
    def get_statements(session_id: str) -> list[dict]:
        session = service.get_session(session_id)
        return [
            service.statement_payload(session, sid) for sid in session.order
        ]

    @app.patch("/sessions/{session_id}/units/{unit_id}")
    def patch_unit(session_id: str, unit_id: str, body: PatchUnitBody) -> dict:
        session = service.get_session(session_id)
        return service.patch_unit(session, unit_id, body.features, body.version)

    @app.patch("/sessions/{session_id}/statements/{statement_id}")
    def patch_statement(session_id: str, statement_id: str,
                        body: PatchStatementBody) -> dict:
        session = service.get_session(session_id)
        return service.patch_statement_text(
            session, statement_id, body.literal_index, body.text
        )

    @app.post("/sessions/{session_id}/complete")
    def complete(session_id: str) -> dict:
        session = service.get_session(session_id)
        return service.complete(session)

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str) -> dict:
        session = service.get_session(session_id)
        return service.report(session)

    return app

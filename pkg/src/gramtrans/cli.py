"""Command line: generate | translate | analyze | serve | manifest.

All outputs are reproducible: equal inputs give byte-identical files.
Timestamps exist only inside the append-only edit log.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from .backends import BackendError, backend_from_config
from .conllu import ConlluError, FixtureParseProvider
from .grammar import locale_by_code, UnknownLocale as BadLocaleCode
from .lexicon import Lexicon, LexiconError, load_lexicon
from .manifest import build_manifest
from .planner import MissingData, RenderError, render_statement, select_statements
from .postedit import (
    EditLogError,
    UnknownLocale,
    aggregate_changes,
    changed_unit_fractions,
    load_edit_log,
    match_units,
    per_participant_counts,
)
from .realize import default_context
from .reports import (
    format_percent,
    fraction_dict,
    render_change_matrix_figure,
    render_participant_figure,
    write_change_table_csv,
    write_participant_csv,
)
from .templates import (
    ProjectError,
    UnknownField,
    load_project,
    load_records,
    save_project,
)
from .transfer import Gazetteer, TransferError, transfer_project
from .grammar import unit_from_dict

BACKEND_URL_ENV = "GRAMTRANS_BACKEND_URL"


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _context_for(locale_code: str, lexicons_dir: Optional[str]):
    locale = locale_by_code(locale_code)
    entries = []
    if lexicons_dir:
        path = Path(lexicons_dir) / f"{locale_code}.json"
        if path.exists():
            entries = load_lexicon(path)
    return default_context(locale, Lexicon(entries))


def _read_config_file(path: Path) -> dict:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        import tomllib

        return tomllib.loads(text)
    return json.loads(text)


@click.group()
def main() -> None:
    """Multilingual data-to-text with transferable grammar units."""


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--locale", "locale_code", default=None,
              help="Render locale; defaults to the project's source locale.")
@click.option("--lexicons", "lexicons_dir", default=None,
              type=click.Path(file_okay=False),
              help="Directory with <locale>.json lexicon files.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def generate(project_path: str, data_path: str, locale_code: Optional[str],
             lexicons_dir: Optional[str], out_path: str) -> None:
    """Render every data record to text plus unit span maps."""
    try:
        project = load_project(project_path)
        records = load_records(data_path)
    except (ProjectError, OSError) as exc:
        _fail(str(exc))
    if locale_code is None:
        locale_code = project.source_locale.code
    if locale_code != project.source_locale.code:
        _fail(f"project is authored in {project.source_locale.code}, "
              f"not {locale_code}")
    try:
        ctx = _context_for(locale_code, lexicons_dir)
    except (BadLocaleCode, LexiconError, OSError) as exc:
        _fail(str(exc))

    documents = []
    for record in records:
        extra = set(record.fields) - set(project.schema)
        if extra:
            _fail(f"record {record.provenance}: fields not in schema: "
                  f"{', '.join(sorted(extra))}")
        try:
            statements = select_statements(project, record)
            rendered = [render_statement(s, record, ctx) for s in statements]
        except (UnknownField, MissingData, RenderError) as exc:
            _fail(f"record {record.provenance}: {exc}")
        documents.append(
            {
                "record": record.provenance,
                "statements": [
                    {
                        "statement_id": r.statement_id,
                        "text": r.text,
                        "spans": {u: list(s) for u, s in sorted(r.spans.items())},
                    }
                    for r in rendered
                ],
            }
        )
    payload = {"project": project.id, "locale": locale_code, "documents": documents}
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    click.echo(f"wrote {len(documents)} document(s) to {out_path}")


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Data records; the first record binds the source render.")
@click.option("--locale", "locale_code", required=True,
              help="Target locale code.")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Backend/gazetteer configuration (JSON or TOML).")
@click.option("--parses", "parses_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="CoNLL-U fragments keyed by '# unit_id =' comments.")
@click.option("--lexicons", "lexicons_dir", default=None,
              type=click.Path(file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--report", "report_path", default=None,
              type=click.Path(dir_okay=False),
              help="Transfer report path (default: <out>.report.json).")
def translate(project_path: str, data_path: str, locale_code: str,
              config_path: str, parses_path: str, lexicons_dir: Optional[str],
              out_path: str, report_path: Optional[str]) -> None:
    """Transfer a project's statements and units into a target locale."""
    try:
        project = load_project(project_path)
        records = load_records(data_path)
        target_locale = locale_by_code(locale_code)
    except (ProjectError, BadLocaleCode, OSError) as exc:
        _fail(str(exc))
    if not records:
        _fail("data file holds no records; transfer needs one to render")
    config_file = Path(config_path)
    try:
        config = _read_config_file(config_file)
        backend = backend_from_config(
            config.get("backend", {}),
            base_dir=config_file.parent,
            url_override=os.environ.get(BACKEND_URL_ENV),
        )
    except (ValueError, OSError, KeyError) as exc:
        _fail(f"bad backend config: {exc}")
    gazetteer = None
    if config.get("gazetteer"):
        gaz_path = Path(config["gazetteer"])
        if not gaz_path.is_absolute():
            gaz_path = config_file.parent / gaz_path
        try:
            gazetteer = Gazetteer.from_file(gaz_path)
        except OSError as exc:
            _fail(f"cannot read gazetteer: {exc}")
    try:
        ctx = _context_for(project.source_locale.code, lexicons_dir)
        parses = FixtureParseProvider.from_file(parses_path, target_locale)
    except (LexiconError, ConlluError, OSError) as exc:
        _fail(str(exc))

    try:
        result = transfer_project(
            project, records[0], ctx, backend, parses, target_locale, gazetteer
        )
    except (TransferError, BackendError, MissingData, RenderError,
            UnknownField) as exc:
        _fail(str(exc))

    out_file = Path(out_path)
    out_file.parent.mkdir(parents=True, exist_ok=True)
    save_project(result.project, out_file)
    report_file = Path(report_path) if report_path else \
        out_file.with_name(out_file.name + ".report.json")
    with open(report_file, "w", encoding="utf-8") as fh:
        json.dump(result.report_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    click.echo(
        f"wrote target project to {out_file} "
        f"({result.report_dict()['lost_total']} lost, "
        f"{result.report_dict()['failure_total']} failed)"
    )


@main.command()
@click.option("--log", "log_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Append-only JSONL edit log.")
@click.option("--units", "units_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file with unit_totals (and optional sessions/match data).")
@click.option("--out-dir", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--include-incomplete", is_flag=True, default=False,
              help="Keep records from sessions marked incomplete.")
def analyze(log_path: str, units_path: str, out_dir: str,
            include_incomplete: bool) -> None:
    """Aggregate the edit log into CSV tables, figures, and a summary."""
    try:
        records = load_edit_log(log_path)
    except EditLogError as exc:
        _fail(str(exc))
    try:
        with open(units_path, encoding="utf-8") as fh:
            units_doc = json.load(fh)
        unit_totals = {k: int(v) for k, v in units_doc["unit_totals"].items()}
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _fail(f"bad units file: {exc}")

    sessions_meta = units_doc.get("sessions", {})
    included = []
    for record in records:
        meta = sessions_meta.get(record.session_id)
        if meta is not None and meta.get("completed") is False \
                and not include_incomplete:
            continue
        included.append(record)
    tabular = [r for r in included if r.categories]

    try:
        table = aggregate_changes(tabular, unit_totals)
        fractions = changed_unit_fractions(included, unit_totals)
    except (UnknownLocale, ValueError) as exc:
        _fail(str(exc))
    counts = per_participant_counts(included)

    match_rate = None
    if units_doc.get("match"):
        pair_count = 0
        unit_count = 0
        for entry in units_doc["match"]:
            auto = [unit_from_dict(u) for u in entry["auto"]]
            edited = [unit_from_dict(u) for u in entry["edited"]]
            result = match_units(auto, edited)
            pair_count += len(result.pairs)
            unit_count += len(auto) + len(edited)
        match_rate = Fraction(1) if unit_count == 0 \
            else Fraction(2 * pair_count, unit_count)

    mean_changed = (
        sum(fractions.values(), Fraction(0)) / len(fractions)
        if fractions else Fraction(0)
    )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_change_table_csv(table, out / "changes.csv")
    write_participant_csv(counts, out / "participants.csv")
    render_participant_figure(counts, out / "participants.png")
    render_change_matrix_figure(table, out / "changes.png")
    summary = {
        "records_total": len(records),
        "records_included": len(included),
        "records_tabular": len(tabular),
        "changed_fraction": {
            loc: fraction_dict(frac) for loc, frac in fractions.items()
        },
        "mean_changed_fraction": fraction_dict(mean_changed),
        "mean_changed_percent": format_percent(mean_changed),
        "match_rate": fraction_dict(match_rate) if match_rate is not None else None,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    click.echo(
        f"analyzed {len(included)} record(s); mean changed fraction "
        f"{summary['mean_changed_percent']}"
    )


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8040, type=int)
def serve(config_path: str, host: str, port: int) -> None:
    """Run the review service over a source/target project pair."""
    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig.from_file(config_path)
        app = create_app(config)
    except (OSError, ValueError, KeyError) as exc:
        _fail(f"cannot start service: {exc}")
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def manifest(out_path: str) -> None:
    """Export the validator's legality manifest for UI form building."""
    payload = build_manifest()
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    click.echo(f"wrote legality manifest to {out_path}")


if __name__ == "__main__":
    main()

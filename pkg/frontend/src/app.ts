/**
 * Browser entry point: wires the API client, statement views, and edit
 * forms into the DOM. All state is authoritative on the server; this file
 * is presentation only and is exercised manually against `gramtrans serve`.
 */

import { ReviewApi } from "./api.js";
import { buildFormModel, buildPatch, setField } from "./forms.js";
import { sessionProgress } from "./progress.js";
import {
  StatementView,
  buildView,
  highlightSegments,
  submitUnitEdit,
} from "./view.js";

const api = new ReviewApi("");
let sessionId = "";
let views: StatementView[] = [];
const reviewed = new Set<string>();

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function start(participantId: string): Promise<void> {
  const session = await api.createSession(participantId);
  sessionId = session.session_id;
  const payloads = await api.getStatements(sessionId);
  views = payloads.map(buildView);
  render();
}

function render(): void {
  const root = document.getElementById("app");
  if (!root) return;
  root.replaceChildren();
  root.appendChild(renderProgress());
  for (const view of views) root.appendChild(renderStatement(view));
  const done = el("button", "complete", "Finish review");
  done.addEventListener("click", () => {
    void api.completeSession(sessionId).then(() => render());
  });
  root.appendChild(done);
}

function renderProgress(): HTMLElement {
  const progress = sessionProgress(views, reviewed);
  const bar = el("div", "progress");
  bar.appendChild(el("span", "total", `${progress.totalEdits} edits`));
  for (const stmt of progress.statements) {
    bar.appendChild(
      el("span", stmt.reviewed ? "stmt reviewed" : "stmt",
         `${stmt.statementId}:${stmt.editCount}`),
    );
  }
  return bar;
}

function renderStatement(view: StatementView): HTMLElement {
  const row = el("section", "statement");
  const pair = el("div", "pair");
  pair.appendChild(el("p", "source", view.sourceText));
  const target = el("p", "target");
  for (const segment of highlightSegments(view)) {
    const span = el(
      "span",
      segment.unitId === null
        ? "plain"
        : segment.changed ? "unit changed" : "unit",
      segment.text,
    );
    target.appendChild(span);
  }
  pair.appendChild(target);
  row.appendChild(pair);

  const variants = el("div", "variants");
  for (const variant of view.variants) {
    variants.appendChild(el("p", "variant", variant.text));
  }
  row.appendChild(variants);

  for (const [unitId, state] of Object.entries(view.units)) {
    row.appendChild(renderUnitForm(view, unitId, state.version));
  }
  for (const badge of view.badges) {
    row.appendChild(el("span", "badge",
                       `${badge.unitId}: ${badge.categories.join(", ")}`));
  }
  if (view.conflict) {
    row.appendChild(el("p", "conflict",
                       `edit rejected (${view.conflict.status}); reload or adjust`));
  }
  return row;
}

function renderUnitForm(view: StatementView, unitId: string,
                        version: number): HTMLElement {
  const state = view.units[unitId];
  if (state === undefined) return el("div");
  const model = buildFormModel(state.unit, version);
  const form = el("form", "unit-form");
  form.appendChild(el("strong", "unit-id", unitId));
  for (const field of model.fields) {
    const label = el("label", "field", `${field.name} `);
    if (field.kind === "enum") {
      const select = el("select");
      const empty = el("option", undefined, "(unset)");
      empty.value = "";
      select.appendChild(empty);
      for (const option of field.options) {
        const node = el("option", undefined, option);
        node.value = option;
        select.appendChild(node);
      }
      select.value = field.value ?? "";
      select.addEventListener("change", () => {
        setField(model, field.name, select.value === "" ? null : select.value);
      });
      label.appendChild(select);
    } else {
      const input = el("input");
      input.value = field.value ?? "";
      input.addEventListener("change", () => {
        setField(model, field.name, input.value === "" ? null : input.value);
      });
      label.appendChild(input);
    }
    form.appendChild(label);
  }
  const submit = el("button", "apply", "Apply");
  submit.addEventListener("click", (event) => {
    event.preventDefault();
    const patch = buildPatch(model);
    if (patch === null) return; // untouched form sends nothing
    void submitUnitEdit(view, api, sessionId, unitId, patch).then(() => {
      reviewed.add(view.statementId);
      render();
    });
  });
  form.appendChild(submit);
  return form;
}

const startButton = document.getElementById("start");
startButton?.addEventListener("click", () => {
  const input = document.getElementById("participant") as HTMLInputElement | null;
  void start(input?.value || "anonymous");
});

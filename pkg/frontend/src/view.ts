/**
 * Statement view state for the side-by-side review screen.
 *
 * Edits are optimistic: the pending change shows immediately, the PATCH
 * runs in the background, and a 409/422 reverts the view while keeping
 * the reviewer's form input intact for reconciliation.
 */

import { ApiError, ReviewApi } from "./api.js";
import type {
  PatchUnitResponse,
  StatementPayload,
  VariantText,
} from "./types.js";

export interface EditBadge {
  unitId: string;
  categories: string[];
}

export interface StatementView {
  statementId: string;
  sourceText: string;
  targetText: string;
  targetSpans: Record<string, [number, number]>;
  variants: VariantText[];
  units: StatementPayload["units"];
  editCount: number;
  badges: EditBadge[];
  changedUnitIds: Set<string>;
  /** last rejected edit, surfaced inline without losing form state */
  conflict: { unitId: string; status: number; detail: unknown } | null;
}

export function buildView(payload: StatementPayload): StatementView {
  return {
    statementId: payload.statement_id,
    sourceText: payload.source_text,
    targetText: payload.target_text,
    targetSpans: payload.target_spans,
    variants: payload.variants,
    units: payload.units,
    editCount: payload.edit_count,
    badges: [],
    changedUnitIds: new Set(),
    conflict: null,
  };
}

export function applyPatchResponse(
  view: StatementView,
  response: PatchUnitResponse,
): void {
  const unitId = response.unit.id;
  view.units[unitId] = { unit: response.unit, version: response.version };
  view.variants = response.variants;
  const first = response.variants[0];
  if (first !== undefined) {
    view.targetText = first.text;
    view.targetSpans = first.spans;
  }
  if (response.changed) {
    view.editCount += 1;
    view.changedUnitIds.add(unitId);
    view.badges.push({ unitId, categories: response.categories });
  }
  view.conflict = null;
}

/**
 * Submit one unit edit. Returns the response on success; on rejection the
 * view keeps its server state, records the conflict, and returns null.
 */
export async function submitUnitEdit(
  view: StatementView,
  api: ReviewApi,
  sessionId: string,
  unitId: string,
  patch: Record<string, unknown> | null,
): Promise<PatchUnitResponse | null> {
  if (patch === null) return null; // untouched form: no request
  const state = view.units[unitId];
  if (state === undefined) throw new Error(`unknown unit ${unitId}`);
  try {
    const response = await api.patchUnit(sessionId, unitId, patch, state.version);
    applyPatchResponse(view, response);
    return response;
  } catch (error) {
    if (error instanceof ApiError && (error.status === 409 || error.status === 422)) {
      view.conflict = { unitId, status: error.status, detail: error.detail };
      return null;
    }
    throw error;
  }
}

/** Highlighted segments of the target text, in order. */
export function highlightSegments(
  view: StatementView,
): { text: string; unitId: string | null; changed: boolean }[] {
  const spans = Object.entries(view.targetSpans)
    .map(([unitId, [start, end]]) => ({ unitId, start, end }))
    .sort((a, b) => a.start - b.start);
  const out: { text: string; unitId: string | null; changed: boolean }[] = [];
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) {
      out.push({
        text: view.targetText.slice(cursor, span.start),
        unitId: null,
        changed: false,
      });
    }
    out.push({
      text: view.targetText.slice(span.start, span.end),
      unitId: span.unitId,
      changed: view.changedUnitIds.has(span.unitId),
    });
    cursor = span.end;
  }
  if (cursor < view.targetText.length) {
    out.push({ text: view.targetText.slice(cursor), unitId: null, changed: false });
  }
  return out;
}

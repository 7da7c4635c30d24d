/**
 * Statement-view behavior against a stub of the documented REST API: the
 * stub keeps unit versions and an append-only edit log exactly like the
 * service, so the round-trip semantics are exercised end to end.
 */

import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { buildFormModel, buildPatch, setField } from "../src/forms.js";
import { buildView, highlightSegments, submitUnitEdit } from "../src/view.js";
import type {
  PatchUnitResponse,
  StatementPayload,
  VariantText,
} from "../src/types.js";

interface LoggedRecord {
  unit_id: string;
  categories: string[];
}

function variant(record: string, caseValue: string): VariantText {
  const det = caseValue === "genitive" ? "der" : "die";
  const text = `Im Gegenteil, ${det} Denver Nuggets konnten nicht gewinnen.`;
  const start = "Im Gegenteil, ".length;
  return {
    record,
    text,
    spans: { s6_team: [start, start + `${det} Denver Nuggets`.length] },
  };
}

function payload(caseValue = "genitive"): StatementPayload {
  const variants = ["97", "98", "99", "100"].map((r) => variant(r, caseValue));
  return {
    statement_id: "s6",
    source_text: "On the contrary, the Denver Nuggets were unable to win.",
    target_text: variants[0]!.text,
    target_spans: variants[0]!.spans,
    variants,
    units: {
      s6_team: {
        unit: {
          id: "s6_team",
          locale: "de-DE",
          pos: "noun",
          features: {
            lemma: "Denver Nuggets",
            case: caseValue,
            number: "singular",
            determiner: "definite",
          },
        },
        version: 1,
      },
    },
    edit_count: 0,
  };
}

/** Minimal in-memory stand-in for the review service. */
function stubService() {
  const log: LoggedRecord[] = [];
  let version = 1;
  let currentCase = "genitive";
  const fetchImpl = async (input: string, init?: RequestInit) => {
    const body = init?.body ? JSON.parse(String(init.body)) : {};
    if (!input.includes("/units/")) throw new Error(`unexpected url ${input}`);
    if (body.version !== version) {
      return jsonResponse(409, {
        detail: { message: "stale unit version", current_version: version },
      });
    }
    if ("tense" in body.features) {
      return jsonResponse(422, { detail: ["tense illegal on noun"] });
    }
    const changed = Object.keys(body.features).length > 0;
    const categories: string[] = [];
    if (body.features.case && body.features.case !== currentCase) {
      categories.push("change case");
      currentCase = body.features.case;
    }
    if (changed) {
      version += 1;
      log.push({ unit_id: "s6_team", categories });
    }
    const fresh = payload(currentCase);
    const response: PatchUnitResponse = {
      statement_id: "s6",
      unit: fresh.units["s6_team"]!.unit,
      version,
      categories,
      changed,
      variants: fresh.variants,
    };
    return jsonResponse(200, response);
  };
  return { fetchImpl, log, currentVersion: () => version };
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("edit round-trip", () => {
  it("case genitive->nominative appends one change-case record and swaps all four variants", async () => {
    const service = stubService();
    const api = new ReviewApi("http://service", service.fetchImpl);
    const view = buildView(payload());
    const before = view.variants.map((v) => v.text);

    const model = buildFormModel(view.units["s6_team"]!.unit, 1);
    setField(model, "case", "nominative");
    const patch = buildPatch(model);
    const response = await submitUnitEdit(view, api, "sess", "s6_team", patch);

    expect(response).not.toBeNull();
    expect(service.log).toHaveLength(1);
    expect(service.log[0]!.categories).toEqual(["change case"]);
    expect(view.variants).toHaveLength(4);
    const after = view.variants.map((v) => v.text);
    expect(after).not.toEqual(before);
    for (const text of after) expect(text).toContain("die Denver Nuggets");
    expect(view.editCount).toBe(1);
    expect(view.changedUnitIds.has("s6_team")).toBe(true);
    expect(view.badges).toEqual([
      { unitId: "s6_team", categories: ["change case"] },
    ]);
    expect(view.units["s6_team"]!.version).toBe(2);
  });

  it("an untouched form sends no request", async () => {
    const service = stubService();
    const api = new ReviewApi("http://service", service.fetchImpl);
    const view = buildView(payload());
    const model = buildFormModel(view.units["s6_team"]!.unit, 1);
    const response = await submitUnitEdit(
      view, api, "sess", "s6_team", buildPatch(model),
    );
    expect(response).toBeNull();
    expect(service.log).toHaveLength(0);
  });

  it("409 surfaces inline and keeps view state", async () => {
    const service = stubService();
    const api = new ReviewApi("http://service", service.fetchImpl);
    const view = buildView(payload());
    view.units["s6_team"]!.version = 99; // simulate a stale tab
    const response = await submitUnitEdit(
      view, api, "sess", "s6_team", { case: "nominative" },
    );
    expect(response).toBeNull();
    expect(view.conflict?.status).toBe(409);
    expect(view.editCount).toBe(0);
    expect(service.log).toHaveLength(0);
  });

  it("422 surfaces inline", async () => {
    const service = stubService();
    const api = new ReviewApi("http://service", service.fetchImpl);
    const view = buildView(payload());
    const response = await submitUnitEdit(
      view, api, "sess", "s6_team", { tense: "past" },
    );
    expect(response).toBeNull();
    expect(view.conflict?.status).toBe(422);
  });
});

describe("highlighting", () => {
  it("slices the target text at unit spans", () => {
    const view = buildView(payload());
    const segments = highlightSegments(view);
    const unitSegment = segments.find((s) => s.unitId === "s6_team");
    expect(unitSegment?.text).toBe("der Denver Nuggets");
    expect(segments.map((s) => s.text).join("")).toBe(view.targetText);
  });
});

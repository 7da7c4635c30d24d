import { describe, expect, it } from "vitest";

import { buildFormModel, buildPatch, setField } from "../src/forms.js";
import type { GrammarUnit } from "../src/types.js";

function nugget(): GrammarUnit {
  return {
    id: "s6_team",
    locale: "de-DE",
    pos: "noun",
    features: {
      lemma: "Denver Nuggets",
      case: "genitive",
      number: "singular",
      determiner: "definite",
    },
  };
}

describe("edit form model", () => {
  it("untouched form produces no patch", () => {
    const model = buildFormModel(nugget(), 1);
    expect(buildPatch(model)).toBeNull();
  });

  it("case change produces a minimal patch body", () => {
    const model = buildFormModel(nugget(), 1);
    expect(setField(model, "case", "nominative")).toBe(true);
    expect(buildPatch(model)).toEqual({ case: "nominative" });
  });

  it("illegal values are unreachable", () => {
    const model = buildFormModel(nugget(), 1);
    // vocative is not a de-DE case; tense is not a noun feature
    expect(setField(model, "case", "vocative")).toBe(false);
    expect(setField(model, "tense", "past")).toBe(false);
    expect(buildPatch(model)).toBeNull();
  });

  it("clearing a field patches it to null", () => {
    const model = buildFormModel(nugget(), 1);
    setField(model, "determiner", null);
    expect(buildPatch(model)).toEqual({ determiner: null });
  });

  it("form controls only offer validator-accepted options", () => {
    const model = buildFormModel(nugget(), 1);
    const caseField = model.fields.find((f) => f.name === "case");
    expect(caseField?.options).toEqual([
      "nominative", "genitive", "dative", "accusative",
    ]);
    expect(model.fields.some((f) => f.name === "tense")).toBe(false);
  });

  it("list and numeral values round-trip through text form", () => {
    const unit: GrammarUnit = {
      id: "u",
      locale: "de-DE",
      pos: "noun",
      features: {
        lemma: "Rückpraller",
        adjectives: ["beeindruckend"],
        numerals: { value: 8, numeral_type: "cardinal" },
      },
    };
    const model = buildFormModel(unit, 3);
    expect(buildPatch(model)).toBeNull();
    setField(model, "adjectives", "beeindruckend+stark");
    setField(model, "numerals", "8:ordinal");
    expect(buildPatch(model)).toEqual({
      adjectives: ["beeindruckend", "stark"],
      numerals: { value: 8, numeral_type: "ordinal" },
    });
  });

  it("verb forms expose only verb features", () => {
    const verb: GrammarUnit = {
      id: "s4_won",
      locale: "de-DE",
      pos: "verb",
      features: { lemma: "gewinnen", tense: "past" },
    };
    const names = buildFormModel(verb, 1).fields.map((f) => f.name);
    expect(names).toContain("tense");
    expect(names).toContain("person");
    expect(names).not.toContain("case");
    expect(names).not.toContain("determiner");
  });
});

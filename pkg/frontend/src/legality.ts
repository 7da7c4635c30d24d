/**
 * Client-side mirror of the server's feature legality rules.
 *
 * The edit forms must never offer a value the service validator would
 * reject, so this module re-states the validator's accepted sets and the
 * contract test pins it against the generated legality manifest.
 */

import type { FeatureSpec, PartOfSpeech } from "./types.js";

export const CASE_VALUES = [
  "nominative", "genitive", "dative", "accusative",
  "locative", "instrumental", "vocative",
] as const;
export const NUMBER_VALUES = ["singular", "dual", "plural"] as const;
export const TENSE_VALUES = ["past", "present", "future"] as const;
export const PERSON_VALUES = ["first", "second", "third"] as const;
export const GENDER_VALUES = [
  "masculine", "feminine", "neuter", "common",
] as const;
export const DETERMINER_VALUES = ["definite", "indefinite", "none"] as const;
export const PRONOUN_TYPE_VALUES = [
  "personal", "possessive", "demonstrative", "relative", "interrogative",
] as const;
export const NUMERAL_TYPES = ["cardinal", "ordinal"] as const;

export const LOCALES = [
  "de-DE", "en-US", "es-ES", "fr-FR", "pl-PL", "pt-BR", "sl-SI", "zh-CN",
] as const;

export const POS_VALUES: PartOfSpeech[] = ["noun", "pronoun", "verb"];

/** Case values each locale's grammar distinguishes. */
const LOCALE_CASES: Record<string, readonly string[]> = {
  "en-US": ["nominative", "genitive", "accusative"],
  "de-DE": ["nominative", "genitive", "dative", "accusative"],
  "es-ES": ["nominative", "genitive", "dative", "accusative"],
  "fr-FR": ["nominative", "genitive", "dative", "accusative"],
  "pt-BR": ["nominative", "genitive", "dative", "accusative"],
  "pl-PL": [...CASE_VALUES],
  "sl-SI": CASE_VALUES.filter((c) => c !== "vocative"),
  "zh-CN": [],
};

const NOMINAL: PartOfSpeech[] = ["noun", "pronoun"];
const ALL: PartOfSpeech[] = ["noun", "pronoun", "verb"];

/** Feature -> parts of speech it is legal on. */
const FEATURE_POS: Record<string, PartOfSpeech[]> = {
  case: NOMINAL,
  number: ALL,
  tense: ["verb"],
  person: ["verb"],
  gender: ALL,
  preposition: NOMINAL,
  adjectives: ["noun"],
  numerals: ["noun"],
  conjunctions: ["noun"],
  determiner: ["noun"],
  pronoun_type: ["pronoun"],
  head_index: ["noun"],
};

const ENUM_VALUES: Record<string, readonly string[]> = {
  case: CASE_VALUES,
  number: NUMBER_VALUES,
  tense: TENSE_VALUES,
  person: PERSON_VALUES,
  gender: GENDER_VALUES,
  determiner: DETERMINER_VALUES,
  pronoun_type: PRONOUN_TYPE_VALUES,
};

export function featureLegalFor(feature: string, pos: PartOfSpeech): boolean {
  const allowed = FEATURE_POS[feature];
  return allowed !== undefined && allowed.includes(pos);
}

/**
 * Values the edit form may offer for one enum feature, matching exactly
 * what the server validator accepts for (locale, pos).
 */
export function selectableValues(
  locale: string,
  pos: PartOfSpeech,
  feature: string,
): string[] {
  if (!featureLegalFor(feature, pos)) return [];
  const inventory = ENUM_VALUES[feature];
  if (inventory === undefined) return [];
  if (feature === "case") {
    const subset = LOCALE_CASES[locale];
    if (subset === undefined) return [];
    return inventory.filter((v) => subset.includes(v));
  }
  return [...inventory];
}

/** Full per-(locale, pos) feature spec, same shape as the manifest. */
export function legalFeatures(
  locale: string,
  pos: PartOfSpeech,
): Record<string, FeatureSpec> {
  const out: Record<string, FeatureSpec> = {};
  for (const feature of Object.keys(ENUM_VALUES)) {
    const values = selectableValues(locale, pos, feature);
    if (values.length > 0) out[feature] = { kind: "enum", values };
  }
  if (featureLegalFor("preposition", pos)) out["preposition"] = { kind: "text" };
  if (featureLegalFor("adjectives", pos)) out["adjectives"] = { kind: "list" };
  if (featureLegalFor("conjunctions", pos)) out["conjunctions"] = { kind: "list" };
  if (featureLegalFor("numerals", pos)) {
    out["numerals"] = { kind: "numeral", types: [...NUMERAL_TYPES] };
  }
  if (featureLegalFor("head_index", pos)) out["head_index"] = { kind: "integer" };
  return out;
}

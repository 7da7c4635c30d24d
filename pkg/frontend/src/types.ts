/** Shared shapes of the review service's JSON API. */

export type PartOfSpeech = "noun" | "pronoun" | "verb";

export interface NumeralValue {
  value: number;
  numeral_type: "cardinal" | "ordinal";
}

/** One grammar unit as serialized by the service (absent = unset). */
export interface FeatureValues {
  lemma: string;
  case?: string;
  number?: string;
  tense?: string;
  person?: string;
  gender?: string;
  preposition?: string;
  adjectives?: string[];
  numerals?: NumeralValue;
  conjunctions?: string[];
  determiner?: string;
  pronoun_type?: string;
  head_index?: number;
}

export interface GrammarUnit {
  id: string;
  locale: string;
  pos: PartOfSpeech;
  features: FeatureValues;
  agreement_source?: string;
  span?: [number, number];
}

export interface UnitState {
  unit: GrammarUnit;
  version: number;
}

export interface VariantText {
  record: string;
  text: string;
  spans: Record<string, [number, number]>;
}

export interface StatementPayload {
  statement_id: string;
  source_text: string;
  target_text: string;
  target_spans: Record<string, [number, number]>;
  variants: VariantText[];
  units: Record<string, UnitState>;
  edit_count: number;
}

export interface PatchUnitResponse {
  statement_id: string;
  unit: GrammarUnit;
  version: number;
  categories: string[];
  changed: boolean;
  variants: VariantText[];
}

export interface SessionInfo {
  session_id: string;
  project_id: string;
  participant_id: string;
  target_locale: string;
  statement_ids: string[];
}

export interface SessionReport {
  session_id: string;
  participant_id: string;
  completed: boolean;
  total_changes: number;
  per_statement: Record<string, number>;
  unit_total: number;
}

/** Legality manifest served at /legality and exported by the CLI. */
export type FeatureSpec =
  | { kind: "enum"; values: string[] }
  | { kind: "text" }
  | { kind: "list" }
  | { kind: "numeral"; types: string[] }
  | { kind: "integer" };

export interface LegalityManifest {
  version: number;
  legality: Record<string, Record<PartOfSpeech, Record<string, FeatureSpec>>>;
}

/**
 * Edit-form model for one grammar unit.
 *
 * Controls are built from the legality mirror, so an illegal value is
 * simply never offered. A form tracks its baseline and emits a PATCH body
 * only for fields the reviewer actually changed; an untouched form emits
 * nothing.
 */

import { legalFeatures, selectableValues } from "./legality.js";
import type { FeatureSpec, GrammarUnit, PartOfSpeech } from "./types.js";

export interface FormField {
  name: string;
  kind: FeatureSpec["kind"];
  /** Selectable values for enum fields; the empty option clears. */
  options: string[];
  value: string | null;
}

export interface FormModel {
  unitId: string;
  pos: PartOfSpeech;
  locale: string;
  version: number;
  fields: FormField[];
  baseline: Record<string, string | null>;
}

function currentValue(unit: GrammarUnit, feature: string): string | null {
  const features: Record<string, unknown> = { ...unit.features };
  const value = features[feature];
  if (value === undefined || value === null) return null;
  if (Array.isArray(value)) return value.join("+");
  if (typeof value === "object") {
    const numeral = value as { value: number; numeral_type: string };
    return `${numeral.value}:${numeral.numeral_type}`;
  }
  return String(value);
}

export function buildFormModel(unit: GrammarUnit, version: number): FormModel {
  const specs = legalFeatures(unit.locale, unit.pos);
  const fields: FormField[] = [
    { name: "lemma", kind: "text", options: [], value: unit.features.lemma },
  ];
  for (const [name, spec] of Object.entries(specs)) {
    fields.push({
      name,
      kind: spec.kind,
      options: spec.kind === "enum" ? spec.values : [],
      value: currentValue(unit, name),
    });
  }
  const baseline: Record<string, string | null> = {};
  for (const field of fields) baseline[field.name] = field.value;
  return {
    unitId: unit.id,
    pos: unit.pos,
    locale: unit.locale,
    version,
    fields,
    baseline,
  };
}

/**
 * Set a field; enum fields only accept offered options (or null to
 * clear). Returns false when the value is not settable, which the UI
 * renders as a disabled control.
 */
export function setField(
  model: FormModel,
  name: string,
  value: string | null,
): boolean {
  const field = model.fields.find((f) => f.name === name);
  if (field === undefined) return false;
  if (value !== null && field.kind === "enum" && !field.options.includes(value)) {
    return false;
  }
  field.value = value;
  return true;
}

function parseFieldValue(field: FormField): unknown {
  if (field.value === null) return null;
  switch (field.kind) {
    case "list":
      return field.value.split("+").filter((s) => s.length > 0);
    case "numeral": {
      const [value, numeralType] = field.value.split(":");
      return { value: Number(value), numeral_type: numeralType };
    }
    case "integer":
      return Number(field.value);
    default:
      return field.value;
  }
}

/**
 * PATCH body for the changed fields only; null when the form is
 * untouched (no request should be sent at all).
 */
export function buildPatch(model: FormModel): Record<string, unknown> | null {
  const changes: Record<string, unknown> = {};
  for (const field of model.fields) {
    if (field.value !== model.baseline[field.name]) {
      changes[field.name] = parseFieldValue(field);
    }
  }
  return Object.keys(changes).length > 0 ? changes : null;
}

export { selectableValues };

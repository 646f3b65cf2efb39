/**
 * Client-side mirror of the mixture invariants, so obviously bad input never
 * produces a request. The service re-checks everything; this is about fast
 * inline feedback, not trust.
 */

import type { MixInput } from "./api.js";

export interface FormValues {
  mix: MixInput;
  tempC: number;
  fractureEnergy: number;
  rutThreshold: number;
  feThreshold: number;
}

export const SWEEPABLE_FACTORS = [
  "temp_c",
  "grade",
  "rap_pct",
  "ras_pct",
  "crc_pct",
  "ac_pct",
  "nmas_mm",
  "gradation",
  "agg_type",
  "mix_type",
] as const;

const NONNEGATIVE: Array<keyof MixInput> = ["ac_pct", "rap_pct", "ras_pct", "crc_pct"];

export function validateForm(values: FormValues): Record<string, string> {
  const errors: Record<string, string> = {};
  const mix = values.mix;

  for (const [field, value] of Object.entries(mix)) {
    if (typeof value === "number" && !Number.isFinite(value)) {
      errors[field] = "enter a number";
    }
  }
  if (!Number.isFinite(values.tempC)) errors.temp_c = "enter a number";
  if (!Number.isFinite(values.fractureEnergy)) errors.fracture_energy = "enter a number";
  if (!Number.isFinite(values.feThreshold)) errors.fe_threshold = "enter a number";
  if (!Number.isFinite(values.rutThreshold)) errors.rut_threshold = "enter a number";
  if (Object.keys(errors).length > 0) return errors;

  if (mix.htpg_c <= mix.ltpg_c) {
    errors.htpg_c = "high grade must exceed low grade";
  }
  for (const field of NONNEGATIVE) {
    if ((mix[field] as number) < 0) errors[field] = "must be ≥ 0";
  }
  if (mix.nmas_mm <= 0) errors.nmas_mm = "must be > 0";
  if (values.fractureEnergy < 0) errors.fracture_energy = "must be ≥ 0";
  return errors;
}

/** Parse a sweep value list: numbers for numeric factors, labels otherwise. */
export function parseSweepValues(factor: string, text: string): unknown[] {
  const tokens = text
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
  if (factor === "grade" || factor === "gradation" || factor === "agg_type" || factor === "mix_type") {
    return tokens;
  }
  return tokens.map((t) => {
    const value = Number(t);
    if (!Number.isFinite(value)) throw new Error(`"${t}" is not a number`);
    return value;
  });
}

export function isSweepableFactor(factor: string): boolean {
  return (SWEEPABLE_FACTORS as readonly string[]).includes(factor);
}

/** CSV export of the scenario table, for lab records. */

import type { Scenario } from "./state.js";

const HEADER = [
  "label",
  "mix_type",
  "htpg_c",
  "ltpg_c",
  "ac_pct",
  "nmas_mm",
  "rap_pct",
  "ras_pct",
  "gradation",
  "agg_type",
  "crc_pct",
  "temp_c",
  "fracture_energy_j_per_m2",
  "rut_at_20000_mm",
  "quadrant",
  "run_at",
];

function cell(value: unknown): string {
  const text = String(value);
  return /[",\n]/.test(text) ? `"${text.replace(/"/g, '""')}"` : text;
}

export function scenariosToCsv(scenarios: readonly Scenario[]): string {
  const lines = [HEADER.join(",")];
  for (const s of scenarios) {
    lines.push(
      [
        s.label,
        s.mix.mix_type,
        s.mix.htpg_c,
        s.mix.ltpg_c,
        s.mix.ac_pct,
        s.mix.nmas_mm,
        s.mix.rap_pct,
        s.mix.ras_pct,
        s.mix.gradation,
        s.mix.agg_type,
        s.mix.crc_pct,
        s.tempC,
        s.psd.fracture_energy_j_per_m2,
        s.psd.rut_at_20000_mm,
        s.psd.quadrant,
        s.at,
      ]
        .map(cell)
        .join(","),
    );
  }
  return lines.join("\n") + "\n";
}

/**
 * Wires the what-if form, scenario history, sweep panel, and charts to the
 * prediction service. The flow mirrors the lab's iterative balanced-design
 * loop: enter a mixture, run, compare against pinned scenarios, adjust.
 */

import { ApiClient, ApiError, NetworkError } from "./api.js";
import type { MixInput } from "./api.js";
import { PALETTE, renderCurves, renderLegend, renderPsd } from "./charts.js";
import type { CurveSeries, PsdMark } from "./charts.js";
import { scenariosToCsv } from "./csv.js";
import { ScenarioStore, SequenceGate } from "./state.js";
import { isSweepableFactor, parseSweepValues, validateForm } from "./validate.js";
import type { FormValues } from "./validate.js";

function byId<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function numberValue(root: Document, id: string): number {
  return Number((byId<HTMLInputElement>(root, id)).value);
}

export class App {
  readonly store = new ScenarioStore();
  private readonly runGate = new SequenceGate();
  private readonly sweepGate = new SequenceGate();
  private lastAction: (() => void) | null = null;

  constructor(
    private readonly root: Document,
    private readonly api: ApiClient,
    private readonly now: () => string = () => new Date().toISOString(),
  ) {
    byId<HTMLButtonElement>(root, "run-btn").addEventListener("click", () => void this.runScenario());
    byId<HTMLButtonElement>(root, "sweep-btn").addEventListener("click", () => void this.runSweep());
    byId<HTMLButtonElement>(root, "export-btn").addEventListener("click", () => this.exportCsv());
    byId<HTMLButtonElement>(root, "retry-btn").addEventListener("click", () => {
      this.hideBanner();
      this.lastAction?.();
    });
  }

  readForm(): FormValues {
    const root = this.root;
    const mix: MixInput = {
      mix_type: byId<HTMLSelectElement>(root, "mix_type").value,
      htpg_c: numberValue(root, "htpg_c"),
      ltpg_c: numberValue(root, "ltpg_c"),
      ac_pct: numberValue(root, "ac_pct"),
      nmas_mm: numberValue(root, "nmas_mm"),
      rap_pct: numberValue(root, "rap_pct"),
      ras_pct: numberValue(root, "ras_pct"),
      gradation: byId<HTMLSelectElement>(root, "gradation").value,
      agg_type: byId<HTMLSelectElement>(root, "agg_type").value,
      crc_pct: numberValue(root, "crc_pct"),
    };
    return {
      mix,
      tempC: numberValue(root, "temp_c"),
      fractureEnergy: numberValue(root, "fracture_energy"),
      rutThreshold: numberValue(root, "rut_threshold"),
      feThreshold: numberValue(root, "fe_threshold"),
    };
  }

  // ---- scenario flow ----------------------------------------------------

  async runScenario(): Promise<void> {
    this.clearFieldErrors();
    const values = this.readForm();
    const errors = validateForm(values);
    if (Object.keys(errors).length > 0) {
      this.showFieldErrors(errors);
      return; // invalid input is blocked client-side; nothing is sent
    }

    const ticket = this.runGate.next();
    this.setBusy("run-btn", true);
    try {
      const [curve, psd] = await Promise.all([
        this.api.predictCurve(values.mix, values.tempC),
        this.api.psd(values.mix, values.tempC, values.fractureEnergy, {
          rut_mm: values.rutThreshold,
          fracture_energy: values.feThreshold,
        }),
      ]);
      if (!this.runGate.isCurrent(ticket)) return; // superseded by a newer run
      this.store.add(
        {
          mix: values.mix,
          tempC: values.tempC,
          fractureEnergy: values.fractureEnergy,
          curve,
          psd,
          at: this.now(),
        },
        byId<HTMLInputElement>(this.root, "label").value,
      );
      this.showWarnings([...curve.warnings, ...psd.warnings]);
      this.renderScenarios();
    } catch (err) {
      this.handleFailure(err, () => void this.runScenario());
    } finally {
      this.setBusy("run-btn", false);
    }
  }

  renderScenarios(): void {
    const scenarios = this.store.list();
    const series: CurveSeries[] = scenarios.map((s, i) => ({
      label: s.label,
      grid: s.curve.grid,
      values: s.curve.clamped_mm,
      color: PALETTE[i % PALETTE.length],
    }));
    renderCurves(byId<HTMLElement>(this.root, "curve-chart") as unknown as SVGSVGElement, series);
    renderLegend(
      byId<HTMLElement>(this.root, "curve-legend"),
      series.map(({ label, color }) => ({ label, color })),
    );

    const last = scenarios[scenarios.length - 1];
    const marks: PsdMark[] = scenarios.map((s, i) => ({
      label: s.label,
      rut: s.psd.rut_at_20000_mm,
      fractureEnergy: s.psd.fracture_energy_j_per_m2,
      quadrant: s.psd.quadrant,
      color: PALETTE[i % PALETTE.length],
    }));
    // threshold lines always come from the latest service response
    renderPsd(
      byId<HTMLElement>(this.root, "psd-chart") as unknown as SVGSVGElement,
      marks,
      last.psd.rut_threshold_mm,
      last.psd.fe_threshold,
    );
    this.renderTable();
  }

  private renderTable(): void {
    const tbody = byId<HTMLTableSectionElement>(this.root, "scenario-rows");
    tbody.textContent = "";
    for (const s of this.store.list()) {
      const tr = this.root.createElement("tr");
      const cells = [
        s.label,
        `${s.mix.htpg_c}/${s.mix.ltpg_c}`,
        String(s.mix.ac_pct),
        String(s.mix.rap_pct),
        String(s.mix.ras_pct),
        String(s.mix.crc_pct),
        String(s.tempC),
        s.psd.rut_at_20000_mm.toFixed(2),
        s.psd.quadrant,
      ];
      for (const text of cells) {
        const td = this.root.createElement("td");
        td.textContent = text;
        tr.appendChild(td);
      }
      tbody.appendChild(tr);
    }
  }

  // ---- sweep panel --------------------------------------------------------

  async runSweep(): Promise<void> {
    const sweepErrors = byId<HTMLElement>(this.root, "sweep-errors");
    sweepErrors.textContent = "";
    if (this.store.length === 0) {
      sweepErrors.textContent = "run a base scenario first";
      return;
    }
    const factor = byId<HTMLSelectElement>(this.root, "sweep-factor").value;
    if (!isSweepableFactor(factor)) {
      sweepErrors.textContent = `cannot sweep "${factor}"`;
      return;
    }
    let values: unknown[];
    try {
      values = parseSweepValues(factor, byId<HTMLInputElement>(this.root, "sweep-values").value);
    } catch (err) {
      sweepErrors.textContent = String(err instanceof Error ? err.message : err);
      return;
    }
    if (values.length === 0) {
      sweepErrors.textContent = "enter at least one value";
      return;
    }

    const base = this.store.list()[this.store.length - 1];
    const ticket = this.sweepGate.next();
    this.setBusy("sweep-btn", true);
    try {
      const response = await this.api.sweep(base.mix, base.tempC, factor, values);
      if (!this.sweepGate.isCurrent(ticket)) return;
      const entries = response.entries.slice().sort((a, b) => {
        const an = Number(a.value);
        const bn = Number(b.value);
        if (Number.isFinite(an) && Number.isFinite(bn)) return an - bn;
        return String(a.value).localeCompare(String(b.value));
      });
      const series: CurveSeries[] = entries.map((entry, i) => ({
        label: `${factor}=${Array.isArray(entry.value) ? entry.value.join("/") : String(entry.value)}`,
        grid: entry.curve.grid,
        values: entry.curve.clamped_mm,
        color: PALETTE[i % PALETTE.length],
      }));
      renderCurves(byId<HTMLElement>(this.root, "sweep-chart") as unknown as SVGSVGElement, series);
      renderLegend(
        byId<HTMLElement>(this.root, "sweep-legend"),
        series.map(({ label, color }) => ({ label, color })),
      );
      this.showWarnings(response.warnings);
    } catch (err) {
      this.handleFailure(err, () => void this.runSweep(), sweepErrors);
    } finally {
      this.setBusy("sweep-btn", false);
    }
  }

  // ---- export -------------------------------------------------------------

  exportCsv(): void {
    const csv = scenariosToCsv(this.store.list());
    const anchor = this.root.createElement("a");
    anchor.href = "data:text/csv;charset=utf-8," + encodeURIComponent(csv);
    anchor.download = "scenarios.csv";
    anchor.click();
  }

  // ---- feedback helpers -----------------------------------------------------

  private handleFailure(err: unknown, retry: () => void, inlineTarget?: HTMLElement): void {
    if (err instanceof NetworkError) {
      this.lastAction = retry;
      this.showBanner(err.message);
      return;
    }
    if (err instanceof ApiError) {
      if (Object.keys(err.fieldErrors).length > 0) {
        this.showFieldErrors(err.fieldErrors);
        return;
      }
      const message = `${err.code ?? err.status}: ${err.message}`;
      if (inlineTarget) inlineTarget.textContent = message;
      else byId<HTMLElement>(this.root, "form-errors").textContent = message;
      return;
    }
    throw err;
  }

  private clearFieldErrors(): void {
    byId<HTMLElement>(this.root, "form-errors").textContent = "";
    for (const node of Array.from(this.root.querySelectorAll("[data-error-for]"))) {
      node.textContent = "";
    }
  }

  private showFieldErrors(errors: Record<string, string>): void {
    const unplaced: string[] = [];
    for (const [field, message] of Object.entries(errors)) {
      const slot = this.root.querySelector(`[data-error-for="${field.replace("mix.", "")}"]`);
      if (slot) slot.textContent = message;
      else unplaced.push(`${field}: ${message}`);
    }
    if (unplaced.length > 0) {
      byId<HTMLElement>(this.root, "form-errors").textContent = unplaced.join("; ");
    }
  }

  private showWarnings(warnings: string[]): void {
    const unique = Array.from(new Set(warnings));
    const node = byId<HTMLElement>(this.root, "warnings");
    node.textContent = unique.length ? `extrapolating: ${unique.join("; ")}` : "";
  }

  private showBanner(message: string): void {
    const banner = byId<HTMLElement>(this.root, "network-banner");
    banner.hidden = false;
    byId<HTMLElement>(this.root, "network-message").textContent = message;
  }

  private hideBanner(): void {
    byId<HTMLElement>(this.root, "network-banner").hidden = true;
  }

  // Requests stay fireable while one is in flight: a newer run supersedes
  // the old one and the sequence gate drops the stale response.
  private setBusy(id: string, busy: boolean): void {
    byId<HTMLButtonElement>(this.root, id).setAttribute("aria-busy", String(busy));
  }
}

export function initApp(root: Document, api: ApiClient): App {
  return new App(root, api);
}

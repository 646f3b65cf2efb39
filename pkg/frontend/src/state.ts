/**
 * Session-local scenario history. Entries are immutable once run and the
 * list is append-only: re-running a label adds a new, suffixed entry.
 */

import type { CurveResponse, MixInput, PsdResponse } from "./api.js";

export interface Scenario {
  readonly label: string;
  readonly mix: MixInput;
  readonly tempC: number;
  readonly fractureEnergy: number;
  readonly curve: CurveResponse;
  readonly psd: PsdResponse;
  readonly at: string;
}

export class ScenarioStore {
  private entries: Scenario[] = [];

  uniqueLabel(requested: string): string {
    const base = requested.trim() || `Scenario ${this.entries.length + 1}`;
    if (!this.entries.some((e) => e.label === base)) return base;
    let n = 2;
    while (this.entries.some((e) => e.label === `${base} (${n})`)) n += 1;
    return `${base} (${n})`;
  }

  add(scenario: Omit<Scenario, "label">, requestedLabel: string): Scenario {
    const entry: Scenario = Object.freeze({
      ...scenario,
      label: this.uniqueLabel(requestedLabel),
    });
    this.entries.push(entry);
    return entry;
  }

  list(): readonly Scenario[] {
    return this.entries.slice();
  }

  get length(): number {
    return this.entries.length;
  }
}

/**
 * Monotonic ticket counter per panel: a response is applied only if no newer
 * request has been issued since it left, so stale answers are discarded.
 */
export class SequenceGate {
  private counter = 0;

  next(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter;
  }
}

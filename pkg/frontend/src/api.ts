/**
 * Typed client for the rut-depth prediction service. All numbers shown in
 * the UI originate from these responses; the client never computes any.
 */

export interface MixInput {
  mix_type: string;
  htpg_c: number;
  ltpg_c: number;
  ac_pct: number;
  nmas_mm: number;
  rap_pct: number;
  ras_pct: number;
  gradation: string;
  agg_type: string;
  crc_pct: number;
}

export interface CurveMetadata {
  mix: Record<string, unknown>;
  temp_c: number;
  model_version: number;
}

export interface CurveResponse {
  grid: number[];
  raw_mm: number[];
  clamped_mm: number[];
  metadata: CurveMetadata;
  warnings: string[];
}

export interface PsdResponse {
  rut_at_20000_mm: number;
  fracture_energy_j_per_m2: number;
  rut_threshold_mm: number;
  fe_threshold: number;
  quadrant: string;
  warnings: string[];
}

export interface SweepEntry {
  value: unknown;
  curve: CurveResponse;
}

export interface SweepResponse {
  factor: string;
  base_value: unknown;
  base: CurveResponse;
  entries: SweepEntry[];
  warnings: string[];
}

export interface ModelInfo {
  format_version: number;
  layer_dims: number[];
  features: {
    names: string[];
    categories: Record<string, Record<string, number>>;
    ranges: Record<string, [number, number]>;
  };
  thresholds: { rut_mm: number; fracture_energy: number | null };
  provenance: Record<string, unknown>;
}

export interface PsdThresholds {
  rut_mm?: number;
  fracture_energy?: number;
}

/** Service-reported failure: field errors for 400s, a domain code for 422s. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly fieldErrors: Record<string, string> = {},
    readonly code: string | null = null,
    message?: string,
  ) {
    super(message ?? code ?? `request failed with status ${status}`);
  }
}

/** Transport-level failure; the UI offers a retry for these. */
export class NetworkError extends Error {}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = globalThis.fetch?.bind(globalThis),
  ) {}

  private async request<T>(path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, {
        method: body === undefined ? "GET" : "POST",
        headers: { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(`cannot reach the prediction service: ${String(err)}`);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      // non-JSON body; fall through with payload === null
    }
    if (!response.ok) {
      const record = (payload ?? {}) as Record<string, unknown>;
      throw new ApiError(
        response.status,
        (record.errors as Record<string, string>) ?? {},
        (record.error as string) ?? null,
        (record.message as string) ?? undefined,
      );
    }
    return payload as T;
  }

  model(): Promise<ModelInfo> {
    return this.request<ModelInfo>("/api/model");
  }

  predictCurve(mix: MixInput, tempC: number, grid?: number[]): Promise<CurveResponse> {
    return this.request<CurveResponse>("/api/predict/curve", {
      mix,
      temp_c: tempC,
      ...(grid ? { grid } : {}),
    });
  }

  psd(
    mix: MixInput,
    tempC: number,
    fractureEnergy: number,
    thresholds: PsdThresholds,
  ): Promise<PsdResponse> {
    return this.request<PsdResponse>("/api/psd", {
      mix,
      temp_c: tempC,
      fracture_energy: fractureEnergy,
      thresholds,
    });
  }

  sweep(mix: MixInput, tempC: number, factor: string, values: unknown[]): Promise<SweepResponse> {
    return this.request<SweepResponse>("/api/sweep", { mix, temp_c: tempC, factor, values });
  }
}

/** Client for the mogfit service. Requests carry a sequence number; a
 * response is surfaced only if no newer request of the same kind has been
 * issued since, so a slow fit can never overwrite a newer one. */

import type {
  AssessedPoint,
  EvaluateResponse,
  OverlayJson,
  PipelineResultJson,
  SessionOptions,
  SpecJson,
  SplineResponse,
} from "./types";

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; text(): Promise<string> }>;

export class ServiceError extends Error {
  status: number;
  stage: string | null;

  constructor(status: number, message: string, stage: string | null = null) {
    super(message);
    this.status = status;
    this.stage = stage;
  }
}

/** Returned instead of data when a response arrives after a newer request
 * superseded it. */
export const STALE = Symbol("stale-response");
export type Stale = typeof STALE;

export function buildPipelineRequest(
  points: AssessedPoint[],
  options: SessionOptions,
): Record<string, unknown> {
  const spec = {
    type: "spline_cdf",
    points: points.map((p) => [p.x, p.F]),
    tail_policy: "bounded",
    n_equiv: points.length,
    atoms: [],
  };
  let fit: Record<string, unknown>;
  if (options.mode === "em") {
    fit = { mode: "em", m: options.m };
  } else if (options.mode === "size_search") {
    fit = { mode: "size_search", kn_ratio: options.knRatio };
  } else {
    fit = { mode: "fast_two" };
  }
  const req: Record<string, unknown> = {
    spec,
    fit,
    transform: options.autoTransform ? "auto" : "none",
  };
  if (options.bounds !== null) req.bounds = options.bounds;
  return req;
}

export class ApiClient {
  private base: string;
  private fetchFn: FetchLike;
  private seq: Record<string, number> = {};

  constructor(base = "", fetchFn: FetchLike = fetch as unknown as FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  /** Sequence-guarded POST: resolves to STALE when superseded. */
  private async post<T>(kind: string, path: string, body: unknown):
      Promise<T | Stale> {
    const ticket = (this.seq[kind] ?? 0) + 1;
    this.seq[kind] = ticket;
    const resp = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const text = await resp.text();
    if (this.seq[kind] !== ticket) return STALE;
    if (!resp.ok) {
      let message = text;
      let stage: string | null = null;
      try {
        const parsed = JSON.parse(text) as { error?: string; stage?: string };
        message = parsed.error ?? text;
        stage = parsed.stage ?? null;
      } catch {
        /* non-JSON error body: keep raw text */
      }
      throw new ServiceError(resp.status, message, stage);
    }
    return JSON.parse(text) as T;
  }

  spline(points: AssessedPoint[]): Promise<SplineResponse | Stale> {
    return this.post("spline", "/v1/spline", {
      points: points.map((p) => [p.x, p.F]),
    });
  }

  pipeline(points: AssessedPoint[], options: SessionOptions):
      Promise<PipelineResultJson | Stale> {
    return this.post("pipeline", "/v1/pipeline",
      buildPipelineRequest(points, options));
  }

  /** Re-post of an exported request body (determinism check / import). */
  pipelineRaw(body: Record<string, unknown>):
      Promise<PipelineResultJson | Stale> {
    return this.post("pipeline", "/v1/pipeline", body);
  }

  evaluate(
    spec: SpecJson,
    grid: number[],
    overlays: Record<string, OverlayJson> = {},
    momentMatchGaussian = false,
  ): Promise<EvaluateResponse | Stale> {
    return this.post("evaluate", "/v1/evaluate", {
      spec,
      grid,
      overlays,
      moment_match_gaussian: momentMatchGaussian,
    });
  }
}

/** 201-point plotting grid spanning the assessed points with margins. */
export function plotGrid(points: AssessedPoint[], n = 201): number[] {
  const xs = points.map((p) => p.x);
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const pad = (hi - lo) * 0.15 || 1.0;
  const a = lo - pad;
  const b = hi + pad;
  return Array.from({ length: n }, (_, i) => a + ((b - a) * i) / (n - 1));
}

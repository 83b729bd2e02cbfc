/** JSON wire types for the mogfit HTTP service (v1). */

export interface AssessedPoint {
  x: number;
  F: number;
}

export type FitMode = "em" | "fast_two" | "size_search";

export interface SessionOptions {
  autoTransform: boolean;
  bounds: [number, number | null] | null;
  mode: FitMode;
  m: number; // for mode "em"
  knRatio: number; // for mode "size_search"
}

export interface MixtureComponentJson {
  p: number;
  mu: number;
  var: number;
}

export interface MixtureJson {
  components: MixtureComponentJson[];
}

export interface FitReportJson {
  mixture: MixtureJson;
  d0_trace: number[];
  relative_entropy: number | null;
  iterations: number;
  converged: boolean;
  fixed_point_residual: number;
  flags: string[];
}

export interface PipelineResultJson {
  chain_used: { steps: Record<string, unknown>[] };
  p_star: number | null;
  fit_reports: Record<string, FitReportJson>;
  chosen_m: number | null;
  diagnostics: [string, number][];
  flags: string[];
  k?: number;
  n?: number;
}

export interface SpecJson {
  type: string;
  [key: string]: unknown;
}

/** An overlay is either a plain spec or a (spec in transformed space,
 * chain) pair that the service evaluates back in original coordinates. */
export type OverlayJson =
  | SpecJson
  | { spec: SpecJson; chain: { steps: Record<string, unknown>[] } };

export interface EvaluateCurve {
  density: number[];
  cdf: number[];
}

export interface EvaluateResponse {
  grid: number[];
  results: Record<string, EvaluateCurve>;
}

export interface SplineResponse {
  spec: SpecJson;
}

export interface SessionExport {
  points: AssessedPoint[];
  options: SessionOptions;
  result: PipelineResultJson | null;
}

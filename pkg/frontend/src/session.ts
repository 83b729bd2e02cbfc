/** Assessment-session state: point editing with live validation,
 * residuals against server-evaluated curves, and export/import.
 *
 * All numerical curves come from the service; this module never
 * re-computes a density or CDF, only compares and formats them. */

import type {
  AssessedPoint,
  EvaluateResponse,
  PipelineResultJson,
  SessionExport,
  SessionOptions,
} from "./types";

export interface PointIssue {
  index: number;
  reason: string;
}

export interface Session {
  points: AssessedPoint[];
  options: SessionOptions;
  lastResult: PipelineResultJson | null;
}

export const MIN_FIT_POINTS = 3;

export function defaultOptions(): SessionOptions {
  return {
    autoTransform: false,
    bounds: null,
    mode: "fast_two",
    m: 2,
    knRatio: 0.1,
  };
}

export function newSession(): Session {
  return { points: [], options: defaultOptions(), lastResult: null };
}

/** Points must be strictly increasing in x and in F, with F in (0, 1).
 * Violations are reported (for highlighting), never silently fixed. */
export function validatePoints(points: AssessedPoint[]): PointIssue[] {
  const issues: PointIssue[] = [];
  points.forEach((pt, i) => {
    if (!Number.isFinite(pt.x) || !Number.isFinite(pt.F)) {
      issues.push({ index: i, reason: "not a finite number" });
      return;
    }
    if (pt.F <= 0 || pt.F >= 1) {
      issues.push({ index: i, reason: "F must lie strictly in (0, 1)" });
    }
    if (i > 0) {
      const prev = points[i - 1];
      if (pt.x <= prev.x) {
        issues.push({ index: i, reason: "x must increase" });
      }
      if (pt.F <= prev.F) {
        issues.push({ index: i, reason: "F must increase" });
      }
    }
  });
  return issues;
}

export function pointsValid(points: AssessedPoint[]): boolean {
  return validatePoints(points).length === 0;
}

export function fitEnabled(session: Session): boolean {
  return session.points.length >= MIN_FIT_POINTS && pointsValid(session.points);
}

/** Insert keeping x-order (ties are kept, validation will flag them). */
export function addPoint(session: Session, pt: AssessedPoint): Session {
  const points = [...session.points];
  let i = points.findIndex((q) => q.x >= pt.x);
  if (i < 0) i = points.length;
  points.splice(i, 0, { ...pt });
  return { ...session, points };
}

/** Move a point in place; the result may be invalid and is then
 * highlighted by validatePoints rather than reordered. */
export function movePoint(
  session: Session,
  index: number,
  pt: AssessedPoint,
): Session {
  if (index < 0 || index >= session.points.length) return session;
  const points = session.points.map((q, i) => (i === index ? { ...pt } : q));
  return { ...session, points };
}

export function deletePoint(session: Session, index: number): Session {
  const points = session.points.filter((_, i) => i !== index);
  return { ...session, points };
}

/** Residual markers: fitted CDF (as evaluated by the service on exactly
 * the assessed x grid) minus the assessed F. */
export function residuals(
  points: AssessedPoint[],
  evaluated: EvaluateResponse,
  curveKey: string,
): { x: number; residual: number }[] {
  const curve = evaluated.results[curveKey];
  if (!curve) throw new Error(`no curve named ${curveKey} in response`);
  if (evaluated.grid.length !== points.length) {
    throw new Error("evaluation grid does not match the assessed points");
  }
  return points.map((pt, i) => {
    if (evaluated.grid[i] !== pt.x) {
      throw new Error(`grid[${i}] = ${evaluated.grid[i]} != assessed x ${pt.x}`);
    }
    return { x: pt.x, residual: curve.cdf[i] - pt.F };
  });
}

export function exportSession(session: Session): string {
  const out: SessionExport = {
    points: session.points,
    options: session.options,
    result: session.lastResult,
  };
  return JSON.stringify(out, null, 2);
}

/** Import throws on malformed input; callers keep the old session. */
export function importSession(text: string): Session {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new Error("not valid JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("session file must be a JSON object");
  }
  const obj = raw as Partial<SessionExport>;
  if (!Array.isArray(obj.points)) {
    throw new Error("session file is missing its points list");
  }
  const points = obj.points.map((p, i) => {
    if (
      typeof p !== "object" || p === null ||
      typeof (p as AssessedPoint).x !== "number" ||
      typeof (p as AssessedPoint).F !== "number"
    ) {
      throw new Error(`point ${i} is not an {x, F} pair`);
    }
    return { x: (p as AssessedPoint).x, F: (p as AssessedPoint).F };
  });
  const options = { ...defaultOptions(), ...(obj.options ?? {}) };
  if (!["em", "fast_two", "size_search"].includes(options.mode)) {
    throw new Error(`unknown fit mode ${String(options.mode)}`);
  }
  return { points, options, lastResult: obj.result ?? null };
}

import { describe, expect, it } from "vitest";
import {
  addPoint,
  deletePoint,
  exportSession,
  fitEnabled,
  importSession,
  movePoint,
  newSession,
  pointsValid,
  residuals,
  validatePoints,
} from "../src/session";
import type { EvaluateResponse } from "../src/types";

function sessionWith(points: [number, number][]) {
  let s = newSession();
  for (const [x, F] of points) s = addPoint(s, { x, F });
  return s;
}

describe("point validation", () => {
  it("accepts strictly increasing x and F in (0, 1)", () => {
    const s = sessionWith([[0, 0.1], [1, 0.5], [2, 0.9]]);
    expect(validatePoints(s.points)).toEqual([]);
    expect(pointsValid(s.points)).toBe(true);
  });

  it("flags non-increasing x", () => {
    const pts = [{ x: 0, F: 0.1 }, { x: 0, F: 0.5 }];
    const issues = validatePoints(pts);
    expect(issues).toHaveLength(1);
    expect(issues[0].index).toBe(1);
    expect(issues[0].reason).toMatch(/x must increase/);
  });

  it("flags non-increasing F and out-of-range F separately", () => {
    const pts = [{ x: 0, F: 0.5 }, { x: 1, F: 0.5 }, { x: 2, F: 1.5 }];
    const issues = validatePoints(pts);
    expect(issues.map((i) => i.index)).toEqual([1, 2]);
    expect(issues[1].reason).toMatch(/strictly in \(0, 1\)/);
  });

  it("flags non-finite entries", () => {
    const issues = validatePoints([{ x: NaN, F: 0.5 }]);
    expect(issues[0].reason).toMatch(/finite/);
  });

  it("never reorders or fixes points", () => {
    const s = movePoint(sessionWith([[0, 0.1], [1, 0.5]]), 0, { x: 5, F: 0.1 });
    expect(s.points.map((p) => p.x)).toEqual([5, 1]);
    expect(pointsValid(s.points)).toBe(false);
  });
});

describe("fit gating", () => {
  it("requires at least three valid points", () => {
    let s = sessionWith([[0, 0.1], [1, 0.5]]);
    expect(fitEnabled(s)).toBe(false);
    s = addPoint(s, { x: 2, F: 0.9 });
    expect(fitEnabled(s)).toBe(true);
    s = movePoint(s, 2, { x: 2, F: 0.2 }); // breaks F monotonicity
    expect(fitEnabled(s)).toBe(false);
  });

  it("addPoint keeps x-order and deletePoint removes by index", () => {
    let s = sessionWith([[0, 0.1], [2, 0.9]]);
    s = addPoint(s, { x: 1, F: 0.5 });
    expect(s.points.map((p) => p.x)).toEqual([0, 1, 2]);
    s = deletePoint(s, 1);
    expect(s.points.map((p) => p.x)).toEqual([0, 2]);
  });
});

describe("residual markers", () => {
  const points = [{ x: 0, F: 0.2 }, { x: 1, F: 0.5 }, { x: 2, F: 0.8 }];

  it("equal fitted cdf minus assessed F, point by point", () => {
    const evaluated: EvaluateResponse = {
      grid: [0, 1, 2],
      results: { fit: { density: [0, 0, 0], cdf: [0.25, 0.45, 0.85] } },
    };
    const marks = residuals(points, evaluated, "fit");
    expect(marks).toEqual([
      { x: 0, residual: 0.25 - 0.2 },
      { x: 1, residual: 0.45 - 0.5 },
      { x: 2, residual: 0.85 - 0.8 },
    ]);
  });

  it("refuses a response whose grid is not exactly the assessed x's", () => {
    const evaluated: EvaluateResponse = {
      grid: [0, 1.5, 2],
      results: { fit: { density: [0, 0, 0], cdf: [0.2, 0.5, 0.8] } },
    };
    expect(() => residuals(points, evaluated, "fit")).toThrow(/grid\[1\]/);
    expect(() =>
      residuals(points, { grid: [0, 1], results: evaluated.results }, "fit"),
    ).toThrow(/does not match/);
  });

  it("refuses a missing curve", () => {
    const evaluated: EvaluateResponse = { grid: [0, 1, 2], results: {} };
    expect(() => residuals(points, evaluated, "fit")).toThrow(/no curve/);
  });
});

describe("export / import", () => {
  it("round-trips points, options, and last result", () => {
    const s = sessionWith([[0, 0.1], [1, 0.5], [2, 0.9]]);
    s.options = { ...s.options, mode: "em", m: 3, autoTransform: true };
    s.lastResult = {
      chain_used: { steps: [] },
      p_star: null,
      fit_reports: {},
      chosen_m: 3,
      diagnostics: [],
      flags: [],
    };
    const back = importSession(exportSession(s));
    expect(back.points).toEqual(s.points);
    expect(back.options).toEqual(s.options);
    expect(back.lastResult).toEqual(s.lastResult);
  });

  it("throws on malformed JSON, leaving the caller's session intact", () => {
    const s = sessionWith([[0, 0.1], [1, 0.5]]);
    expect(() => importSession("{not json")).toThrow(/not valid JSON/);
    expect(() => importSession("[1, 2]")).toThrow(/JSON object/);
    expect(() => importSession('{"points": "nope"}')).toThrow(/points list/);
    expect(() => importSession('{"points": [{"x": 1}]}')).toThrow(
      /point 0/,
    );
    expect(() =>
      importSession('{"points": [], "options": {"mode": "??"}}'),
    ).toThrow(/unknown fit mode/);
    // the failed imports above never touched s
    expect(s.points).toHaveLength(2);
  });

  it("fills missing options with defaults", () => {
    const back = importSession('{"points": [{"x": 0, "F": 0.5}]}');
    expect(back.options.mode).toBe("fast_two");
    expect(back.lastResult).toBeNull();
  });
});

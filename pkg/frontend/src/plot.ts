/** Canvas plotting of server-evaluated curves. Pure rendering: the only
 * numeric work is linear scaling to pixels. */

import type { AssessedPoint, EvaluateResponse } from "./types";

export interface CurveStyle {
  key: string;
  color: string;
  dash?: number[];
  label: string;
}

const MARGIN = { left: 46, right: 12, top: 10, bottom: 26 };

interface Scale {
  x: (v: number) => number;
  y: (v: number) => number;
}

function makeScale(
  canvas: HTMLCanvasElement,
  xDomain: [number, number],
  yDomain: [number, number],
): Scale {
  const w = canvas.width - MARGIN.left - MARGIN.right;
  const h = canvas.height - MARGIN.top - MARGIN.bottom;
  const [x0, x1] = xDomain;
  const [y0, y1] = yDomain;
  return {
    x: (v) => MARGIN.left + ((v - x0) / (x1 - x0 || 1)) * w,
    y: (v) => MARGIN.top + h - ((v - y0) / (y1 - y0 || 1)) * h,
  };
}

function drawAxes(
  ctx: CanvasRenderingContext2D,
  canvas: HTMLCanvasElement,
  scale: Scale,
  xDomain: [number, number],
  yDomain: [number, number],
): void {
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.lineWidth = 1;
  ctx.font = "11px sans-serif";
  ctx.strokeRect(
    MARGIN.left, MARGIN.top,
    canvas.width - MARGIN.left - MARGIN.right,
    canvas.height - MARGIN.top - MARGIN.bottom,
  );
  for (let i = 0; i <= 4; i++) {
    const xv = xDomain[0] + ((xDomain[1] - xDomain[0]) * i) / 4;
    const yv = yDomain[0] + ((yDomain[1] - yDomain[0]) * i) / 4;
    ctx.fillText(xv.toPrecision(3), scale.x(xv) - 10, canvas.height - 8);
    ctx.fillText(yv.toPrecision(2), 4, scale.y(yv) + 4);
  }
}

function drawCurve(
  ctx: CanvasRenderingContext2D,
  scale: Scale,
  grid: number[],
  values: number[],
  color: string,
  dash: number[] = [],
): void {
  ctx.strokeStyle = color;
  ctx.setLineDash(dash);
  ctx.lineWidth = 1.6;
  ctx.beginPath();
  grid.forEach((x, i) => {
    const px = scale.x(x);
    const py = scale.y(values[i]);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

export function renderPlot(
  canvas: HTMLCanvasElement,
  evaluated: EvaluateResponse,
  curves: CurveStyle[],
  field: "cdf" | "density",
  points: AssessedPoint[],
  residualsAt?: { x: number; residual: number }[],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const grid = evaluated.grid;
  const xDomain: [number, number] = [grid[0], grid[grid.length - 1]];
  let yMax = field === "cdf" ? 1 : 0;
  for (const c of curves) {
    const vals = evaluated.results[c.key]?.[field];
    if (vals) yMax = Math.max(yMax, ...vals);
  }
  const yDomain: [number, number] = [0, yMax * 1.05 || 1];
  const scale = makeScale(canvas, xDomain, yDomain);
  drawAxes(ctx, canvas, scale, xDomain, yDomain);

  for (const c of curves) {
    const vals = evaluated.results[c.key]?.[field];
    if (vals) drawCurve(ctx, scale, grid, vals, c.color, c.dash);
  }

  if (field === "cdf") {
    // Assessed points as dots; residual markers as vertical red ticks.
    ctx.fillStyle = "#222";
    for (const pt of points) {
      ctx.beginPath();
      ctx.arc(scale.x(pt.x), scale.y(pt.F), 3.5, 0, 2 * Math.PI);
      ctx.fill();
    }
    if (residualsAt) {
      ctx.strokeStyle = "#d22";
      ctx.lineWidth = 2;
      for (const r of residualsAt) {
        const px = scale.x(r.x);
        const pt = points.find((p) => p.x === r.x);
        if (!pt) continue;
        ctx.beginPath();
        ctx.moveTo(px, scale.y(pt.F));
        ctx.lineTo(px, scale.y(pt.F + r.residual));
        ctx.stroke();
      }
    }
  }

  // Legend
  let ly = MARGIN.top + 14;
  ctx.font = "12px sans-serif";
  for (const c of curves) {
    ctx.strokeStyle = c.color;
    ctx.setLineDash(c.dash ?? []);
    ctx.beginPath();
    ctx.moveTo(canvas.width - 150, ly - 4);
    ctx.lineTo(canvas.width - 122, ly - 4);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#333";
    ctx.fillText(c.label, canvas.width - 116, ly);
    ly += 16;
  }
}

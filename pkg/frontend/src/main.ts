/** Wiring: DOM <-> session state <-> service client.
 *
 * Data flow per the contract: edits re-render the spline preview through
 * POST /v1/spline + /v1/evaluate; a fit posts /v1/pipeline, then the
 * fitted mixture (and moment-matching Gaussian) are evaluated server-side
 * on a 201-point grid and overlaid. Stale responses (superseded by a
 * newer edit) never render — the client checks sequence numbers. */

import { ApiClient, plotGrid, ServiceError, STALE } from "./api";
import {
  addPoint,
  deletePoint,
  exportSession,
  fitEnabled,
  importSession,
  movePoint,
  newSession,
  residuals,
  type Session,
  validatePoints,
} from "./session";
import { renderPlot } from "./plot";
import type { EvaluateResponse, OverlayJson, SpecJson } from "./types";

const api = new ApiClient("");
let session: Session = newSession();
// Seed with the classic 5-point example so the page renders something.
for (const [x, F] of [[0, 0.1], [1, 0.3], [2, 0.6], [3, 0.8], [4, 0.95]]) {
  session = addPoint(session, { x, F });
}

const $ = <T extends HTMLElement>(id: string) =>
  document.getElementById(id) as T;
const status = (msg: string) => { $("status").textContent = msg; };

let debounceTimer: ReturnType<typeof setTimeout> | null = null;

function renderPointsTable(): void {
  const tbody = $("points-table").querySelector("tbody")!;
  tbody.innerHTML = "";
  const issues = validatePoints(session.points);
  const badRows = new Set(issues.map((i) => i.index));
  session.points.forEach((pt, i) => {
    const tr = document.createElement("tr");
    if (badRows.has(i)) tr.className = "invalid";
    for (const field of ["x", "F"] as const) {
      const td = document.createElement("td");
      const input = document.createElement("input");
      input.type = "number";
      input.step = "any";
      input.value = String(pt[field]);
      input.addEventListener("change", () => {
        const v = Number(input.value);
        session = movePoint(session, i, { ...session.points[i], [field]: v });
        onEdit();
      });
      td.appendChild(input);
      tr.appendChild(td);
    }
    const td = document.createElement("td");
    const del = document.createElement("button");
    del.textContent = "x";
    del.addEventListener("click", () => {
      session = deletePoint(session, i);
      onEdit();
    });
    td.appendChild(del);
    tr.appendChild(td);
    tbody.appendChild(tr);
  });
  $("point-issues").textContent = issues
    .map((iss) => `point ${iss.index + 1}: ${iss.reason}`)
    .join("; ");
  ($("run-fit") as HTMLButtonElement).disabled = !fitEnabled(session);
}

async function refreshPreview(): Promise<void> {
  if (!fitEnabled(session)) return; // invalid or too few points: no request
  try {
    const spl = await api.spline(session.points);
    if (spl === STALE) return;
    const grid = plotGrid(session.points);
    const overlays: Record<string, OverlayJson> = {};
    const result = session.lastResult;
    const report = result?.chosen_m != null
      ? result.fit_reports[String(result.chosen_m)]
      : undefined;
    if (report && result) {
      const mixSpec: SpecJson = {
        type: "mixture", mixture: report.mixture, atoms: [],
      };
      // The mixture is fitted in transformed space; a non-empty chain
      // means the service must pull it back to original coordinates.
      overlays.fit = result.chain_used.steps.length > 0
        ? { spec: mixSpec, chain: result.chain_used }
        : mixSpec;
    }
    const evald = await api.evaluate(spl.spec, grid, overlays, true);
    if (evald === STALE) return;

    // Residual markers come from a second evaluation on exactly the
    // assessed x's — the service is the single numerical source.
    let marks: { x: number; residual: number }[] | undefined;
    if (report) {
      const atPoints = await api.evaluate(
        spl.spec, session.points.map((p) => p.x),
        { fit: overlays.fit }, false);
      if (atPoints !== STALE) {
        marks = residuals(session.points, atPoints as EvaluateResponse, "fit");
      }
    }
    drawAll(evald as EvaluateResponse, marks);
    status("");
  } catch (err) {
    status(errText(err));
  }
}

function drawAll(
  evald: EvaluateResponse,
  marks?: { x: number; residual: number }[],
): void {
  const curves = [
    { key: "spec", color: "#246", label: "assessed spline" },
    { key: "moment_match_gaussian", color: "#999", dash: [5, 4],
      label: "moment-match N" },
    { key: "fit", color: "#c60", label: "fitted mixture" },
  ].filter((c) => evald.results[c.key]);
  renderPlot($("cdf-plot"), evald, curves, "cdf", session.points, marks);
  renderPlot($("density-plot"), evald, curves, "density", session.points);
}

function errText(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.stage ? `error in stage ${err.stage}: ${err.message}`
      : `service error: ${err.message}`;
  }
  return String(err);
}

function readOptions(): void {
  const mode = (document.querySelector("input[name=mode]:checked") as
    HTMLInputElement).value as Session["options"]["mode"];
  session.options = {
    ...session.options,
    mode,
    autoTransform: ($("auto-transform") as HTMLInputElement).checked,
    m: Number(($("em-m") as HTMLInputElement).value) || 2,
    knRatio: Number(($("kn-ratio") as HTMLInputElement).value) || 0.1,
  };
}

async function runFit(): Promise<void> {
  readOptions();
  if (!fitEnabled(session)) return;
  status("fitting…");
  try {
    const result = await api.pipeline(session.points, session.options);
    if (result === STALE) return; // superseded by a newer fit
    session.lastResult = result;
    const chosen = result.chosen_m;
    $("chosen-m").innerHTML = chosen != null
      ? `<span class="badge">m = ${chosen}</span>` : "";
    const report = chosen != null ? result.fit_reports[String(chosen)] : null;
    $("report").textContent = report
      ? [
          `chosen m: ${chosen}   converged: ${report.converged}`,
          `D0: ${report.d0_trace[report.d0_trace.length - 1]?.toPrecision(6)}`,
          ...(result.p_star != null
            ? [`p*: ${result.p_star.toPrecision(4)}`] : []),
          ...report.mixture.components.map((c) =>
            `  p=${c.p.toFixed(3)} mu=${c.mu.toFixed(3)} var=${c.var.toFixed(4)}`),
        ].join("\n")
      : "";
    await refreshPreview();
    status("");
  } catch (err) {
    status(errText(err));
  }
}

function onEdit(): void {
  renderPointsTable();
  if (debounceTimer) clearTimeout(debounceTimer);
  debounceTimer = setTimeout(() => {
    void refreshPreview().then(() => {
      if (($("auto-refit") as HTMLInputElement).checked && fitEnabled(session)) {
        void runFit();
      }
    });
  }, 300);
}

$("add-point").addEventListener("click", () => {
  const last = session.points[session.points.length - 1];
  session = addPoint(session, {
    x: last ? last.x + 1 : 0,
    F: last ? Math.min(0.99, (last.F + 1) / 2) : 0.5,
  });
  onEdit();
});

$("run-fit").addEventListener("click", () => void runFit());

$("export").addEventListener("click", () => {
  const blob = new Blob([exportSession(session)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "mogfit-session.json";
  a.click();
  URL.revokeObjectURL(a.href);
});

$("import").addEventListener("change", async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    session = importSession(await file.text());
    renderPointsTable();
    await refreshPreview();
    status("session imported");
  } catch (err) {
    // Malformed file: error message, session untouched.
    status(`import failed: ${errText(err)}`);
  }
});

renderPointsTable();
void refreshPreview();

import { describe, expect, it } from "vitest";
import {
  ApiClient,
  buildPipelineRequest,
  plotGrid,
  ServiceError,
  STALE,
  type FetchLike,
} from "../src/api";
import { defaultOptions } from "../src/session";
import type { AssessedPoint } from "../src/types";

const POINTS: AssessedPoint[] = [
  { x: 0, F: 0.2 },
  { x: 1, F: 0.5 },
  { x: 2, F: 0.8 },
];

function response(status: number, body: unknown) {
  return {
    ok: status >= 200 && status < 300,
    status,
    text: () => Promise.resolve(JSON.stringify(body)),
  };
}

/** A fetch stub whose responses resolve only when the test releases them,
 * so arrival order can be controlled independently of request order. */
function gatedFetch() {
  const pending: {
    url: string;
    body: unknown;
    release: (r: ReturnType<typeof response>) => void;
  }[] = [];
  const fetchFn: FetchLike = (url, init) =>
    new Promise((resolve) => {
      pending.push({
        url,
        body: init.body ? JSON.parse(init.body) : undefined,
        release: resolve,
      });
    });
  return { fetchFn, pending };
}

describe("request construction", () => {
  it("builds a spline-cdf pipeline request from the assessed points", () => {
    const req = buildPipelineRequest(POINTS, defaultOptions());
    expect(req.spec).toMatchObject({
      type: "spline_cdf",
      points: [[0, 0.2], [1, 0.5], [2, 0.8]],
    });
    expect(req.fit).toEqual({ mode: "fast_two" });
    expect(req.transform).toBe("none");
  });

  it("maps fit modes and the transform toggle", () => {
    const em = buildPipelineRequest(POINTS, {
      ...defaultOptions(), mode: "em", m: 4, autoTransform: true,
    });
    expect(em.fit).toEqual({ mode: "em", m: 4 });
    expect(em.transform).toBe("auto");
    const ss = buildPipelineRequest(POINTS, {
      ...defaultOptions(), mode: "size_search", knRatio: 0.25,
    });
    expect(ss.fit).toEqual({ mode: "size_search", kn_ratio: 0.25 });
  });
});

describe("stale-response discard", () => {
  it("discards an older response that arrives after a newer request", async () => {
    const { fetchFn, pending } = gatedFetch();
    const client = new ApiClient("http://svc", fetchFn);
    const opts = defaultOptions();

    const first = client.pipeline(POINTS, opts);
    const second = client.pipeline(POINTS, { ...opts, mode: "em" });
    expect(pending).toHaveLength(2);

    // Second (newer) request completes first.
    pending[1].release(response(200, { chosen_m: 2, tag: "new" }));
    await expect(second).resolves.toMatchObject({ tag: "new" });

    // First (older) response arrives late: it must be dropped, even
    // though its HTTP exchange succeeded.
    pending[0].release(response(200, { chosen_m: 1, tag: "old" }));
    await expect(first).resolves.toBe(STALE);
  });

  it("tracks sequence numbers per endpoint kind", async () => {
    const { fetchFn, pending } = gatedFetch();
    const client = new ApiClient("", fetchFn);

    const fit = client.pipeline(POINTS, defaultOptions());
    const ev = client.evaluate({ type: "mixture" }, [0, 1]);
    // The evaluate call is newer but a different kind; it must not
    // invalidate the pending pipeline call.
    pending[1].release(response(200, { grid: [0, 1], results: {} }));
    pending[0].release(response(200, { chosen_m: 1 }));
    await expect(ev).resolves.toMatchObject({ grid: [0, 1] });
    await expect(fit).resolves.toMatchObject({ chosen_m: 1 });
  });

  it("silences even the error of a superseded request", async () => {
    const { fetchFn, pending } = gatedFetch();
    const client = new ApiClient("", fetchFn);
    const first = client.pipeline(POINTS, defaultOptions());
    const second = client.pipeline(POINTS, defaultOptions());
    pending[0].release(response(422, { error: "boom", stage: "fit" }));
    pending[1].release(response(200, { chosen_m: 1 }));
    await expect(first).resolves.toBe(STALE);
    await expect(second).resolves.toMatchObject({ chosen_m: 1 });
  });
});

describe("error mapping", () => {
  it("surfaces service errors with status, message, and stage", async () => {
    const fetchFn: FetchLike = () =>
      Promise.resolve(response(422, { error: "em diverged", stage: "fit" }));
    const client = new ApiClient("", fetchFn);
    const err = await client
      .pipeline(POINTS, defaultOptions())
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(422);
    expect((err as ServiceError).message).toBe("em diverged");
    expect((err as ServiceError).stage).toBe("fit");
  });

  it("keeps a raw non-JSON error body", async () => {
    const fetchFn: FetchLike = () =>
      Promise.resolve({
        ok: false,
        status: 500,
        text: () => Promise.resolve("gateway exploded"),
      });
    const client = new ApiClient("", fetchFn);
    await expect(client.spline(POINTS)).rejects.toMatchObject({
      status: 500,
      message: "gateway exploded",
      stage: null,
    });
  });
});

describe("plot grid", () => {
  it("spans the points with margins and the requested length", () => {
    const grid = plotGrid(POINTS, 11);
    expect(grid).toHaveLength(11);
    expect(grid[0]).toBeCloseTo(-0.3, 12);
    expect(grid[10]).toBeCloseTo(2.3, 12);
    for (let i = 1; i < grid.length; i += 1) {
      expect(grid[i]).toBeGreaterThan(grid[i - 1]);
    }
  });
});

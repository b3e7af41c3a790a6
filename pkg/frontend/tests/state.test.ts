import { describe, expect, it } from "vitest";

import { WorkbenchApi, type FetchLike } from "../src/api.js";
import {
  Session,
  activeMasterIndices,
  conflictToMaster,
  describeStatement,
  isStale,
} from "../src/state.js";
import type { SmaaPayload, Statement } from "../src/types.js";

const STATEMENTS: Statement[] = [
  { type: "alt_preference", a: "C", b: "B", strict: true },
  { type: "alt_preference", a: "E", b: "F", strict: true },
];

const SMAA_RESULT: SmaaPayload = {
  alternatives: ["x", "y"],
  rai: [
    [0.8, 0.2],
    [0.2, 0.8],
  ],
  pwi: [
    [0, 0.8],
    [0.2, 0],
  ],
  ties: [
    [1, 0],
    [0, 1],
  ],
  expected: { x: -1.2, y: -1.8 },
  ranking: ["x", "y"],
  summary: {
    x: { best: 1, best_share: 0.8, worst: 2, worst_share: 0.2, top: [[1, 0.8]] },
    y: { best: 1, best_share: 0.2, worst: 2, worst_share: 0.8, top: [[2, 0.8]] },
  },
  n_samples: 100,
  config: {},
};

/** In-memory stand-in for the service: two statements conflict when both
 * are enabled, statements referencing "ZZ" are rejected with 422. */
function fakeService() {
  let version = 1;
  let current: Statement[] = STATEMENTS.slice();
  const problemPayload = () => ({
    id: "p1",
    version,
    problem: {
      name: "fake",
      scale: { alpha: 0, beta: 30, breakpoints: [0, 30] },
      capacity_variant: "interval",
      capacity_kind: "additive",
      criteria: [{ id: "M", name: "M" }],
      statements: current,
    },
    evaluations: { alternatives: ["B", "C", "E", "F"], criteria: ["M"], values: [[1], [2], [3], [4]] },
    statement_labels: current.map((s) => describeStatement(s)),
  });
  const json = (status: number, body: unknown) =>
    new Response(JSON.stringify(body), { status, headers: { "content-type": "application/json" } });

  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    if (url.endsWith("/problems") && method === "POST") {
      return json(201, problemPayload());
    }
    if (url.endsWith("/problems/p1/statements") && method === "PUT") {
      const body = JSON.parse(String(init?.body)) as { statements: Statement[] };
      const bad = body.statements.some(
        (s) => s.type === "alt_preference" && (s.a === "ZZ" || s.b === "ZZ"),
      );
      if (bad) {
        return json(422, { error: { code: "invalid_statement", message: "unknown alternative 'ZZ'" } });
      }
      current = body.statements;
      version += 1;
      return json(200, problemPayload());
    }
    if (url.endsWith("/problems/p1/feasibility")) {
      const conflicting = current.length >= 2;
      return json(200, {
        version,
        epsilon_star: conflicting ? 0 : 1,
        compatible: !conflicting,
        conflicts: conflicting ? [[0, 1]] : [],
      });
    }
    if (url.endsWith("/problems/p1/smaa") && method === "POST") {
      return json(202, { job_id: "j1", problem_id: "p1", version, status: "running", result: null, error: null });
    }
    if (url.endsWith("/jobs/j1")) {
      return json(200, { job_id: "j1", problem_id: "p1", version, status: "done", result: SMAA_RESULT, error: null });
    }
    return json(404, { error: { code: "unknown", message: url } });
  };
  return fetchImpl;
}

function makeSession() {
  return new Session(new WorkbenchApi("http://fake", fakeService()));
}

describe("session state machine", () => {
  it("opens a fixture and reports the diagnosed conflict", async () => {
    const session = makeSession();
    const state = await session.openFixture("students_weighted_sum");
    expect(state.version).toBe(1);
    expect(state.feasibility?.data.compatible).toBe(false);
    expect(state.feasibility?.data.conflicts).toEqual([[0, 1]]);
    expect(conflictToMaster(state, [0, 1])).toEqual([0, 1]);
  });

  it("toggling a conflicting statement flips feasibility and bumps the version", async () => {
    const session = makeSession();
    await session.openFixture("students_weighted_sum");
    const state = await session.toggleStatement(1);
    expect(state.enabled).toEqual([true, false]);
    expect(state.version).toBe(2);
    expect(state.feasibility?.data.compatible).toBe(true);
    expect(activeMasterIndices(state)).toEqual([0]);
  });

  it("conflict indices map through disabled statements", async () => {
    const session = makeSession();
    const state0 = await session.openFixture("students_weighted_sum");
    // with statement 0 disabled, active index 0 is master index 1
    const state = { ...state0, enabled: [false, true] };
    expect(conflictToMaster(state, [0])).toEqual([1]);
  });

  it("results panels go stale after an edit (version stamp mismatch)", async () => {
    const session = makeSession();
    await session.openFixture("students_weighted_sum");
    await session.toggleStatement(1); // version 2, compatible
    await session.runSmaa();
    let state = session.getState();
    expect(state.smaa?.version).toBe(2);
    expect(isStale(state, state.smaa)).toBe(false);
    state = await session.toggleStatement(1); // version 3
    expect(state.version).toBe(3);
    expect(isStale(state, state.smaa)).toBe(true);
  });

  it("a rejected statement surfaces inline and leaves state unchanged", async () => {
    const session = makeSession();
    await session.openFixture("students_weighted_sum");
    const before = session.getState();
    const state = await session.addStatement({
      type: "alt_preference",
      a: "ZZ",
      b: "B",
      strict: true,
    });
    expect(state.inlineError).toContain("invalid_statement");
    expect(state.statements).toHaveLength(before.statements.length);
    expect(state.version).toBe(before.version);
  });

  it("retract is a one-click disable", async () => {
    const session = makeSession();
    await session.openFixture("students_weighted_sum");
    const state = await session.retractStatement(0);
    expect(state.enabled[0]).toBe(false);
    expect(state.feasibility?.data.compatible).toBe(true);
  });
});

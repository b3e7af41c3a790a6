import { describe, expect, it } from "vitest";

import {
  renderBanner,
  renderExpectedRanking,
  renderPwiMatrix,
  renderRaiHeatmap,
  renderStatementList,
  staleBadge,
} from "../src/render.js";
import type { SessionState } from "../src/state.js";
import type { SmaaPayload } from "../src/types.js";

function baseState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    problemId: "p1",
    name: "demo",
    version: 1,
    alternatives: ["a", "b"],
    criteria: ["M"],
    evaluations: [[1], [2]],
    statements: [
      { type: "alt_preference", a: "C", b: "B", strict: true },
      { type: "alt_preference", a: "E", b: "F", strict: true },
    ],
    labels: ["C > B", "E > F"],
    enabled: [true, true],
    feasibility: null,
    ror: null,
    smaa: null,
    indices: null,
    inlineError: null,
    jobRunning: false,
    ...overrides,
  };
}

const SMAA: SmaaPayload = {
  alternatives: ["U16", "U5"],
  rai: [
    [0.6084, 0.3916],
    [0.3916, 0.6084],
  ],
  pwi: [
    [0, 0.82043],
    [0.17957, 0],
  ],
  ties: [
    [1, 0.0],
    [0.0, 1],
  ],
  expected: { U16: -1.39, U5: -1.61 },
  ranking: ["U16", "U5"],
  summary: {
    U16: { best: 1, best_share: 0.6084, worst: 2, worst_share: 0.3916, top: [[1, 0.6084]] },
    U5: { best: 1, best_share: 0.3916, worst: 2, worst_share: 0.6084, top: [[2, 0.6084]] },
  },
  n_samples: 1000,
  config: {},
};

describe("feasibility banner", () => {
  it("renders the compatible state with epsilon*", () => {
    const html = renderBanner(
      baseState({
        feasibility: {
          version: 1,
          data: { version: 1, epsilon_star: 0.25, compatible: true, conflicts: [] },
        },
      }),
    );
    expect(html).toContain('data-state="compatible"');
    expect(html).toContain("0.2500");
  });

  it("renders conflicts with one-click retraction buttons", () => {
    const html = renderBanner(
      baseState({
        feasibility: {
          version: 1,
          data: { version: 1, epsilon_star: 0, compatible: false, conflicts: [[0, 1]] },
        },
      }),
    );
    expect(html).toContain('data-state="incompatible"');
    expect(html).toContain("C &gt; B");
    expect(html).toContain('data-action="retract" data-idx="0"');
    expect(html).toContain('data-action="retract" data-idx="1"');
  });

  it("maps conflict indices through disabled statements", () => {
    const html = renderBanner(
      baseState({
        enabled: [false, true],
        feasibility: {
          version: 1,
          data: { version: 1, epsilon_star: 0, compatible: false, conflicts: [[0]] },
        },
      }),
    );
    // active index 0 is master statement 1
    expect(html).toContain('data-action="retract" data-idx="1"');
    expect(html).toContain("E &gt; F");
  });
});

describe("statement editor list", () => {
  it("renders toggles with checked state and conflict highlight", () => {
    const html = renderStatementList(
      baseState({
        enabled: [true, false],
        feasibility: {
          version: 1,
          data: { version: 1, epsilon_star: 0, compatible: false, conflicts: [[0]] },
        },
      }),
    );
    expect(html).toContain('data-action="toggle" data-idx="0" checked');
    expect(html).toContain('data-action="toggle" data-idx="1"');
    expect(html).toContain("in-conflict");
  });

  it("surfaces inline errors", () => {
    const html = renderStatementList(baseState({ inlineError: "invalid_statement: nope" }));
    expect(html).toContain("inline-error");
    expect(html).toContain("invalid_statement");
  });
});

describe("results dashboard", () => {
  it("marks the row maximum in the rank-acceptability heatmap", () => {
    const html = renderRaiHeatmap(SMAA);
    expect(html).toContain(
      '<td class="cell row-max" data-alt="U16" data-rank="1"',
    );
    expect(html).toContain(
      '<td class="cell row-max" data-alt="U5" data-rank="2"',
    );
  });

  it("shows visually complete rows (100%)", () => {
    const html = renderRaiHeatmap(SMAA);
    const totals = html.match(/class="row-total">([\d.]+)%/g) ?? [];
    expect(totals).toHaveLength(2);
    for (const total of totals) {
      expect(total).toContain("100.00%");
    }
  });

  it("annotates ties in the pairwise matrix", () => {
    const withTies: SmaaPayload = {
      ...SMAA,
      pwi: [
        [0, 0.5],
        [0.3, 0],
      ],
      ties: [
        [1, 0.2],
        [0.2, 1],
      ],
    };
    const html = renderPwiMatrix(withTies);
    expect(html).toContain('class="tie"');
    expect(html).toContain("ties: 20.00%");
    // tie-free cells carry no annotation
    expect(renderPwiMatrix(SMAA)).not.toContain('class="tie"');
  });

  it("sorts the expected ranking list by E", () => {
    const html = renderExpectedRanking(SMAA);
    const first = html.indexOf("U16");
    const second = html.indexOf("U5");
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(html).toContain("E = -1.390");
  });

  it("flags stale panels", () => {
    const state = baseState({ version: 3, smaa: { version: 2, data: SMAA } });
    expect(staleBadge(state, state.smaa)).toContain("stale");
    const fresh = baseState({ version: 2, smaa: { version: 2, data: SMAA } });
    expect(staleBadge(fresh, fresh.smaa)).toBe("");
  });
});

describe("degenerate dashboards", () => {
  it("renders a single 100% cell for a one-alternative problem", () => {
    const single: SmaaPayload = {
      alternatives: ["only"],
      rai: [[1.0]],
      pwi: [[0]],
      ties: [[1]],
      expected: { only: -1 },
      ranking: ["only"],
      summary: { only: { best: 1, best_share: 1, worst: 1, worst_share: 1, top: [[1, 1]] } },
      n_samples: 10,
      config: {},
    };
    const html = renderRaiHeatmap(single);
    const cells = html.match(/data-rank="/g) ?? [];
    expect(cells).toHaveLength(1);
    expect(html).toContain('class="cell row-max"');
    expect(html).toContain("100.0");
  });
});

/**
 * End-to-end checks against a real workbench service spawned as a child
 * process: the weighted-sum conflict toggle flips the feasibility banner,
 * and the university dashboard shows the top university's rank-1 cell as
 * its row maximum.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { WorkbenchApi } from "../src/api.js";
import { renderBanner, renderRaiHeatmap } from "../src/render.js";
import { Session } from "../src/state.js";

const PORT = 18_600 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/fixtures`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not come up");
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "ldchoquet.workbench.cli", "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  service?.kill();
});

describe("elicitation loop against the live service", () => {
  it("toggling a conflicting statement flips the feasibility banner", async () => {
    const session = new Session(new WorkbenchApi(BASE));
    let state = await session.openFixture("students_weighted_sum");
    expect(state.feasibility?.data.compatible).toBe(false);
    expect(renderBanner(state)).toContain('data-state="incompatible"');
    expect(renderBanner(state)).toContain('data-action="retract"');

    state = await session.toggleStatement(1);
    expect(state.feasibility?.data.compatible).toBe(true);
    expect(renderBanner(state)).toContain('data-state="compatible"');

    // toggling it back restores the conflict
    state = await session.toggleStatement(1);
    expect(renderBanner(state)).toContain('data-state="incompatible"');
  });

  it("a statement with an unknown alternative is rejected inline", async () => {
    const session = new Session(new WorkbenchApi(BASE));
    await session.openFixture("students_interval");
    const state = await session.addStatement({
      type: "alt_preference",
      a: "ZZ",
      b: "B",
      strict: true,
    });
    expect(state.inlineError).toContain("invalid_statement");
  });

  it("statement edits mark existing result panels stale", async () => {
    const session = new Session(new WorkbenchApi(BASE));
    await session.openFixture("students_interval");
    await session.runSmaa({ samples: 2000, seed: 3 });
    let state = session.getState();
    expect(state.smaa?.data.rai.length).toBe(3);
    expect(state.smaa?.version).toBe(state.version);
    state = await session.toggleStatement(0);
    expect(state.smaa?.version).not.toBe(state.version);
  });

  it("the university dashboard shows U16's rank-1 cell as the row maximum", async () => {
    const session = new Session(new WorkbenchApi(BASE));
    let state = await session.openFixture("universities");
    expect(state.feasibility?.data.compatible).toBe(true);
    state = await session.runSmaa({ samples: 20_000, seed: 17 });
    const smaa = state.smaa?.data;
    expect(smaa).toBeTruthy();
    const html = renderRaiHeatmap(smaa!);
    expect(html).toContain('<td class="cell row-max" data-alt="U16" data-rank="1"');
    // and the expected ranking puts U16 first, U10 last
    expect(smaa!.ranking[0]).toBe("U16");
    expect(smaa!.ranking[smaa!.ranking.length - 1]).toBe("U10");
  }, 180_000);
});

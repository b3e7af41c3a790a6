import { WorkbenchApi } from "./api.js";
import { renderBanner, renderResultsPanels, renderStatementList } from "./render.js";
import { Session } from "./state.js";
import type { Statement } from "./types.js";

/** Browser wiring: mounts the session into #app and delegates events. */
export function mount(root: HTMLElement, baseUrl = ""): Session {
  const api = new WorkbenchApi(baseUrl);
  const session = new Session(api);

  const draw = () => {
    const state = session.getState();
    root.innerHTML = `
      <header>
        <h1>${state.name || "ldchoquet"}</h1>
        <div id="banner">${renderBanner(state)}</div>
      </header>
      <main>
        <section class="editor">
          <h2>preference statements</h2>
          ${renderStatementList(state)}
          <form id="add-preference">
            <input name="a" placeholder="alternative a" required>
            <select name="strict"><option value="strict">&gt;</option><option value="weak">&ge;</option></select>
            <input name="b" placeholder="alternative b" required>
            <button type="submit">add</button>
          </form>
          <div class="actions">
            <button data-action="ror">necessary / possible</button>
            <button data-action="smaa" ${state.jobRunning ? "disabled" : ""}>run SMAA</button>
            <button data-action="indices">importance / interaction</button>
          </div>
        </section>
        <section class="results">${renderResultsPanels(state)}</section>
      </main>`;
  };

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    const idx = Number(target.dataset.idx ?? "-1");
    if (action === "toggle") void session.toggleStatement(idx).then(draw);
    if (action === "retract") void session.retractStatement(idx).then(draw);
    if (action === "ror") void session.loadRor().then(draw);
    if (action === "smaa") {
      draw();
      void session.runSmaa().then(draw);
    }
    if (action === "indices") void session.loadIndices().then(draw);
  });

  root.addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (form.id !== "add-preference") return;
    event.preventDefault();
    const data = new FormData(form);
    const statement: Statement = {
      type: "alt_preference",
      a: String(data.get("a")),
      b: String(data.get("b")),
      strict: data.get("strict") === "strict",
    };
    void session.addStatement(statement).then(draw);
  });

  const params = new URLSearchParams(window.location.search);
  void session.openFixture(params.get("fixture") ?? "students_interval").then(draw);
  return session;
}

declare global {
  interface Window {
    ldchoquetMount: typeof mount;
  }
}

if (typeof window !== "undefined") {
  window.ldchoquetMount = mount;
}

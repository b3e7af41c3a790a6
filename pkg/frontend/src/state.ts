import { ApiError, WorkbenchApi } from "./api.js";
import { pollJob } from "./poll.js";
import type {
  Feasibility,
  IndicesPayload,
  ProblemPayload,
  RorPayload,
  SmaaPayload,
  Statement,
} from "./types.js";

/** A result panel remembers the problem version it was computed for. */
export interface Panel<T> {
  version: number;
  data: T;
}

export interface SessionState {
  problemId: string;
  name: string;
  /** version of the statement set currently on the server */
  version: number;
  alternatives: string[];
  criteria: string[];
  evaluations: number[][];
  /** full statement list ever entered; toggles decide what the server sees */
  statements: Statement[];
  labels: string[];
  enabled: boolean[];
  feasibility: Panel<Feasibility> | null;
  ror: Panel<RorPayload> | null;
  smaa: Panel<SmaaPayload> | null;
  indices: Panel<IndicesPayload> | null;
  inlineError: string | null;
  jobRunning: boolean;
}

/** Indices (into the full list) of the statements the server currently has. */
export function activeMasterIndices(state: SessionState): number[] {
  return state.enabled.flatMap((on, idx) => (on ? [idx] : []));
}

/** Map a conflict reported against the active subset back to full indices. */
export function conflictToMaster(state: SessionState, conflict: number[]): number[] {
  const active = activeMasterIndices(state);
  return conflict.map((k) => active[k]);
}

export function isStale<T>(state: SessionState, panel: Panel<T> | null): boolean {
  return panel !== null && panel.version !== state.version;
}

/**
 * The elicitation session: one problem on the server, a toggleable
 * statement list, and result panels stamped with the version they were
 * computed for.  Every mutation round-trips to the server and refreshes
 * feasibility; optimistic updates are deliberately absent.
 */
export class Session {
  private state!: SessionState;

  constructor(private readonly api: WorkbenchApi) {}

  getState(): SessionState {
    return this.state;
  }

  private adopt(payload: ProblemPayload, keepPanels = false): void {
    const previous = this.state;
    this.state = {
      problemId: payload.id,
      name: payload.problem.name,
      version: payload.version,
      alternatives: payload.evaluations.alternatives,
      criteria: payload.evaluations.criteria,
      evaluations: payload.evaluations.values,
      statements: previous?.statements ?? payload.problem.statements.slice(),
      labels: previous?.labels ?? payload.statement_labels.slice(),
      enabled: previous?.enabled ?? payload.problem.statements.map(() => true),
      feasibility: keepPanels ? (previous?.feasibility ?? null) : null,
      ror: keepPanels ? (previous?.ror ?? null) : null,
      smaa: keepPanels ? (previous?.smaa ?? null) : null,
      indices: keepPanels ? (previous?.indices ?? null) : null,
      inlineError: null,
      jobRunning: previous?.jobRunning ?? false,
    };
  }

  async openFixture(name: string): Promise<SessionState> {
    this.adopt(await this.api.createFromFixture(name));
    await this.refreshFeasibility();
    return this.state;
  }

  async open(problem: object, evaluationsCsv: string): Promise<SessionState> {
    this.adopt(await this.api.createProblem(problem, evaluationsCsv));
    await this.refreshFeasibility();
    return this.state;
  }

  async refreshFeasibility(): Promise<SessionState> {
    const data = await this.api.feasibility(this.state.problemId);
    this.state = { ...this.state, feasibility: { version: data.version, data } };
    return this.state;
  }

  /** Push the enabled subset; panels computed for older versions go stale. */
  private async pushStatements(): Promise<void> {
    const active = activeMasterIndices(this.state).map((k) => this.state.statements[k]);
    const payload = await this.api.putStatements(this.state.problemId, active);
    this.state = { ...this.state, version: payload.version, inlineError: null };
    await this.refreshFeasibility();
  }

  async toggleStatement(masterIdx: number): Promise<SessionState> {
    const enabled = this.state.enabled.slice();
    enabled[masterIdx] = !enabled[masterIdx];
    const rollback = this.state.enabled;
    this.state = { ...this.state, enabled };
    try {
      await this.pushStatements();
    } catch (error) {
      this.state = { ...this.state, enabled: rollback };
      this.surface(error);
    }
    return this.state;
  }

  /** One-click retraction of a diagnosed conflict member. */
  async retractStatement(masterIdx: number): Promise<SessionState> {
    if (this.state.enabled[masterIdx]) {
      return this.toggleStatement(masterIdx);
    }
    return this.state;
  }

  async addStatement(statement: Statement, label?: string): Promise<SessionState> {
    const previous = this.state;
    this.state = {
      ...previous,
      statements: [...previous.statements, statement],
      labels: [...previous.labels, label ?? describeStatement(statement)],
      enabled: [...previous.enabled, true],
    };
    try {
      await this.pushStatements();
    } catch (error) {
      this.state = previous;
      this.surface(error);
    }
    return this.state;
  }

  async loadRor(): Promise<SessionState> {
    const data = await this.api.ror(this.state.problemId);
    this.state = { ...this.state, ror: { version: data.version, data } };
    return this.state;
  }

  async runSmaa(config: Record<string, unknown> = {}): Promise<SessionState> {
    this.state = { ...this.state, jobRunning: true, inlineError: null };
    try {
      const job = await this.api.startSmaa(this.state.problemId, config);
      const done = await pollJob(this.api, job.job_id);
      this.state = {
        ...this.state,
        jobRunning: false,
        smaa: { version: done.version, data: done.result as SmaaPayload },
      };
    } catch (error) {
      this.state = { ...this.state, jobRunning: false };
      this.surface(error);
    }
    return this.state;
  }

  async loadIndices(samples = 4000, seed = 0): Promise<SessionState> {
    const data = await this.api.indices(this.state.problemId, samples, seed);
    this.state = { ...this.state, indices: { version: data.version, data } };
    return this.state;
  }

  private surface(error: unknown): void {
    const message =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    this.state = { ...this.state, inlineError: message };
  }
}

/** Fallback label for statements entered through the editor. */
export function describeStatement(statement: Statement): string {
  switch (statement.type) {
    case "alt_preference":
      return `${statement.a} ${statement.strict ? ">" : ">="} ${statement.b}`;
    case "importance":
      return `importance ${statement.i} ${statement.strict ? ">" : ">="} ${statement.j}`;
    case "interaction":
      return `interaction ${statement.i},${statement.j} ${statement.sign}`;
    case "full_ranking":
      return "ranking " + statement.groups.map((group) => group.join("~")).join(" > ");
  }
}

/** Wire types of the workbench HTTP API, mirrored verbatim. */

export type StatementRange =
  | { kind: "comprehensive" }
  | { kind: "interval"; r: number }
  | { kind: "levels"; lo: number; hi: number };

export type Statement =
  | { type: "alt_preference"; a: string; b: string; strict: boolean }
  | { type: "importance"; i: string; j: string; strict: boolean; range: StatementRange }
  | { type: "interaction"; i: string; j: string; sign: "positive" | "negative" | "zero"; range: StatementRange }
  | { type: "full_ranking"; groups: string[][] };

export interface ProblemDoc {
  name: string;
  scale: { alpha: number; beta: number; breakpoints: number[] };
  capacity_variant: string;
  capacity_kind: string;
  criteria: { id: string; name: string }[];
  statements: Statement[];
  ranked_alternatives?: string[];
  smaa?: Record<string, unknown>;
}

export interface ProblemPayload {
  id: string;
  version: number;
  problem: ProblemDoc;
  evaluations: { alternatives: string[]; criteria: string[]; values: number[][] };
  statement_labels: string[];
}

export interface Feasibility {
  version: number;
  epsilon_star: number | null;
  compatible: boolean;
  conflicts: number[][];
}

export interface RorPayload {
  version: number;
  alternatives: string[];
  necessary: boolean[][];
  possible: boolean[][];
  necessary_pairs: [string, string][];
}

export interface PositionSummary {
  best: number;
  best_share: number;
  worst: number;
  worst_share: number;
  top: [number, number][];
}

export interface SmaaPayload {
  alternatives: string[];
  rai: number[][];
  pwi: number[][];
  ties: number[][];
  expected: Record<string, number>;
  ranking: string[];
  summary: Record<string, PositionSummary>;
  n_samples: number;
  config: Record<string, unknown>;
}

export interface JobPayload {
  job_id: string;
  problem_id: string;
  version: number;
  status: "running" | "done" | "failed";
  result: SmaaPayload | null;
  error: string | null;
}

export interface IndicesPayload {
  version: number;
  importance: {
    labels: string[];
    per_level: Record<string, number[]>;
    comprehensive: Record<string, number>;
  };
  interaction: {
    labels: string[];
    per_level: Record<string, number[]>;
    comprehensive: Record<string, number>;
  };
}

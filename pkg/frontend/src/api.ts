import type {
  Feasibility,
  IndicesPayload,
  JobPayload,
  ProblemPayload,
  RorPayload,
  Statement,
} from "./types.js";

/** Error carrying the service's machine-readable code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the workbench endpoints; no computation here. */
export class WorkbenchApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const error = (body as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(
        response.status,
        error?.code ?? "unknown_error",
        error?.message ?? `request failed with ${response.status}`,
      );
    }
    return body as T;
  }

  createFromFixture(name: string): Promise<ProblemPayload> {
    return this.request("/problems", {
      method: "POST",
      body: JSON.stringify({ fixture: name }),
    });
  }

  createProblem(problem: object, evaluationsCsv: string): Promise<ProblemPayload> {
    return this.request("/problems", {
      method: "POST",
      body: JSON.stringify({ problem, evaluations_csv: evaluationsCsv }),
    });
  }

  getProblem(id: string): Promise<ProblemPayload> {
    return this.request(`/problems/${id}`);
  }

  putStatements(id: string, statements: Statement[]): Promise<ProblemPayload> {
    return this.request(`/problems/${id}/statements`, {
      method: "PUT",
      body: JSON.stringify({ statements }),
    });
  }

  feasibility(id: string): Promise<Feasibility> {
    return this.request(`/problems/${id}/feasibility`);
  }

  ror(id: string): Promise<RorPayload> {
    return this.request(`/problems/${id}/ror`);
  }

  startSmaa(id: string, config: Record<string, unknown> = {}): Promise<JobPayload> {
    return this.request(`/problems/${id}/smaa`, {
      method: "POST",
      body: JSON.stringify(config),
    });
  }

  job(id: string): Promise<JobPayload> {
    return this.request(`/jobs/${id}`);
  }

  indices(id: string, samples = 4000, seed = 0): Promise<IndicesPayload> {
    return this.request(`/problems/${id}/indices?samples=${samples}&seed=${seed}`);
  }
}

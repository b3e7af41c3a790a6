import type { WorkbenchApi } from "./api.js";
import type { JobPayload } from "./types.js";

/**
 * Poll a SMAA job until it leaves the running state.
 * Resolves with the finished job; rejects when the job failed.
 */
export async function pollJob(
  api: WorkbenchApi,
  jobId: string,
  intervalMs = 300,
  onTick?: (job: JobPayload) => void,
): Promise<JobPayload> {
  for (;;) {
    const job = await api.job(jobId);
    onTick?.(job);
    if (job.status === "done") return job;
    if (job.status === "failed") throw new Error(job.error ?? "SMAA job failed");
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
}

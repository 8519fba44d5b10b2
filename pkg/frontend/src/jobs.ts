/** Job polling. Panes only ever render completed artifacts, so the poller
 * is the single place that decides when a job is visible as finished. */

import { ApiClient, JobInfo } from "./api.js";

export class JobFailure extends Error {
  constructor(public job: JobInfo) {
    super(job.error ?? `job ${job.id} failed`);
    this.name = "JobFailure";
  }
}

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  /** Injectable for tests; defaults to a real timer. */
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

/** Poll until the job reaches a terminal state. Resolves with the done job,
 * throws JobFailure for a failed one. The first poll happens immediately,
 * so a job that is already terminal never waits a full interval. */
export async function pollUntilDone(
  client: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobInfo> {
  const intervalMs = options.intervalMs ?? 250;
  const timeoutMs = options.timeoutMs ?? 120_000;
  const sleep = options.sleep ?? defaultSleep;
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const job = await client.job(jobId);
    if (job.status === "done") return job;
    if (job.status === "failed") throw new JobFailure(job);
    if (Date.now() >= deadline) {
      throw new Error(`job ${jobId} still ${job.status} after ${timeoutMs}ms`);
    }
    await sleep(intervalMs);
  }
}

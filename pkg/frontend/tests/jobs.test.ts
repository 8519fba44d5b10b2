import { describe, expect, it, vi } from "vitest";

import { ApiClient, JobInfo } from "../src/api.js";
import { JobFailure, pollUntilDone } from "../src/jobs.js";

function clientWithJobStates(states: Partial<JobInfo>[]): {
  client: ApiClient;
  polls: () => number;
} {
  let call = 0;
  const fetchFn = vi.fn(async () => {
    const state = states[Math.min(call, states.length - 1)]!;
    call += 1;
    return new Response(
      JSON.stringify({
        id: "s1.j1",
        kind: "cluster",
        status: "queued",
        result: null,
        error: null,
        ...state,
      }),
      { status: 200 },
    );
  });
  return { client: new ApiClient("", fetchFn), polls: () => call };
}

const instantSleep = () => Promise.resolve();

describe("job polling", () => {
  it("resolves with the done job", async () => {
    const { client } = clientWithJobStates([
      { status: "running" },
      { status: "done", result: "a3" },
    ]);
    const job = await pollUntilDone(client, "s1.j1", { sleep: instantSleep });
    expect(job.status).toBe("done");
    expect(job.result).toBe("a3");
  });

  it("sees an already-terminal job on the first poll without sleeping", async () => {
    const { client, polls } = clientWithJobStates([{ status: "done", result: "a1" }]);
    const sleep = vi.fn(instantSleep);
    await pollUntilDone(client, "s1.j1", { sleep });
    expect(polls()).toBe(1);
    expect(sleep).not.toHaveBeenCalled();
  });

  it("throws JobFailure with the server's error text", async () => {
    const { client } = clientWithJobStates([
      { status: "running" },
      { status: "failed", error: "RuntimeError: boom" },
    ]);
    await expect(
      pollUntilDone(client, "s1.j1", { sleep: instantSleep }),
    ).rejects.toSatisfy(
      (error) => error instanceof JobFailure && error.message === "RuntimeError: boom",
    );
  });

  it("gives up after the timeout", async () => {
    const { client } = clientWithJobStates([{ status: "running" }]);
    await expect(
      pollUntilDone(client, "s1.j1", { sleep: instantSleep, timeoutMs: 0 }),
    ).rejects.toThrow(/still running/);
  });
});

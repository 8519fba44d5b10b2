/** Typed client for the pipeline HTTP API. All analysis numbers shown in the
 * UI come from these payloads; the client never computes any itself. */

export interface StepRequest {
  kind: "prepare" | "embed" | "cluster" | "train";
  params: Record<string, unknown>;
  seed?: number;
}

export interface JobInfo {
  id: string;
  kind: string;
  status: "queued" | "running" | "done" | "failed";
  result: string | null;
  error: string | null;
}

export interface ArtifactInfo {
  id: string;
  kind: string;
  payload: Record<string, unknown>;
  provenance: {
    operation: string;
    params: Record<string, unknown>;
    inputs: string[];
    created: string;
  };
}

export interface MatrixPayload {
  entityIds: string[];
  values: number[][];
  similarityValues: number[][];
  transformer: string;
  planDigest: string;
}

export interface EmbeddingPayload {
  entityIds: string[];
  coordinates: number[][];
  dimension: number;
  stress: number;
  stressTrace: number[];
  method: string;
}

export interface LabelsPayload {
  entityIds: string[];
  labels: number[];
  method: string;
  clusters: number;
  details?: SplitDetail[];
}

export interface SplitDetail {
  method?: string;
  cutValue?: number;
  expectation?: number;
  eigenvalue?: number;
  trace?: number[];
  level: number;
  indices: number[];
  stopped?: boolean;
}

export interface EntityTableCell {
  id: string;
  label: string;
}

export interface EntityTablePayload {
  columns: string[];
  rows: {
    id: string;
    references: Record<string, string>;
    values: Record<string, EntityTableCell[]>;
  }[];
}

export interface IngestReport {
  accepted: string[];
  rejected: {
    entity: string;
    reason: string;
    attribute?: string;
    values?: string[];
  }[];
}

/** Error body shape shared by every non-2xx response. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public context: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const data = await response.json();
    if (!response.ok) {
      throw new ApiError(
        response.status,
        data.code ?? "unknown",
        data.message ?? response.statusText,
        data.context ?? {},
      );
    }
    return data as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  createSession(name: string): Promise<{ id: string; name: string }> {
    return this.request("POST", "/api/sessions", { name });
  }

  uploadTaxonomy(sessionId: string, document: unknown): Promise<{ name: string }> {
    return this.request("POST", `/api/taxonomies?session=${sessionId}`, document);
  }

  listTaxonomies(sessionId: string): Promise<{ name: string; nodes: number }[]> {
    return this.request("GET", `/api/taxonomies?session=${sessionId}`);
  }

  ingestEntities(sessionId: string, entities: unknown): Promise<IngestReport> {
    return this.request("POST", `/api/entities?session=${sessionId}`, entities);
  }

  submitStep(
    sessionId: string,
    step: StepRequest,
  ): Promise<{ jobId: string; status: string }> {
    return this.request("POST", `/api/sessions/${sessionId}/steps`, step);
  }

  job(jobId: string): Promise<JobInfo> {
    return this.request("GET", `/api/jobs/${jobId}`);
  }

  artifact(sessionId: string, artifactId: string): Promise<ArtifactInfo> {
    return this.request(
      "GET",
      `/api/sessions/${sessionId}/artifacts/${artifactId}`,
    );
  }

  entityTable(sessionId: string, artifactId: string): Promise<EntityTablePayload> {
    return this.request(
      "GET",
      `/api/sessions/${sessionId}/entity-table?artifact=${artifactId}`,
    );
  }

  replay(sessionId: string, artifactId: string): Promise<{ id: string; identical: boolean }> {
    return this.request(
      "GET",
      `/api/sessions/${sessionId}/artifacts/${artifactId}/replay`,
    );
  }

  report(sessionId: string, artifactIds?: string[]): Promise<{ report: string }> {
    return this.request("POST", `/api/sessions/${sessionId}/report`, {
      artifacts: artifactIds ?? null,
    });
  }

  sessionSummary(sessionId: string): Promise<{
    id: string;
    name: string;
    taxonomies: string[];
    entityCount: number;
    artifacts: { id: string; kind: string }[];
    jobs: { id: string; kind: string; status: string }[];
  }> {
    return this.request("GET", `/api/sessions/${sessionId}`);
  }
}

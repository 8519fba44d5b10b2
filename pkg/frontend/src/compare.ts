/** Cluster-comparison view model: one embedding scattered in up to four
 * panes, each colored by a different label artifact, with the
 * hyperparameters and convergence trace that produced each labeling. The
 * re-run builder is the steering loop: take a pane's parameters, apply the
 * analyst's edits, and post a fresh cluster step. */

import type { ArtifactInfo, EmbeddingPayload, LabelsPayload, SplitDetail, StepRequest } from "./api.js";

export const MAX_PANES = 4;

export interface Pane {
  artifactId: string;
  labels: number[];
  method: string;
  /** Cluster-step parameters straight from the artifact's provenance. */
  parameters: Record<string, unknown>;
  /** Total cut value across splits, when the backend reports one. */
  cutValue: number | null;
  /** Best-so-far optimizer trace of the first split, for the sparkline. */
  trace: number[];
}

export interface CompareState {
  embedding: EmbeddingPayload;
  panes: Pane[];
}

export function newCompare(embedding: EmbeddingPayload): CompareState {
  return { embedding, panes: [] };
}

function paneFromArtifact(artifact: ArtifactInfo): Pane {
  const payload = artifact.payload as unknown as LabelsPayload;
  const details: SplitDetail[] = payload.details ?? [];
  const cuts = details
    .map((d) => d.cutValue)
    .filter((v): v is number => typeof v === "number");
  const firstTrace = details.find((d) => d.trace && d.trace.length > 0);
  return {
    artifactId: artifact.id,
    labels: payload.labels,
    method: payload.method,
    parameters: artifact.provenance.params,
    cutValue: cuts.length > 0 ? cuts.reduce((a, b) => a + b, 0) : null,
    trace: firstTrace?.trace ?? [],
  };
}

/** Add a pane for a labels artifact. Panes must describe the same entities
 * in the same order as the embedding, otherwise colors would silently
 * misalign with points. */
export function addPane(state: CompareState, artifact: ArtifactInfo): CompareState {
  if (state.panes.length >= MAX_PANES) {
    throw new Error(`at most ${MAX_PANES} panes can be compared`);
  }
  const payload = artifact.payload as unknown as LabelsPayload;
  const ids = state.embedding.entityIds;
  if (
    payload.entityIds.length !== ids.length ||
    payload.entityIds.some((id, i) => id !== ids[i])
  ) {
    throw new Error("labels artifact covers a different entity subset");
  }
  return { ...state, panes: [...state.panes, paneFromArtifact(artifact)] };
}

export interface Axes {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

/** One axis range for all panes, computed from the embedding only, so the
 * same point sits at the same spot in every pane. */
export function sharedAxes(embedding: EmbeddingPayload): Axes {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const point of embedding.coordinates) {
    const x = point[0] ?? 0;
    const y = point[1] ?? 0;
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  return { xMin, xMax, yMin, yMax };
}

/** Polyline points for an SVG sparkline of an optimizer trace, scaled to
 * the given box. A flat trace draws a horizontal midline. */
export function sparklinePoints(
  trace: number[],
  width: number,
  height: number,
): string {
  if (trace.length === 0) return "";
  let low = Math.min(...trace);
  let high = Math.max(...trace);
  if (high === low) {
    low -= 0.5;
    high += 0.5;
  }
  const stepX = trace.length > 1 ? width / (trace.length - 1) : 0;
  return trace
    .map((value, i) => {
      const x = i * stepX;
      const y = height - ((value - low) / (high - low)) * height;
      return `${round2(x)},${round2(y)}`;
    })
    .join(" ");
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

/** Build the step request that re-runs a pane's clustering with edited
 * hyperparameters. Everything not edited is carried over verbatim from the
 * pane's provenance, so the request differs from the original run only in
 * the fields the analyst changed. */
export function rerunRequest(
  pane: Pane,
  edits: Record<string, unknown>,
): StepRequest {
  return {
    kind: "cluster",
    params: { ...pane.parameters, ...edits },
  };
}

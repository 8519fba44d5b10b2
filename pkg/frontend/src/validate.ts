/** Client-side form validation for step submission. Mirrors the server's
 * rules so obviously bad requests never become jobs; the server remains the
 * authority and its 400s are surfaced inline regardless. */

export interface FieldError {
  field: string;
  message: string;
}

/** Max-cut bisection produces 2^x parts, so the cluster count must be a
 * power of two and at least 2. */
export function isPowerOfTwoClusters(value: number): boolean {
  return Number.isInteger(value) && value >= 2 && (value & (value - 1)) === 0;
}

export interface ClusterForm {
  artifact: string;
  method: "bruteforce" | "localsearch" | "qaoa" | "vqe" | "kmeans";
  clusters: number;
  reps: number;
  maxTrials: number;
  entanglement: "linear" | "full" | "circular";
  restarts: number;
  seed: number;
}

/** Defaults shown in the form before any interaction. maxTrials matches the
 * server default for the chosen method. */
export function clusterDefaults(
  method: ClusterForm["method"] = "bruteforce",
): ClusterForm {
  return {
    artifact: "",
    method,
    clusters: 2,
    reps: 1,
    maxTrials: method === "qaoa" ? 100 : 400,
    entanglement: "linear",
    restarts: 10,
    seed: 0,
  };
}

export function validateClusterForm(form: ClusterForm): FieldError[] {
  const errors: FieldError[] = [];
  if (!form.artifact) {
    errors.push({ field: "artifact", message: "select a distance matrix" });
  }
  if (form.method !== "kmeans" && !isPowerOfTwoClusters(form.clusters)) {
    errors.push({
      field: "clusters",
      message: "cluster count must be a power of two >= 2",
    });
  }
  if (form.method === "kmeans" && (!Number.isInteger(form.clusters) || form.clusters < 1)) {
    errors.push({ field: "clusters", message: "cluster count must be >= 1" });
  }
  if (!Number.isInteger(form.reps) || form.reps < 1) {
    errors.push({ field: "reps", message: "reps must be >= 1" });
  }
  if (!Number.isInteger(form.maxTrials) || form.maxTrials < 1) {
    errors.push({ field: "maxTrials", message: "max trials must be >= 1" });
  }
  if (!Number.isInteger(form.restarts) || form.restarts < 1) {
    errors.push({ field: "restarts", message: "restarts must be >= 1" });
  }
  return errors;
}

export interface EmbedForm {
  artifact: string;
  method: "mds" | "smacof" | "pca";
  dimension: number;
  seed: number;
}

export function embedDefaults(): EmbedForm {
  return { artifact: "", method: "mds", dimension: 2, seed: 0 };
}

export function validateEmbedForm(form: EmbedForm): FieldError[] {
  const errors: FieldError[] = [];
  if (!form.artifact) {
    errors.push({ field: "artifact", message: "select a distance matrix" });
  }
  if (!Number.isInteger(form.dimension) || form.dimension < 1) {
    errors.push({ field: "dimension", message: "dimension must be >= 1" });
  }
  return errors;
}

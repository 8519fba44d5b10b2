/** Single-page client wiring the view models to the DOM. All analysis
 * lives server-side; this file only renders payloads and posts forms. */

import { ApiClient, ApiError, ArtifactInfo, EmbeddingPayload, MatrixPayload } from "./api.js";
import { buildHeatmap, HeatmapModel } from "./heatmap.js";
import { displayRows } from "./entityTable.js";
import { pollUntilDone } from "./jobs.js";
import {
  addPane,
  CompareState,
  MAX_PANES,
  newCompare,
  rerunRequest,
  sharedAxes,
  sparklinePoints,
} from "./compare.js";
import {
  clusterDefaults,
  validateClusterForm,
  ClusterForm,
  embedDefaults,
  validateEmbedForm,
} from "./validate.js";
import { buildPlan, newPlanForm, PlanForm, resetToDefaults, validatePlanForm } from "./planEditor.js";

const client = new ApiClient("");

interface AppState {
  sessionId: string | null;
  planForm: PlanForm;
  compare: CompareState | null;
  absoluteScale: boolean;
}

const state: AppState = {
  sessionId: null,
  planForm: newPlanForm([]),
  compare: null,
  absoluteScale: false,
};

let taxonomyNames: string[] = [];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function statusLine(text: string, kind: "info" | "error" = "info"): void {
  const bar = document.getElementById("status");
  if (!bar) return;
  bar.textContent = text;
  bar.className = kind;
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    const context = Object.keys(error.context).length
      ? ` (${JSON.stringify(error.context)})`
      : "";
    return `${error.code}: ${error.message}${context}`;
  }
  return String(error);
}

async function ensureSession(): Promise<string> {
  if (state.sessionId) return state.sessionId;
  const created = await client.createSession("browser");
  state.sessionId = created.id;
  statusLine(`session ${created.id}`);
  return created.id;
}

async function uploadFile(input: HTMLInputElement, upload: (doc: unknown) => Promise<unknown>): Promise<void> {
  const file = input.files?.[0];
  if (!file) return;
  const doc = JSON.parse(await file.text());
  await upload(doc);
}

async function refreshArtifacts(): Promise<void> {
  if (!state.sessionId) return;
  const summary = await client.sessionSummary(state.sessionId);
  const list = document.getElementById("artifacts");
  if (!list) return;
  list.replaceChildren();
  for (const artifact of summary.artifacts) {
    const open = el("button", {}, `${artifact.id} (${artifact.kind})`);
    open.addEventListener("click", () => {
      void openArtifact(artifact.id);
    });
    list.append(el("li", {}, open));
  }
}

async function openArtifact(artifactId: string): Promise<void> {
  const sessionId = await ensureSession();
  const artifact = await client.artifact(sessionId, artifactId);
  if (artifact.kind === "distanceMatrix") {
    renderHeatmap(artifact);
  } else if (artifact.kind === "embedding") {
    state.compare = newCompare(artifact.payload as unknown as EmbeddingPayload);
    renderCompare();
  } else if (artifact.kind === "labels") {
    if (!state.compare) {
      statusLine("open an embedding first, then add label artifacts", "error");
      return;
    }
    try {
      state.compare = addPane(state.compare, artifact);
    } catch (error) {
      statusLine(describeError(error), "error");
      return;
    }
    renderCompare();
  } else {
    statusLine(`${artifact.id}: ${JSON.stringify(artifact.payload).slice(0, 200)}`);
  }
}

function renderHeatmap(artifact: ArtifactInfo): void {
  const host = document.getElementById("heatmap");
  if (!host) return;
  const payload = artifact.payload as unknown as MatrixPayload;
  const model: HeatmapModel = buildHeatmap(payload, state.absoluteScale);
  const table = el("table", { class: "heatmap" });
  const header = el("tr", {}, el("th"));
  for (const index of model.indices) header.append(el("th", {}, String(index)));
  table.append(header);
  for (const index of model.indices) {
    const tr = el("tr", {}, el("th", {}, String(index)));
    for (const cell of model.cells[index]!) {
      const td = el("td", { title: cell.hover, style: `background:${cell.color}` });
      td.addEventListener("click", () => {
        void showEntityPair(artifact.id, cell.entities);
      });
      tr.append(td);
    }
    table.append(tr);
  }
  const toggle = el("label", {}, "absolute scale ");
  const box = el("input", { type: "checkbox" });
  box.checked = state.absoluteScale;
  box.addEventListener("change", () => {
    state.absoluteScale = box.checked;
    renderHeatmap(artifact);
  });
  toggle.prepend(box);
  host.replaceChildren(
    el("h3", {}, `${artifact.id} distance heatmap (max ${model.matrixMax.toFixed(5)})`),
    toggle,
    table,
  );
}

async function showEntityPair(artifactId: string, pair: [string, string]): Promise<void> {
  const sessionId = await ensureSession();
  const payload = await client.entityTable(sessionId, artifactId);
  const wanted = payload.rows.filter((r) => r.id === pair[0] || r.id === pair[1]);
  const rows = displayRows({ columns: payload.columns, rows: wanted });
  const host = document.getElementById("entity-table");
  if (!host) return;
  const table = el("table", { class: "entities" });
  table.append(
    el("tr", {}, el("th", {}, "entity"), ...payload.columns.map((c) => el("th", {}, c)), el("th", {}, "links")),
  );
  for (const row of rows) {
    const tr = el("tr", {}, el("td", {}, row.id));
    for (const cell of row.cells) tr.append(el("td", {}, cell));
    const links = el("td", {});
    for (const link of row.links) {
      links.append(el("a", { href: link.url, target: "_blank" }, link.name), " ");
    }
    tr.append(links);
    table.append(tr);
  }
  host.replaceChildren(el("h3", {}, `entities ${pair[0]} and ${pair[1]}`), table);
}

function renderCompare(): void {
  const host = document.getElementById("compare");
  if (!host || !state.compare) return;
  const axes = sharedAxes(state.compare.embedding);
  const panes = el("div", { class: "panes" });
  for (const pane of state.compare.panes) {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("width", "200");
    svg.setAttribute("height", "200");
    const spanX = axes.xMax - axes.xMin || 1;
    const spanY = axes.yMax - axes.yMin || 1;
    state.compare.embedding.coordinates.forEach((point, i) => {
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(10 + (180 * ((point[0] ?? 0) - axes.xMin)) / spanX));
      dot.setAttribute("cy", String(190 - (180 * ((point[1] ?? 0) - axes.yMin)) / spanY));
      dot.setAttribute("r", "4");
      dot.setAttribute("class", `cluster-${pane.labels[i] ?? 0}`);
      svg.append(dot);
    });
    const caption = el(
      "p",
      {},
      `${pane.artifactId} ${pane.method}` +
        (pane.cutValue !== null ? ` cut ${pane.cutValue}` : ""),
    );
    const block = el("div", { class: "pane" }, caption, svg);
    if (pane.trace.length > 0) {
      const spark = document.createElementNS("http://www.w3.org/2000/svg", "svg");
      spark.setAttribute("width", "200");
      spark.setAttribute("height", "40");
      const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
      line.setAttribute("points", sparklinePoints(pane.trace, 200, 40));
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", "black");
      spark.append(line);
      block.append(spark);
    }
    block.append(el("pre", {}, JSON.stringify(pane.parameters, null, 1)));
    const trials = el("input", { type: "number", value: String(pane.parameters["maxTrials"] ?? 100) });
    const rerun = el("button", {}, "re-run with edits");
    rerun.addEventListener("click", () => {
      void submitStepFromPane(pane, { maxTrials: Number(trials.value) });
    });
    block.append(el("div", {}, "max trials ", trials, " ", rerun));
    panes.append(block);
  }
  host.replaceChildren(
    el("h3", {}, `cluster comparison (${state.compare.panes.length}/${MAX_PANES} panes)`),
    panes,
  );
}

async function submitStepFromPane(
  pane: Parameters<typeof rerunRequest>[0],
  edits: Record<string, unknown>,
): Promise<void> {
  const sessionId = await ensureSession();
  try {
    const submitted = await client.submitStep(sessionId, rerunRequest(pane, edits));
    statusLine(`job ${submitted.jobId} running`);
    const job = await pollUntilDone(client, submitted.jobId);
    statusLine(`job ${job.id} done: artifact ${job.result}`);
    await refreshArtifacts();
    if (job.result) await openArtifact(job.result);
  } catch (error) {
    statusLine(describeError(error), "error");
  }
}

function renderPlanEditor(): void {
  const host = document.getElementById("plan-editor");
  if (!host) return;
  const rows = el("div", {});
  state.planForm.attributes.forEach((attribute, index) => {
    const selected = el("input", { type: "checkbox" });
    selected.checked = attribute.selected;
    selected.addEventListener("change", () => {
      state.planForm.attributes[index]!.selected = selected.checked;
    });
    const empty = el("select", {});
    for (const option of ["ignore", "asMaxDistance"]) {
      empty.append(el("option", { value: option }, option));
    }
    empty.value = attribute.emptyAction;
    empty.addEventListener("change", () => {
      state.planForm.attributes[index]!.emptyAction = empty.value as
        | "ignore"
        | "asMaxDistance";
    });
    const taxonomy = el("select", {});
    for (const name of taxonomyNames) {
      taxonomy.append(el("option", { value: name }, name));
    }
    taxonomy.value = attribute.taxonomy;
    taxonomy.addEventListener("change", () => {
      state.planForm.attributes[index]!.taxonomy = taxonomy.value;
    });
    rows.append(
      el(
        "div",
        {},
        selected,
        ` ${attribute.name} `,
        "taxonomy: ",
        taxonomy,
        " empty: ",
        empty,
      ),
    );
  });
  const transformer = el("select", {});
  for (const option of ["squareInverse", "linearInverse"]) {
    transformer.append(el("option", { value: option }, option));
  }
  transformer.value = state.planForm.transformer;
  transformer.addEventListener("change", () => {
    state.planForm.transformer = transformer.value as "squareInverse" | "linearInverse";
  });

  const errorsBox = el("p", { class: "error" });
  const submit = el("button", {}, "prepare distance matrix");
  submit.addEventListener("click", () => {
    const errors = validatePlanForm(state.planForm);
    if (errors.length > 0) {
      errorsBox.textContent = errors.map((e) => `${e.field}: ${e.message}`).join("; ");
      return;
    }
    errorsBox.textContent = "";
    void runStep({ kind: "prepare", params: { plan: buildPlan(state.planForm) } });
  });
  const reset = el("button", {}, "reset to defaults");
  reset.addEventListener("click", () => {
    state.planForm = resetToDefaults(state.planForm);
    renderPlanEditor();
  });
  host.replaceChildren(
    el("h3", {}, "similarity plan"),
    rows,
    el("div", {}, "aggregator: mean, transformer: ", transformer),
    el("div", {}, submit, " ", reset),
    errorsBox,
  );
}

function renderStepForms(): void {
  const host = document.getElementById("step-forms");
  if (!host) return;

  const embedForm = embedDefaults();
  const embedArtifact = el("input", { placeholder: "a1" });
  const embedMethod = el("select", {});
  for (const option of ["mds", "smacof", "pca"]) {
    embedMethod.append(el("option", { value: option }, option));
  }
  const embedErrors = el("p", { class: "error" });
  const embedSubmit = el("button", {}, "embed");
  embedSubmit.addEventListener("click", () => {
    embedForm.artifact = embedArtifact.value;
    embedForm.method = embedMethod.value as typeof embedForm.method;
    const errors = validateEmbedForm(embedForm);
    if (errors.length > 0) {
      embedErrors.textContent = errors.map((e) => `${e.field}: ${e.message}`).join("; ");
      return;
    }
    embedErrors.textContent = "";
    void runStep({
      kind: "embed",
      params: {
        artifact: embedForm.artifact,
        method: embedForm.method,
        dimension: embedForm.dimension,
        seed: embedForm.seed,
      },
    });
  });

  const clusterForm: ClusterForm = clusterDefaults();
  const clusterArtifact = el("input", { placeholder: "a1" });
  const clusterMethod = el("select", {});
  for (const option of ["bruteforce", "localsearch", "qaoa", "vqe", "kmeans"]) {
    clusterMethod.append(el("option", { value: option }, option));
  }
  const clusterCount = el("input", { type: "number", value: "2" });
  const reps = el("input", { type: "number", value: "1" });
  const maxTrials = el("input", { type: "number", value: String(clusterForm.maxTrials) });
  clusterMethod.addEventListener("change", () => {
    maxTrials.value = String(
      clusterDefaults(clusterMethod.value as ClusterForm["method"]).maxTrials,
    );
  });
  const clusterErrors = el("p", { class: "error" });
  const clusterSubmit = el("button", {}, "cluster");
  clusterSubmit.addEventListener("click", () => {
    clusterForm.artifact = clusterArtifact.value;
    clusterForm.method = clusterMethod.value as ClusterForm["method"];
    clusterForm.clusters = Number(clusterCount.value);
    clusterForm.reps = Number(reps.value);
    clusterForm.maxTrials = Number(maxTrials.value);
    const errors = validateClusterForm(clusterForm);
    if (errors.length > 0) {
      clusterErrors.textContent = errors.map((e) => `${e.field}: ${e.message}`).join("; ");
      return;
    }
    clusterErrors.textContent = "";
    void runStep({
      kind: "cluster",
      params: {
        artifact: clusterForm.artifact,
        method: clusterForm.method,
        clusters: clusterForm.clusters,
        reps: clusterForm.reps,
        maxTrials: clusterForm.maxTrials,
        entanglement: clusterForm.entanglement,
        seed: clusterForm.seed,
      },
    });
  });

  host.replaceChildren(
    el("h3", {}, "steps"),
    el("div", {}, "embed: artifact ", embedArtifact, " method ", embedMethod, " ", embedSubmit),
    embedErrors,
    el(
      "div",
      {},
      "cluster: artifact ",
      clusterArtifact,
      " method ",
      clusterMethod,
      " clusters ",
      clusterCount,
      " reps ",
      reps,
      " max trials ",
      maxTrials,
      " ",
      clusterSubmit,
    ),
    clusterErrors,
  );
}

async function runStep(step: Parameters<ApiClient["submitStep"]>[1]): Promise<void> {
  try {
    const sessionId = await ensureSession();
    const submitted = await client.submitStep(sessionId, step);
    statusLine(`job ${submitted.jobId} running`);
    const job = await pollUntilDone(client, submitted.jobId);
    statusLine(`job ${job.id} done: artifact ${job.result}`);
    await refreshArtifacts();
    if (job.result) await openArtifact(job.result);
  } catch (error) {
    statusLine(describeError(error), "error");
  }
}

function wireUploads(): void {
  const taxonomy = document.getElementById("taxonomy-file") as HTMLInputElement | null;
  const entities = document.getElementById("entities-file") as HTMLInputElement | null;
  taxonomy?.addEventListener("change", () => {
    void (async () => {
      const sessionId = await ensureSession();
      try {
        await uploadFile(taxonomy, (doc) => client.uploadTaxonomy(sessionId, doc));
        const names = await client.listTaxonomies(sessionId);
        statusLine(`taxonomies: ${names.map((t) => t.name).join(", ")}`);
      } catch (error) {
        statusLine(describeError(error), "error");
      }
    })();
  });
  entities?.addEventListener("change", () => {
    void (async () => {
      const sessionId = await ensureSession();
      try {
        await uploadFile(entities, async (doc) => {
          const report = await client.ingestEntities(sessionId, doc);
          statusLine(
            `accepted ${report.accepted.length}, rejected ${report.rejected.length}`,
            report.rejected.length > 0 ? "error" : "info",
          );
          const attributes = new Set<string>();
          for (const entity of doc as { attributes: Record<string, unknown> }[]) {
            for (const name of Object.keys(entity.attributes ?? {})) attributes.add(name);
          }
          const taxonomies = await client.listTaxonomies(sessionId);
          taxonomyNames = taxonomies.map((t) => t.name);
          state.planForm = newPlanForm(
            [...attributes].map((name, i) => ({
              name,
              taxonomy: taxonomyNames[i % taxonomyNames.length] ?? "",
            })),
          );
          renderPlanEditor();
        });
      } catch (error) {
        statusLine(describeError(error), "error");
      }
    })();
  });
}

export function start(): void {
  wireUploads();
  renderPlanEditor();
  renderStepForms();
  statusLine("upload a taxonomy and entities to begin");
}

if (typeof document !== "undefined" && document.getElementById("status")) {
  start();
}

/** View model for a distance-matrix artifact rendered as a heatmap.
 * Everything displayed (values, colors, hover text) is derived from the
 * artifact payload alone. */

import { heatColor, scaleTop } from "./colors.js";
import type { MatrixPayload } from "./api.js";

export interface HeatmapCell {
  row: number;
  col: number;
  value: number;
  color: string;
  /** Hover tooltip: "(i, j, distance)". */
  hover: string;
  /** Entities to open in the table when the cell is clicked. */
  entities: [string, string];
}

export interface HeatmapModel {
  /** Row and column header indices, 0..n-1. */
  indices: number[];
  entityIds: string[];
  cells: HeatmapCell[][];
  matrixMax: number;
  scaleMax: number;
  absoluteScale: boolean;
}

export function buildHeatmap(
  payload: Pick<MatrixPayload, "entityIds" | "values">,
  absoluteScale = false,
): HeatmapModel {
  const n = payload.entityIds.length;
  let matrixMax = 0;
  for (const row of payload.values) {
    for (const value of row) {
      if (value > matrixMax) matrixMax = value;
    }
  }
  const top = scaleTop(matrixMax, absoluteScale);
  const cells: HeatmapCell[][] = [];
  for (let i = 0; i < n; i++) {
    const row: HeatmapCell[] = [];
    for (let j = 0; j < n; j++) {
      const value = payload.values[i]![j]!;
      row.push({
        row: i,
        col: j,
        value,
        color: heatColor(value, top),
        hover: `(${i}, ${j}, ${formatDistance(value)})`,
        entities: [payload.entityIds[i]!, payload.entityIds[j]!],
      });
    }
    cells.push(row);
  }
  return {
    indices: Array.from({ length: n }, (_, i) => i),
    entityIds: payload.entityIds,
    cells,
    matrixMax,
    scaleMax: top,
    absoluteScale,
  };
}

function formatDistance(value: number): string {
  const rounded = Math.round(value * 1e5) / 1e5;
  return String(rounded);
}

import { describe, expect, it } from "vitest";

import { buildHeatmap } from "../src/heatmap.js";
import { rgbString, DARKEST_BLUE, DARKEST_RED } from "../src/colors.js";

function zeroMatrix(n: number): number[][] {
  return Array.from({ length: n }, () => Array.from({ length: n }, () => 0));
}

describe("heatmap model", () => {
  it("renders an all-zero matrix uniformly darkest blue", () => {
    const model = buildHeatmap({ entityIds: ["a", "b", "c"], values: zeroMatrix(3) });
    for (const row of model.cells) {
      for (const cell of row) {
        expect(cell.color).toBe(rgbString(DARKEST_BLUE));
      }
    }
  });

  it("keeps the diagonal darkest blue and the maximum darkest red", () => {
    const values = [
      [0, 0.2, 1.1],
      [0.2, 0, 0.6],
      [1.1, 0.6, 0],
    ];
    const model = buildHeatmap({ entityIds: ["a", "b", "c"], values });
    for (let i = 0; i < 3; i++) {
      expect(model.cells[i]![i]!.color).toBe(rgbString(DARKEST_BLUE));
    }
    expect(model.cells[0]![2]!.color).toBe(rgbString(DARKEST_RED));
    expect(model.matrixMax).toBe(1.1);
  });

  it("labels rows and columns 0..n-1 for a 25x25 artifact", () => {
    const ids = Array.from({ length: 25 }, (_, i) => `e${i + 1}`);
    const model = buildHeatmap({ entityIds: ids, values: zeroMatrix(25) });
    expect(model.indices).toHaveLength(25);
    expect(model.indices[0]).toBe(0);
    expect(model.indices[24]).toBe(24);
  });

  it("describes each cell as (i, j, distance) with its entity pair", () => {
    const values = [
      [0, 0.25],
      [0.25, 0],
    ];
    const model = buildHeatmap({ entityIds: ["e1", "e2"], values });
    const cell = model.cells[0]![1]!;
    expect(cell.hover).toBe("(0, 1, 0.25)");
    expect(cell.entities).toEqual(["e1", "e2"]);
  });

  it("uses the absolute scale top when toggled", () => {
    const values = [
      [0, 0.3],
      [0.3, 0],
    ];
    const relative = buildHeatmap({ entityIds: ["a", "b"], values });
    const absolute = buildHeatmap({ entityIds: ["a", "b"], values }, true);
    expect(relative.scaleMax).toBe(0.3);
    expect(relative.cells[0]![1]!.color).toBe(rgbString(DARKEST_RED));
    expect(absolute.scaleMax).toBeCloseTo(Math.SQRT2, 12);
    expect(absolute.cells[0]![1]!.color).not.toBe(rgbString(DARKEST_RED));
  });
});

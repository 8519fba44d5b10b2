/** Display rows for the entity comparison table: selected entities against
 * the plan's attributes, node ids resolved to labels by the server, plus
 * whatever repository links the entity carries. */

import type { EntityTablePayload } from "./api.js";

export const EMPTY_MARKER = "(none)";

export interface DisplayRow {
  id: string;
  /** One rendered cell per column, labels joined with ", ". */
  cells: string[];
  links: { name: string; url: string }[];
}

export function displayRows(payload: EntityTablePayload): DisplayRow[] {
  return payload.rows.map((row) => ({
    id: row.id,
    cells: payload.columns.map((column) => {
      const values = row.values[column] ?? [];
      if (values.length === 0) return EMPTY_MARKER;
      return values.map((v) => v.label).join(", ");
    }),
    links: Object.entries(row.references).map(([name, url]) => ({ name, url })),
  }));
}

/** Rows render identically when every cell matches; ids and links may
 * differ. Used by tests to pin the "same values, same rendering" rule. */
export function cellsEqual(a: DisplayRow, b: DisplayRow): boolean {
  return a.cells.length === b.cells.length && a.cells.every((c, i) => c === b.cells[i]);
}

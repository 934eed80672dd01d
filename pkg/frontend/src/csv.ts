/**
 * Minimal CSV reader for the solver's outputs: a header row followed by
 * numeric rows. Empty cells become NaN (the runner writes them for
 * not-applicable summary columns).
 */

import { readFileSync } from "fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0);
  if (lines.length === 0) throw new Error("empty CSV");
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `row has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    return cells.map((c) => (c.trim() === "" ? NaN : Number(c)));
  });
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf-8"));
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  const values = table.rows.map((r) => r[idx]);
  if (values.length === 0) throw new Error(`column '${name}' is empty`);
  return values;
}

export function hasColumn(table: Table, name: string): boolean {
  return table.columns.includes(name);
}

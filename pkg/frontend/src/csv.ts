/** Reader for the simulator's metrics CSV (header + one numeric row per epoch). */

import { readFileSync } from "node:fs";

export interface Csv {
  columns: string[];
  rows: number[][];
}

export class EmptyCsvError extends Error {
  constructor(path: string) {
    super(`empty CSV (no data rows): ${path}`);
    this.name = "EmptyCsvError";
  }
}

export class MissingColumnError extends Error {
  constructor(column: string, path: string) {
    super(`missing column '${column}' in ${path}`);
    this.name = "MissingColumnError";
  }
}

export function parseCsvText(text: string, path = "<string>"): Csv {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new EmptyCsvError(path);
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${i} of ${path} has ${parts.length} fields, expected ${columns.length}`);
    }
    const row = parts.map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) throw new Error(`non-numeric value '${p}' in row ${i} of ${path}`);
      return v;
    });
    rows.push(row);
  }
  if (rows.length === 0) throw new EmptyCsvError(path);
  return { columns, rows };
}

export function readCsv(path: string): Csv {
  return parseCsvText(readFileSync(path, "utf-8"), path);
}

/** Extract one column by name; the returned array is a fresh copy. */
export function column(csv: Csv, name: string, path = "<csv>"): number[] {
  const idx = csv.columns.indexOf(name);
  if (idx < 0) throw new MissingColumnError(name, path);
  return csv.rows.map((r) => r[idx]);
}

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export type Row = Record<string, string | number>;

/** Parse one CSV file into typed rows, requiring the named columns. */
export function loadCsv(path: string, requiredColumns: string[]): Row[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  const have = new Set(Object.keys(rows[0]));
  for (const col of requiredColumns) {
    if (!have.has(col)) {
      throw new Error(`${path}: missing column "${col}"`);
    }
  }
  return rows;
}

/** Distinct values of one column, in first-appearance order. */
export function distinct(rows: Row[], column: string): (string | number)[] {
  const seen: (string | number)[] = [];
  for (const row of rows) {
    const v = row[column];
    if (!seen.includes(v)) seen.push(v);
  }
  return seen;
}

export function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function stddev(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  return Math.sqrt(mean(values.map((v) => (v - m) * (v - m))));
}

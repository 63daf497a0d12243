import { readFileSync } from "fs";
import Papa from "papaparse";

export type Row = Record<string, unknown>;

export function readTable(path: string): Row[] {
  const text = readFileSync(path, "utf8").trim();
  if (text === "") {
    throw new Error(`empty CSV: ${path}`);
  }
  const parsed = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  // single-column files trip the delimiter auto-detection; that is not an error
  const fatal = parsed.errors.filter((e) => e.code !== "UndetectableDelimiter");
  if (fatal.length > 0) {
    const e = fatal[0];
    throw new Error(`${path}: bad CSV at row ${e.row}: ${e.message}`);
  }
  if (parsed.data.length === 0) {
    throw new Error(`empty CSV: ${path}`);
  }
  return parsed.data;
}

export function requireColumns(rows: Row[], cols: string[], path: string): void {
  const have = new Set(Object.keys(rows[0] ?? {}));
  const missing = cols.filter((c) => !have.has(c));
  if (missing.length > 0) {
    throw new Error(`missing columns: ${missing.join(", ")} in ${path}`);
  }
}

// The producer writes empty cells for None and literal "nan" for NaN;
// both come through as NaN here, anything else non-numeric is an error.
export function columnNumbers(rows: Row[], col: string): number[] {
  return rows.map((row, i) => {
    const v = row[col];
    if (typeof v === "number") return v;
    if (v === null || v === undefined || v === "" || v === "nan") return NaN;
    throw new Error(`column ${col} has a non-numeric value at row ${i}: ${String(v)}`);
  });
}

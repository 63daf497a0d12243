import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { expect, test } from "vitest";
import { columnNumbers, readTable, requireColumns } from "../src/csv.js";

function tempCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const p = join(dir, "t.csv");
  writeFileSync(p, content);
  return p;
}

test("reads a typed table", () => {
  const rows = readTable(tempCsv("a,b\n1,x\n2.5,y\n"));
  expect(rows).toEqual([
    { a: 1, b: "x" },
    { a: 2.5, b: "y" },
  ]);
});

test("empty file is an error", () => {
  expect(() => readTable(tempCsv(""))).toThrow(/empty CSV/);
});

test("header-only file is an error", () => {
  expect(() => readTable(tempCsv("a,b\n"))).toThrow(/empty CSV/);
});

test("missing columns are all named", () => {
  const rows = readTable(tempCsv("a,b\n1,2\n"));
  expect(() => requireColumns(rows, ["a", "c", "d"], "t.csv")).toThrow(
    /missing columns: c, d in t.csv/
  );
});

test("column extraction maps blank and nan cells to NaN", () => {
  const rows = readTable(tempCsv("a,b\n1,nan\n2,\n3,0.5\n"));
  const b = columnNumbers(rows, "b");
  expect(Number.isNaN(b[0])).toBe(true);
  expect(Number.isNaN(b[1])).toBe(true);
  expect(b[2]).toBe(0.5);
});

test("non-numeric cell in a numeric column is an error", () => {
  const rows = readTable(tempCsv("a\nfoo\n"));
  expect(() => columnNumbers(rows, "a")).toThrow(/non-numeric value at row 0: foo/);
});

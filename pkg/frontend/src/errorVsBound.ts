import { Row, columnNumbers, requireColumns } from "./csv.js";
import {
  Scale,
  axes,
  bandMark,
  crossMarks,
  document,
  dotMarks,
  lineMark,
  linearScale,
  logScale,
  textMark,
  xScaleRange,
  yScaleRange,
} from "./svg.js";

export interface ErrorBoundFigure {
  svg: string;
  // rows where the stated lower bound sits above the upper CI endpoint,
  // i.e. the measurement contradicts the bound
  violations: number;
}

export function plotErrorVsBound(rows: Row[], path: string): ErrorBoundFigure {
  requireColumns(rows, ["eps_res", "error_rate", "ci_lo", "ci_hi", "bound"], path);
  const order = rows
    .map((_, i) => i)
    .sort((a, b) => Number(rows[a].eps_res) - Number(rows[b].eps_res));
  const sorted = order.map((i) => rows[i]);
  const eps = columnNumbers(sorted, "eps_res");
  const err = columnNumbers(sorted, "error_rate");
  const lo = columnNumbers(sorted, "ci_lo");
  const hi = columnNumbers(sorted, "ci_hi");
  const bound = columnNumbers(sorted, "bound");
  for (const [name, col] of [
    ["eps_res", eps],
    ["error_rate", err],
    ["ci_lo", lo],
    ["ci_hi", hi],
    ["bound", bound],
  ] as const) {
    if (!col.every((v) => Number.isFinite(v))) {
      throw new Error(`column ${name} has a non-finite value`);
    }
  }

  const [rx0, rx1] = xScaleRange();
  const [ry0, ry1] = yScaleRange();
  const epsLo = Math.min(...eps);
  const epsHi = Math.max(...eps);
  // resolution grids usually span decades; fall back to linear when they don't
  const xs: Scale =
    epsLo > 0 && epsHi / epsLo >= 10
      ? logScale(epsLo, epsHi, rx0, rx1)
      : linearScale(epsLo, epsHi, rx0, rx1);
  const yTop = Math.max(1, ...hi, ...bound) * 1.02;
  const ys = linearScale(0, yTop, ry0, ry1);

  const x = eps.map((v) => xs.pos(v));
  const violation: Array<[number, number]> = [];
  for (let i = 0; i < eps.length; i++) {
    if (bound[i] > hi[i] + 1e-12) violation.push([x[i], ys.pos(bound[i])]);
  }

  const parts = [
    axes(xs, ys, "eps_res", "error rate"),
    bandMark(x, hi.map((v) => ys.pos(v)), lo.map((v) => ys.pos(v)), "ci-band"),
    lineMark(x.map((v, i) => [v, ys.pos(err[i])]), "series-a"),
    dotMarks(x.map((v, i) => [v, ys.pos(err[i])]), "series-a"),
    lineMark(x.map((v, i) => [v, ys.pos(bound[i])]), "bound", true),
    dotMarks(x.map((v, i) => [v, ys.pos(bound[i])]), "bound", 2.5),
    crossMarks(violation, "violation"),
    textMark(rx0 + 10, ry1 + 18, `bound violations: ${violation.length}`, "annotation"),
  ];
  return {
    svg: document("error rate vs resolution, stated lower bound overlaid", parts.join("\n")),
    violations: violation.length,
  };
}

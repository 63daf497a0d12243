import { Row, columnNumbers, requireColumns } from "./csv.js";
import { fitLogLogSlope } from "./fit.js";
import {
  MARGIN,
  axes,
  document,
  dotMarks,
  lineMark,
  logScale,
  textMark,
  xScaleRange,
  yScaleRange,
} from "./svg.js";

export interface ConvergenceFigure {
  svg: string;
  fittedSlope: number;
  // value of a slope column when the CSV carries one, else null;
  // the figure renders both so disagreement is visible
  reportedSlope: number | null;
}

export function plotLoglogConvergence(rows: Row[], path: string): ConvergenceFigure {
  requireColumns(rows, ["n", "linf_median", "median_abs_median"], path);
  const order = rows
    .map((_, i) => i)
    .sort((a, b) => Number(rows[a].n) - Number(rows[b].n));
  const sorted = order.map((i) => rows[i]);
  const n = columnNumbers(sorted, "n");
  const linf = columnNumbers(sorted, "linf_median");
  const medAbs = columnNumbers(sorted, "median_abs_median");
  for (const [name, col] of [
    ["n", n],
    ["linf_median", linf],
    ["median_abs_median", medAbs],
  ] as const) {
    if (!col.every((v) => v > 0)) {
      throw new Error(`log-log plot needs positive values (column ${name})`);
    }
  }

  const fit = fitLogLogSlope(n, linf);
  const reported = reportedSlopeColumn(sorted);

  const [rx0, rx1] = xScaleRange();
  const [ry0, ry1] = yScaleRange();
  const xs = logScale(Math.min(...n), Math.max(...n), rx0, rx1);
  const yAll = [...linf, ...medAbs];
  const ys = logScale(Math.min(...yAll), Math.max(...yAll), ry0, ry1);

  const ptsA: Array<[number, number]> = n.map((v, i) => [xs.pos(v), ys.pos(linf[i])]);
  const ptsB: Array<[number, number]> = n.map((v, i) => [xs.pos(v), ys.pos(medAbs[i])]);
  const fitLine: Array<[number, number]> = [n[0], n[n.length - 1]].map((v) => [
    xs.pos(v),
    ys.pos(Math.pow(10, fit.intercept + fit.slope * Math.log10(v))),
  ]);

  const parts = [
    axes(xs, ys, "n", "coordinate gap"),
    lineMark(fitLine, "fit", true),
    lineMark(ptsA, "series-a"),
    dotMarks(ptsA, "series-a"),
    lineMark(ptsB, "series-b"),
    dotMarks(ptsB, "series-b"),
    legend(),
    textMark(rx0 + 10, ry1 + 18, `fitted slope (linf_median): ${fit.slope.toFixed(3)}`, "annotation"),
  ];
  if (reported !== null) {
    parts.push(
      textMark(rx0 + 10, ry1 + 34, `slope column: ${reported.toFixed(3)}`, "annotation")
    );
  }
  return {
    svg: document("coordinate gap vs n (log-log)", parts.join("\n")),
    fittedSlope: fit.slope,
    reportedSlope: reported,
  };
}

function reportedSlopeColumn(rows: Row[]): number | null {
  if (!("slope_linf" in (rows[0] ?? {}))) return null;
  const vals = columnNumbers(rows, "slope_linf");
  const finite = vals.find((v) => Number.isFinite(v));
  return finite === undefined ? null : finite;
}

function legend(): string {
  const x = MARGIN.left + 10;
  const y = MARGIN.top + 58;
  return [
    dotMarks([[x, y - 4]], "series-a"),
    textMark(x + 10, y, "linf_median", "legend"),
    dotMarks([[x, y + 14]], "series-b"),
    textMark(x + 10, y + 18, "median_abs_median", "legend"),
  ].join("\n");
}

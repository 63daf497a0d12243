import { Row, columnNumbers, requireColumns } from "./csv.js";
import {
  axes,
  bandMark,
  document,
  dotMarks,
  lineMark,
  linearScale,
  textMark,
  xScaleRange,
  yScaleRange,
} from "./svg.js";

export interface AccuracyFigure {
  svg: string;
  points: number;
}

// accuracy = 1 - error_rate; ci_lo/ci_hi are optional and, when present,
// flip into an accuracy band the same way
export function plotAccuracyVsDelta(rows: Row[], path: string): AccuracyFigure {
  requireColumns(rows, ["delta", "error_rate"], path);
  const order = rows
    .map((_, i) => i)
    .sort((a, b) => Number(rows[a].delta) - Number(rows[b].delta));
  const sorted = order.map((i) => rows[i]);
  const delta = columnNumbers(sorted, "delta");
  const err = columnNumbers(sorted, "error_rate");
  if (!delta.every((v) => Number.isFinite(v)) || !err.every((v) => Number.isFinite(v))) {
    throw new Error("delta and error_rate must be finite");
  }
  const acc = err.map((v) => 1 - v);

  const [rx0, rx1] = xScaleRange();
  const [ry0, ry1] = yScaleRange();
  const xs = linearScale(Math.min(0, ...delta), Math.max(...delta), rx0, rx1);
  const ys = linearScale(0, 1.02, ry0, ry1);
  const x = delta.map((v) => xs.pos(v));

  const parts: string[] = [axes(xs, ys, "delta separation", "test accuracy")];
  const hasBand =
    "ci_lo" in (sorted[0] ?? {}) && "ci_hi" in (sorted[0] ?? {});
  if (hasBand) {
    const lo = columnNumbers(sorted, "ci_lo");
    const hi = columnNumbers(sorted, "ci_hi");
    parts.push(
      bandMark(
        x,
        lo.map((v) => ys.pos(1 - v)),
        hi.map((v) => ys.pos(1 - v)),
        "ci-band"
      )
    );
  }
  parts.push(
    lineMark(x.map((v, i) => [v, ys.pos(acc[i])]), "series-a"),
    dotMarks(x.map((v, i) => [v, ys.pos(acc[i])]), "series-a"),
    textMark(rx0 + 10, ry1 + 18, `${delta.length} configurations`, "annotation")
  );
  return {
    svg: document("test accuracy vs profile separation", parts.join("\n")),
    points: delta.length,
  };
}

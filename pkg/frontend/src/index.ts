import { readTable } from "./csv.js";
import { plotLoglogConvergence } from "./loglogConvergence.js";
import { plotErrorVsBound } from "./errorVsBound.js";
import { plotAccuracyVsDelta } from "./accuracyVsDelta.js";

export { readTable, requireColumns, columnNumbers } from "./csv.js";
export type { Row } from "./csv.js";
export { fitLogLogSlope } from "./fit.js";
export { plotLoglogConvergence } from "./loglogConvergence.js";
export type { ConvergenceFigure } from "./loglogConvergence.js";
export { plotErrorVsBound } from "./errorVsBound.js";
export type { ErrorBoundFigure } from "./errorVsBound.js";
export { plotAccuracyVsDelta } from "./accuracyVsDelta.js";
export type { AccuracyFigure } from "./accuracyVsDelta.js";

export const KINDS = ["loglog-convergence", "error-vs-bound", "accuracy-vs-delta"] as const;
export type Kind = (typeof KINDS)[number];

export function render(kind: string, inPath: string): { svg: string; note: string } {
  const rows = readTable(inPath);
  switch (kind) {
    case "loglog-convergence": {
      const fig = plotLoglogConvergence(rows, inPath);
      const reported =
        fig.reportedSlope === null ? "" : ` reported=${fig.reportedSlope.toFixed(3)}`;
      return { svg: fig.svg, note: `slope=${fig.fittedSlope.toFixed(3)}${reported}` };
    }
    case "error-vs-bound": {
      const fig = plotErrorVsBound(rows, inPath);
      return { svg: fig.svg, note: `violations=${fig.violations}` };
    }
    case "accuracy-vs-delta": {
      const fig = plotAccuracyVsDelta(rows, inPath);
      return { svg: fig.svg, note: `points=${fig.points}` };
    }
    default:
      throw new Error(`unknown figure kind: ${kind}`);
  }
}

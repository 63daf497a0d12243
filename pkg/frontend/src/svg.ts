// Small deterministic SVG scene builder: fixed canvas, 2-decimal pixel
// coordinates, no timestamps or ids, so identical input gives identical bytes.

export const WIDTH = 640;
export const HEIGHT = 440;
export const MARGIN = { top: 42, right: 24, bottom: 52, left: 68 };

export interface Scale {
  pos(v: number): number;
  ticks: number[];
  tickLabel(v: number): string;
}

const px = (v: number): string => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

export function linearScale(lo: number, hi: number, rlo: number, rhi: number): Scale {
  if (!(hi > lo)) hi = lo + 1;
  const step = niceStep((hi - lo) / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  return {
    pos: (v) => rlo + ((v - lo) / (hi - lo)) * (rhi - rlo),
    ticks,
    tickLabel: (v) => v.toFixed(decimals),
  };
}

export function logScale(lo: number, hi: number, rlo: number, rhi: number): Scale {
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error("log scale needs positive domain values");
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi) > llo ? Math.log10(hi) : llo + 1;
  const ticks: number[] = [];
  for (let k = Math.ceil(llo - 1e-9); k <= lhi + 1e-9; k++) {
    ticks.push(Math.pow(10, k));
  }
  return {
    pos: (v) => rlo + ((Math.log10(v) - llo) / (lhi - llo)) * (rhi - rlo),
    ticks,
    tickLabel: (v) => {
      const k = Math.round(Math.log10(v));
      return k >= -3 && k <= 3 ? String(Math.pow(10, k)) : `1e${k}`;
    },
  };
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r <= 1) return mag;
  if (r <= 2) return 2 * mag;
  if (r <= 5) return 5 * mag;
  return 10 * mag;
}

export function xScaleRange(): [number, number] {
  return [MARGIN.left, WIDTH - MARGIN.right];
}

export function yScaleRange(): [number, number] {
  // y grows downward in SVG, so the range is flipped
  return [HEIGHT - MARGIN.bottom, MARGIN.top];
}

export function lineMark(pts: Array<[number, number]>, cls: string, dashed = false): string {
  const d = pts.map(([x, y], i) => `${i === 0 ? "M" : "L"}${px(x)},${px(y)}`).join(" ");
  const dash = dashed ? ' stroke-dasharray="6,4"' : "";
  return `<path class="${cls}" d="${d}" fill="none"${dash}/>`;
}

export function dotMarks(pts: Array<[number, number]>, cls: string, r = 3.5): string {
  return pts
    .map(([x, y]) => `<circle class="${cls}" cx="${px(x)}" cy="${px(y)}" r="${r}"/>`)
    .join("\n");
}

export function crossMarks(pts: Array<[number, number]>, cls: string, r = 5): string {
  return pts
    .map(
      ([x, y]) =>
        `<path class="${cls}" d="M${px(x - r)},${px(y - r)} L${px(x + r)},${px(y + r)} ` +
        `M${px(x - r)},${px(y + r)} L${px(x + r)},${px(y - r)}"/>`
    )
    .join("\n");
}

export function bandMark(
  xs: number[],
  yHi: number[],
  yLo: number[],
  cls: string
): string {
  const fwd = xs.map((x, i) => `${i === 0 ? "M" : "L"}${px(x)},${px(yHi[i])}`);
  const back = xs
    .map((x, i) => `L${px(x)},${px(yLo[i])}`)
    .reverse();
  return `<path class="${cls}" d="${fwd.join(" ")} ${back.join(" ")} Z"/>`;
}

export function textMark(x: number, y: number, s: string, cls: string, anchor = "start"): string {
  return `<text class="${cls}" x="${px(x)}" y="${px(y)}" text-anchor="${anchor}">${escapeText(s)}</text>`;
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string): string {
  const [x0, x1] = xScaleRange();
  const [y0, y1] = yScaleRange();
  const parts: string[] = [];
  for (const t of xs.ticks) {
    const x = xs.pos(t);
    if (x < x0 - 0.5 || x > x1 + 0.5) continue;
    parts.push(`<line class="grid" x1="${px(x)}" y1="${px(y0)}" x2="${px(x)}" y2="${px(y1)}"/>`);
    parts.push(`<line class="tick" x1="${px(x)}" y1="${px(y0)}" x2="${px(x)}" y2="${px(y0 + 5)}"/>`);
    parts.push(textMark(x, y0 + 19, xs.tickLabel(t), "tick-label", "middle"));
  }
  for (const t of ys.ticks) {
    const y = ys.pos(t);
    if (y > y0 + 0.5 || y < y1 - 0.5) continue;
    parts.push(`<line class="grid" x1="${px(x0)}" y1="${px(y)}" x2="${px(x1)}" y2="${px(y)}"/>`);
    parts.push(`<line class="tick" x1="${px(x0 - 5)}" y1="${px(y)}" x2="${px(x0)}" y2="${px(y)}"/>`);
    parts.push(textMark(x0 - 8, y + 4, ys.tickLabel(t), "tick-label", "end"));
  }
  parts.push(`<rect class="frame" x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" height="${px(y0 - y1)}" fill="none"/>`);
  parts.push(textMark((x0 + x1) / 2, HEIGHT - 14, xLabel, "axis-label", "middle"));
  parts.push(
    `<text class="axis-label" x="${px(16)}" y="${px((y0 + y1) / 2)}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${px((y0 + y1) / 2)})">${escapeText(yLabel)}</text>`
  );
  return parts.join("\n");
}

export function document(title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<style>`,
    `text { font-family: Helvetica, Arial, sans-serif; font-size: 12px; fill: #222; }`,
    `.title { font-size: 15px; }`,
    `.grid { stroke: #e3e3e3; stroke-width: 1; }`,
    `.tick, .frame { stroke: #444; stroke-width: 1; }`,
    `.series-a { stroke: #1f77b4; fill: #1f77b4; }`,
    `.series-b { stroke: #d62728; fill: #d62728; }`,
    `.fit { stroke: #555; }`,
    `.ci-band { fill: #1f77b4; fill-opacity: 0.18; stroke: none; }`,
    `.bound { stroke: #d62728; fill: #d62728; }`,
    `.violation { stroke: #d62728; stroke-width: 2.5; }`,
    `</style>`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    textMark(MARGIN.left, 24, title, "title"),
    body,
    `</svg>`,
    ``,
  ].join("\n");
}

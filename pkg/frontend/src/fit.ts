export interface LineFit {
  slope: number;
  intercept: number;
}

// Least squares of log10(y) on log10(x). Both columns must be positive;
// the caller is plotting these on log axes anyway.
export function fitLogLogSlope(x: number[], y: number[]): LineFit {
  if (x.length !== y.length) {
    throw new Error(`fit needs equal lengths, got ${x.length} and ${y.length}`);
  }
  if (x.length < 2) {
    throw new Error("need at least 2 rows to fit a slope");
  }
  const lx = x.map((v, i) => {
    if (!(v > 0) || !(y[i] > 0)) {
      throw new Error("log-log fit needs positive values");
    }
    return Math.log10(v);
  });
  const ly = y.map((v) => Math.log10(v));
  const mx = mean(lx);
  const my = mean(ly);
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < lx.length; i++) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx === 0) {
    throw new Error("fit needs at least two distinct x values");
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

function mean(v: number[]): number {
  return v.reduce((a, b) => a + b, 0) / v.length;
}

/** Least-squares line fits used by the front and sweep plots. */

export interface LineFit {
  slope: number;
  intercept: number;
}

export function linearFit(x: number[], y: number[]): LineFit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error("linearFit needs two equal-length samples of >= 2 points");
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) throw new Error("degenerate fit: all x identical");
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

/** Power-law exponent of y against x from a log-log fit. */
export function logLogSlope(x: number[], y: number[]): number {
  const pairs = x
    .map((xi, i) => [xi, y[i]] as const)
    .filter(([xi, yi]) => xi > 0 && yi > 0 && isFinite(xi) && isFinite(yi));
  if (pairs.length < 2) throw new Error("logLogSlope needs >= 2 positive points");
  return linearFit(
    pairs.map(([xi]) => Math.log(xi)),
    pairs.map(([, yi]) => Math.log(yi)),
  ).slope;
}

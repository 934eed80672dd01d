/**
 * Hand-rolled SVG line charts: no DOM, no browser, just strings.
 * Enough for the four figure kinds this package ships.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: string;
  markers?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xLog?: boolean;
  yLog?: boolean;
  hline?: { y: number; label: string; color: string };
  annotations?: string[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 78, right: 24, top: 48, bottom: 56 };

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function finitePairs(s: Series): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  for (let i = 0; i < s.x.length; i++) {
    if (isFinite(s.x[i]) && isFinite(s.y[i])) out.push([s.x[i], s.y[i]]);
  }
  return out;
}

function extent(values: number[], log: boolean): [number, number] {
  const ok = values.filter((v) => isFinite(v) && (!log || v > 0));
  if (ok.length === 0) throw new Error("no finite data to plot");
  let lo = Math.min(...ok);
  let hi = Math.max(...ok);
  if (lo === hi) {
    const pad = log ? lo * 0.5 : Math.max(1e-12, Math.abs(lo) * 0.1, 0.1);
    lo = log ? lo / 2 : lo - pad;
    hi = log ? hi * 2 : hi + pad;
  } else if (!log) {
    const pad = (hi - lo) * 0.06;
    lo -= pad;
    hi += pad;
  } else {
    lo /= 1.3;
    hi *= 1.3;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, log: boolean): number[] {
  if (log) {
    const out: number[] = [];
    const d0 = Math.ceil(Math.log10(lo) - 1e-9);
    const d1 = Math.floor(Math.log10(hi) + 1e-9);
    for (let d = d0; d <= d1; d++) out.push(Math.pow(10, d));
    if (out.length >= 2) return out;
    // under one decade: 1-2-5 pattern
    const fine: number[] = [];
    for (let d = Math.floor(Math.log10(lo)); d <= d1 + 1; d++) {
      for (const u of [1, 2, 5]) {
        const v = u * Math.pow(10, d);
        if (v >= lo && v <= hi) fine.push(v);
      }
    }
    return fine.length >= 2 ? fine : [lo, hi];
  }
  const span = hi - lo;
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = [1, 2, 5, 10].find((u) => u * mag >= raw)! * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / unit) * unit; v <= hi + 1e-12 * span; v += unit) {
    out.push(v);
  }
  return out;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return parseFloat(v.toPrecision(4)).toString();
}

export function renderChart(spec: ChartSpec): string {
  const allX = spec.series.flatMap((s) => s.x);
  const allY = spec.series.flatMap((s) => s.y);
  if (spec.hline && isFinite(spec.hline.y)) allY.push(spec.hline.y);
  const [x0, x1] = extent(allX, !!spec.xLog);
  const [y0, y1] = extent(allY, !!spec.yLog);

  const tx = (v: number) => {
    const t = spec.xLog
      ? (Math.log(v) - Math.log(x0)) / (Math.log(x1) - Math.log(x0))
      : (v - x0) / (x1 - x0);
    return MARGIN.left + t * (WIDTH - MARGIN.left - MARGIN.right);
  };
  const ty = (v: number) => {
    const t = spec.yLog
      ? (Math.log(v) - Math.log(y0)) / (Math.log(y1) - Math.log(y0))
      : (v - y0) / (y1 - y0);
    return HEIGHT - MARGIN.bottom - t * (HEIGHT - MARGIN.top - MARGIN.bottom);
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">` +
      `${esc(spec.title)}</text>`,
  );

  // frame and grid
  const frame = `M ${MARGIN.left} ${MARGIN.top} H ${WIDTH - MARGIN.right} ` +
    `V ${HEIGHT - MARGIN.bottom} H ${MARGIN.left} Z`;
  for (const v of ticks(x0, x1, !!spec.xLog)) {
    const px = tx(v);
    parts.push(
      `<line x1="${px.toFixed(1)}" y1="${MARGIN.top}" x2="${px.toFixed(1)}" ` +
        `y2="${HEIGHT - MARGIN.bottom}" stroke="#e0e0e0"/>`,
      `<text x="${px.toFixed(1)}" y="${HEIGHT - MARGIN.bottom + 18}" ` +
        `text-anchor="middle" font-size="11">${fmtTick(v)}</text>`,
    );
  }
  for (const v of ticks(y0, y1, !!spec.yLog)) {
    const py = ty(v);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py.toFixed(1)}" ` +
        `x2="${WIDTH - MARGIN.right}" y2="${py.toFixed(1)}" stroke="#e0e0e0"/>`,
      `<text x="${MARGIN.left - 8}" y="${(py + 4).toFixed(1)}" ` +
        `text-anchor="end" font-size="11">${fmtTick(v)}</text>`,
    );
  }
  parts.push(`<path d="${frame}" fill="none" stroke="#222"/>`);

  if (spec.hline && isFinite(spec.hline.y)) {
    const py = ty(spec.hline.y);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py.toFixed(1)}" ` +
        `x2="${WIDTH - MARGIN.right}" y2="${py.toFixed(1)}" ` +
        `stroke="${spec.hline.color}" stroke-dasharray="2 3"/>`,
      `<text x="${WIDTH - MARGIN.right - 4}" y="${(py - 5).toFixed(1)}" ` +
        `text-anchor="end" font-size="11" fill="${spec.hline.color}">` +
        `${esc(spec.hline.label)}</text>`,
    );
  }

  let legendY = MARGIN.top + 16;
  for (const s of spec.series) {
    const pts = finitePairs(s).filter(
      ([px, py]) => (!spec.xLog || px > 0) && (!spec.yLog || py > 0),
    );
    if (pts.length === 0) continue;
    const path = pts
      .map(([px, py], i) => `${i === 0 ? "M" : "L"} ${tx(px).toFixed(2)} ${ty(py).toFixed(2)}`)
      .join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<path d="${path}" fill="none" stroke="${s.color}" stroke-width="1.6"${dash}/>`,
    );
    if (s.markers) {
      for (const [px, py] of pts) {
        parts.push(
          `<circle cx="${tx(px).toFixed(2)}" cy="${ty(py).toFixed(2)}" r="3" ` +
            `fill="${s.color}"/>`,
        );
      }
    }
    parts.push(
      `<text x="${MARGIN.left + 10}" y="${legendY}" font-size="12" ` +
        `fill="${s.color}">${esc(s.label)}</text>`,
    );
    legendY += 16;
  }

  for (const [i, note] of (spec.annotations ?? []).entries()) {
    parts.push(
      `<text x="${WIDTH - MARGIN.right - 6}" y="${MARGIN.top + 16 + 16 * i}" ` +
        `text-anchor="end" font-size="12" fill="#333">${esc(note)}</text>`,
    );
  }

  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" ` +
      `text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="20" y="${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" ` +
      `text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})">` +
      `${esc(spec.yLabel)}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

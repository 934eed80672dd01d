/**
 * The four figure kinds rendered from a run directory's CSV files.
 *
 * Strictly read-only over the solver's outputs: nothing here
 * recomputes diagnostics, so a plot cannot mask a solver bug.
 */

import { readdirSync, writeFileSync } from "fs";
import { join } from "path";

import { column, hasColumn, readCsv } from "./csv.js";
import { linearFit, logLogSlope } from "./fit.js";
import { renderChart, Series } from "./svg.js";

export type PlotKind = "snapshot" | "diagnostics" | "front" | "sweep";

export interface PlotJob {
  kind: PlotKind;
  inputDir: string;
  outputPath: string;
  overlayExact?: boolean;
}

export interface PlotResult {
  outputPath: string;
  /** fitted slope annotated on the figure, when the kind carries one */
  slope?: number;
}

function latestSnapshotFile(dir: string): string {
  const names = readdirSync(dir)
    .filter((n) => /^rho_.*\.csv$/.test(n))
    .sort();
  if (names.length === 0) {
    throw new Error(`no rho_<t>.csv snapshots in ${dir}`);
  }
  return names[names.length - 1];
}

export function renderSnapshot(job: PlotJob): PlotResult {
  const name = latestSnapshotFile(job.inputDir);
  const table = readCsv(join(job.inputDir, name));
  if (hasColumn(table, "y")) {
    throw new Error("snapshot figures are for 1D runs");
  }
  const x = column(table, "x");
  const series: Series[] = [
    { label: "density", x, y: column(table, "rho"), color: "#1f77b4" },
    {
      label: "flux moment",
      x,
      y: column(table, "phi_1"),
      color: "#9467bd",
      dash: "5 3",
    },
  ];
  if (job.overlayExact !== false) {
    try {
      const exact = readCsv(join(job.inputDir, "riemann_table.csv"));
      series.push({
        label: "exact solution",
        x: column(exact, "x"),
        y: column(exact, "rho"),
        color: "#d62728",
        dash: "2 2",
      });
    } catch {
      // overlay is best-effort: no table, no overlay
    }
  }
  const time = name.replace(/^rho_/, "").replace(/\.csv$/, "");
  const svg = renderChart({
    title: `density profile at t = ${time}`,
    xLabel: "x",
    yLabel: "density",
    series,
  });
  writeFileSync(job.outputPath, svg);
  return { outputPath: job.outputPath };
}

export function renderDiagnostics(job: PlotJob): PlotResult {
  const table = readCsv(join(job.inputDir, "diagnostics.csv"));
  const t = column(table, "time");
  const budget = column(table, "budget")[0];
  const svg = renderChart({
    title: "entropy moment and accumulated projection defect",
    xLabel: "time",
    yLabel: "value",
    series: [
      { label: "entropy moment", x: t, y: column(table, "entropy"), color: "#1f77b4" },
      {
        label: "accumulated defect",
        x: t,
        y: column(table, "defect_total"),
        color: "#ff7f0e",
      },
      { label: "mass", x: t, y: column(table, "mass"), color: "#2ca02c", dash: "4 3" },
    ],
    hline: { y: budget, label: "entropy budget", color: "#d62728" },
  });
  writeFileSync(job.outputPath, svg);
  return { outputPath: job.outputPath };
}

export function renderFront(job: PlotJob): PlotResult {
  const table = readCsv(join(job.inputDir, "front.csv"));
  const t = column(table, "time");
  const pos = column(table, "position");
  const fit = linearFit(t, pos);
  const fitted = t.map((ti) => fit.intercept + fit.slope * ti);
  const svg = renderChart({
    title: "tracked front position",
    xLabel: "time",
    yLabel: "position",
    series: [
      { label: "crossings", x: t, y: pos, color: "#1f77b4", markers: true },
      { label: "least-squares fit", x: t, y: fitted, color: "#d62728", dash: "5 3" },
    ],
    annotations: [`fitted speed = ${fit.slope.toFixed(6)}`],
  });
  writeFileSync(job.outputPath, svg);
  return { outputPath: job.outputPath, slope: fit.slope };
}

export function renderSweep(job: PlotJob): PlotResult {
  const table = readCsv(join(job.inputDir, "sweep.csv"));
  const eps = column(table, "eps");
  const series: Series[] = [];
  const annotations: string[] = [];
  let primarySlope: number | undefined;

  const speedErr = hasColumn(table, "front_speed_error")
    ? column(table, "front_speed_error")
    : [];
  if (speedErr.some((v) => isFinite(v) && v > 0)) {
    const slope = logLogSlope(eps, speedErr);
    series.push({
      label: "front-speed error",
      x: eps,
      y: speedErr,
      color: "#1f77b4",
      markers: true,
    });
    annotations.push(`front-speed error slope = ${slope.toFixed(3)}`);
    primarySlope = slope;
  }
  const l1 = hasColumn(table, "l1_to_reference")
    ? column(table, "l1_to_reference")
    : [];
  if (l1.some((v) => isFinite(v) && v > 0)) {
    const slope = logLogSlope(eps, l1);
    series.push({
      label: "L1 distance to reference",
      x: eps,
      y: l1,
      color: "#ff7f0e",
      markers: true,
    });
    annotations.push(`L1 error slope = ${slope.toFixed(3)}`);
    primarySlope = primarySlope ?? slope;
  }
  if (series.length === 0) {
    throw new Error("sweep.csv has no positive error columns to plot");
  }
  const svg = renderChart({
    title: "error against the entropy scale",
    xLabel: "entropy scale",
    yLabel: "error",
    xLog: true,
    yLog: true,
    series,
    annotations,
  });
  writeFileSync(job.outputPath, svg);
  return { outputPath: job.outputPath, slope: primarySlope };
}

export function render(job: PlotJob): PlotResult {
  switch (job.kind) {
    case "snapshot":
      return renderSnapshot(job);
    case "diagnostics":
      return renderDiagnostics(job);
    case "front":
      return renderFront(job);
    case "sweep":
      return renderSweep(job);
    default:
      throw new Error(`unknown plot kind '${job.kind as string}'`);
  }
}

/**
 * Usage:
 *   node dist/cli.js <snapshot|diagnostics|front|sweep> <run-dir> <out.svg>
 *        [--no-overlay]
 *
 * Reads the named run directory's CSV files and writes one SVG figure.
 */

import { render, PlotKind } from "./plots.js";

const KINDS: PlotKind[] = ["snapshot", "diagnostics", "front", "sweep"];

export function main(argv: string[]): number {
  const args = argv.filter((a) => a !== "--no-overlay");
  const overlayExact = !argv.includes("--no-overlay");
  if (args.length !== 3) {
    console.error(
      "usage: plot <snapshot|diagnostics|front|sweep> <run-dir> <out.svg> [--no-overlay]",
    );
    return 1;
  }
  const [kind, inputDir, outputPath] = args;
  if (!KINDS.includes(kind as PlotKind)) {
    console.error(`unknown plot kind '${kind}' (expected ${KINDS.join(", ")})`);
    return 1;
  }
  try {
    const result = render({
      kind: kind as PlotKind,
      inputDir,
      outputPath,
      overlayExact,
    });
    const note = result.slope !== undefined
      ? ` (fitted slope ${result.slope.toFixed(4)})`
      : "";
    console.log(`${result.outputPath}${note}`);
    return 0;
  } catch (err) {
    console.error(`plot failed: ${(err as Error).message}`);
    return 2;
  }
}

process.exitCode = main(process.argv.slice(2));

/**
 * Render fairness figures from sweep CSVs.
 *
 * Usage:
 *   node dist/cli.js --input sweep.csv [--input more.csv ...] \
 *     --outdir figures [--metric phi_r|phi_d|mean_r|mean_d] [--x alpha]
 */

import { basename } from "node:path";
import { parseArgs } from "node:util";

import { Metric, render } from "./figure.js";
import { SWEEP_AXES, SweepAxis } from "./schema.js";

const METRICS = ["phi_r", "phi_d", "mean_r", "mean_d"];

function main(): number {
  const { values } = parseArgs({
    options: {
      input: { type: "string", multiple: true },
      outdir: { type: "string" },
      metric: { type: "string", default: "phi_r" },
      x: { type: "string" },
      title: { type: "string" },
    },
  });
  const inputs = values.input ?? [];
  if (inputs.length === 0 || !values.outdir) {
    console.error("error: --input <csv> and --outdir <dir> are required");
    return 2;
  }
  if (!METRICS.includes(values.metric!)) {
    console.error(`error: --metric must be one of ${METRICS.join(", ")}`);
    return 2;
  }
  if (values.x !== undefined && !SWEEP_AXES.includes(values.x as SweepAxis)) {
    console.error(`error: --x must be one of ${SWEEP_AXES.join(", ")}`);
    return 2;
  }
  for (const input of inputs) {
    const stem = basename(input).replace(/\.csv$/i, "");
    const outputPath = `${values.outdir}/${stem}_${values.metric}.svg`;
    try {
      const model = render({
        inputCsv: input,
        outputPath,
        metric: values.metric as Metric,
        xVariable: values.x as SweepAxis | undefined,
        title: values.title,
      });
      console.log(`${input} -> ${outputPath} (${model.regimes.join("/")} vs ${model.axis})`);
    } catch (err) {
      console.error(`error: ${input}: ${(err as Error).message}`);
      return 1;
    }
  }
  return 0;
}

process.exitCode = main();

/**
 * Fairness figures from sweep CSVs: one line per regime, error bars from
 * the standard-error columns, and the zero-fairness reference line.
 * Rendered server-side to SVG via the chart object model.
 */

import { existsSync, mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import * as echarts from "echarts";

import {
  SchemaError,
  SweepAxis,
  SweepRow,
  detectSweepAxis,
  parseSweepCsv,
} from "./schema.js";

export type Metric = "phi_r" | "phi_d" | "mean_r" | "mean_d";

export interface FigureSpec {
  inputCsv: string;
  outputPath: string;
  metric?: Metric;
  /** Swept column; auto-detected from the CSV when omitted. */
  xVariable?: SweepAxis;
  title?: string;
}

const AXIS_LABELS: Record<SweepAxis, string> = {
  period_slots: "duty cycle period T (slots)",
  alpha: "duty cycle α",
  q: "interferer-to-station collision probability q",
  payload_bits: "payload length (bits)",
};

const METRIC_LABELS: Record<Metric, string> = {
  phi_r: "throughput fairness φ_R",
  phi_d: "service-time fairness φ_D",
  mean_r: "throughput (bits/slot)",
  mean_d: "mean service time (slots)",
};

/** Standard error attached to a metric value, scaled like the metric. */
function metricError(row: SweepRow, metric: Metric): number | null {
  switch (metric) {
    case "phi_r":
      return row.se_r !== null && row.ref_r ? row.se_r / row.ref_r : null;
    case "phi_d":
      return row.se_d !== null && row.ref_d ? row.se_d / row.ref_d : null;
    case "mean_r":
      return row.se_r;
    case "mean_d":
      return row.se_d;
  }
}

export interface FigureModel {
  option: echarts.EChartsCoreOption;
  regimes: string[];
  axis: SweepAxis;
  metric: Metric;
}

/** Chart option with two line series (weak/strong), whiskers, zero line. */
export function buildFigure(rows: SweepRow[], spec: FigureSpec): FigureModel {
  const usable = rows.filter((r) => r.error === "");
  if (usable.length === 0) {
    throw new SchemaError("no usable rows (empty sweep or all points failed)");
  }
  const metric = spec.metric ?? "phi_r";
  const axis = spec.xVariable ?? detectSweepAxis(usable);
  if (spec.xVariable) {
    const detected = detectSweepAxis(usable);
    if (usable.length > 1 && detected !== spec.xVariable) {
      throw new SchemaError(
        `x-variable ${spec.xVariable} does not match the swept column ${detected}`,
      );
    }
  }

  const regimes = [...new Set(usable.map((r) => r.regime))].sort();
  const series: echarts.SeriesOption[] = [];
  for (const regime of regimes) {
    const points = usable
      .filter((r) => r.regime === regime)
      .sort((a, b) => a[axis] - b[axis]);
    series.push({
      name: regime,
      type: "line",
      symbolSize: 7,
      data: points.map((r) => [r[axis], r[metric]]),
      markLine:
        regime === regimes[0]
          ? {
              symbol: "none",
              lineStyle: { type: "dashed", color: "#555" },
              label: { formatter: "fair" },
              data: [{ yAxis: 0 }],
            }
          : undefined,
    });
    const whiskers = points
      .map((r) => ({ x: r[axis], y: r[metric], e: metricError(r, metric) }))
      .filter((p) => p.y !== null && p.e !== null) as {
      x: number;
      y: number;
      e: number;
    }[];
    series.push({
      name: `${regime} stderr`,
      type: "custom",
      renderItem: errorBarRenderer,
      data: whiskers.map((p) => [p.x, p.y - p.e, p.y + p.e]),
      z: 5,
      silent: true,
    });
  }

  const option: echarts.EChartsCoreOption = {
    animation: false,
    title: { text: spec.title ?? `${METRIC_LABELS[metric]} vs ${AXIS_LABELS[axis]}` },
    legend: { data: regimes, top: 28 },
    xAxis: { type: "value", name: AXIS_LABELS[axis], nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: METRIC_LABELS[metric] },
    series,
  };
  return { option, regimes, axis, metric };
}

// echarts custom-series renderer: vertical whisker with caps
function errorBarRenderer(
  params: echarts.CustomSeriesRenderItemParams,
  api: echarts.CustomSeriesRenderItemAPI,
): echarts.CustomSeriesRenderItemReturn {
  const x = api.value(0) as number;
  const low = api.coord([x, api.value(1)]);
  const high = api.coord([x, api.value(2)]);
  const cap = 4;
  const style = { stroke: "#333", fill: undefined as unknown as string, lineWidth: 1 };
  return {
    type: "group",
    children: [
      { type: "line", shape: { x1: high[0], y1: high[1], x2: low[0], y2: low[1] }, style },
      { type: "line", shape: { x1: high[0] - cap, y1: high[1], x2: high[0] + cap, y2: high[1] }, style },
      { type: "line", shape: { x1: low[0] - cap, y1: low[1], x2: low[0] + cap, y2: low[1] }, style },
    ],
  };
}

/** Render one figure to SVG; returns the model for structural checks. */
export function render(spec: FigureSpec): FigureModel & { svg: string } {
  if (!existsSync(spec.inputCsv)) {
    throw new SchemaError(`input CSV not found: ${spec.inputCsv}`);
  }
  const rows = parseSweepCsv(readFileSync(spec.inputCsv, "utf8"));
  const model = buildFigure(rows, spec);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: 840,
    height: 520,
  });
  chart.setOption(model.option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  mkdirSync(dirname(spec.outputPath), { recursive: true });
  writeFileSync(spec.outputPath, svg);
  return { ...model, svg };
}

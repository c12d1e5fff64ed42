import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { buildFigure, render } from "../src/figure.js";
import { detectSweepAxis, parseSweepCsv, SchemaError } from "../src/schema.js";

const DATA = fileURLToPath(new URL("../data", import.meta.url));
const GOLDEN = {
  alpha: join(DATA, "golden_alpha.csv"),
  period_slots: join(DATA, "golden_period_ms.csv"),
  q: join(DATA, "golden_q.csv"),
  payload_bits: join(DATA, "golden_payload_bytes.csv"),
} as const;

const HEADER =
  "regime,period_slots,alpha,q,payload_bits,n,mean_r,se_r,mean_d,se_d," +
  "drop_rate,ref_r,ref_d,phi_r,phi_d,fair,seed,packets,error," +
  "mean_r_recip,se_r_recip,phi_r_recip";

const ONE_ROW =
  "weak,55556,0.3,1.0,8192,17,0.3,0.003,30000.0,300.0,0.05,0.45,18000.0," +
  "0.033,0.238,false,1,20000,,1.5,0.01,-0.1";

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "figs-"));
}

describe("schema", () => {
  it("parses every golden CSV and detects its swept axis", () => {
    for (const [axis, path] of Object.entries(GOLDEN)) {
      const rows = parseSweepCsv(readFileSync(path, "utf8"));
      expect(rows.length).toBe(10); // 2 regimes x 5 values
      expect(detectSweepAxis(rows)).toBe(axis);
    }
  });

  it("names the missing column", () => {
    const broken = HEADER.replace("phi_r,", "PHI,") + "\n";
    expect(() => parseSweepCsv(broken)).toThrow(/missing required column: phi_r/);
  });
});

describe("figure structure", () => {
  it.each(Object.entries(GOLDEN))(
    "golden %s sweep: two series and a zero line",
    (axis, path) => {
      const rows = parseSweepCsv(readFileSync(path, "utf8"));
      const model = buildFigure(rows, { inputCsv: path, outputPath: "unused" });
      expect(model.regimes).toEqual(["strong", "weak"]);
      expect(model.axis).toBe(axis);
      const series = model.option.series as Array<Record<string, unknown>>;
      const lines = series.filter((s) => s.type === "line");
      expect(lines.length).toBe(2); // one per regime
      for (const line of lines) {
        expect((line.data as unknown[]).length).toBe(5);
      }
      const zeroLines = series
        .filter((s) => s.markLine !== undefined)
        .map((s) => (s.markLine as { data: Array<{ yAxis: number }> }).data[0].yAxis);
      expect(zeroLines).toEqual([0]);
      const whiskers = series.filter((s) => s.type === "custom");
      expect(whiskers.length).toBe(2); // error bars per regime
    },
  );

  it("supports the service-time metric and raw metrics", () => {
    const rows = parseSweepCsv(readFileSync(GOLDEN.alpha, "utf8"));
    for (const metric of ["phi_d", "mean_r", "mean_d"] as const) {
      const model = buildFigure(rows, {
        inputCsv: GOLDEN.alpha,
        outputPath: "unused",
        metric,
      });
      expect(model.metric).toBe(metric);
    }
  });

  it("rejects a mismatched x variable", () => {
    const rows = parseSweepCsv(readFileSync(GOLDEN.alpha, "utf8"));
    expect(() =>
      buildFigure(rows, { inputCsv: "x", outputPath: "y", xVariable: "q" }),
    ).toThrow(/does not match the swept column/);
  });
});

describe("render", () => {
  it("writes an SVG for each golden sweep", () => {
    const dir = tmp();
    for (const path of Object.values(GOLDEN)) {
      const out = join(dir, "fig.svg");
      const model = render({ inputCsv: path, outputPath: out });
      expect(model.svg.startsWith("<svg")).toBe(true);
      expect(model.svg).toContain("</svg>");
      expect(existsSync(out)).toBe(true);
      expect(readFileSync(out, "utf8").length).toBeGreaterThan(1000);
    }
  });

  it("errors on an empty CSV and writes nothing", () => {
    const dir = tmp();
    const input = join(dir, "empty.csv");
    const output = join(dir, "empty.svg");
    writeFileSync(input, HEADER + "\n");
    expect(() => render({ inputCsv: input, outputPath: output })).toThrow(
      SchemaError,
    );
    expect(existsSync(output)).toBe(false);
  });

  it("renders a single-row CSV without error", () => {
    const dir = tmp();
    const input = join(dir, "single.csv");
    writeFileSync(input, `${HEADER}\n${ONE_ROW}\n`);
    const model = render({
      inputCsv: input,
      outputPath: join(dir, "single.svg"),
    });
    expect(model.svg).toContain("<svg");
    const series = model.option.series as Array<Record<string, unknown>>;
    expect(series.filter((s) => s.type === "line").length).toBe(1);
  });

  it("fails on a missing input file", () => {
    expect(() =>
      render({ inputCsv: "/no/such.csv", outputPath: "/tmp/x.svg" }),
    ).toThrow(/not found/);
  });
});

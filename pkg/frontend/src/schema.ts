/**
 * Sweep CSV schema shared with the simulation service.
 *
 * The pinned column block is followed by extra columns carrying the
 * reciprocal-form throughput estimator; readers must tolerate (and keep)
 * anything after the pinned block.
 */

import Papa from "papaparse";

export const PINNED_COLUMNS = [
  "regime", "period_slots", "alpha", "q", "payload_bits", "n",
  "mean_r", "se_r", "mean_d", "se_d", "drop_rate", "ref_r", "ref_d",
  "phi_r", "phi_d", "fair", "seed", "packets", "error",
] as const;

/** Columns a sweep can vary; exactly one varies per file. */
export const SWEEP_AXES = ["period_slots", "alpha", "q", "payload_bits"] as const;
export type SweepAxis = (typeof SWEEP_AXES)[number];

const NUMERIC_COLUMNS = [
  "period_slots", "alpha", "q", "payload_bits", "n", "mean_r", "se_r",
  "mean_d", "se_d", "drop_rate", "ref_r", "ref_d", "phi_r", "phi_d",
  "seed", "packets",
] as const;

export interface SweepRow {
  regime: string;
  period_slots: number;
  alpha: number;
  q: number;
  payload_bits: number;
  n: number;
  mean_r: number | null;
  se_r: number | null;
  mean_d: number | null;
  se_d: number | null;
  drop_rate: number | null;
  ref_r: number | null;
  ref_d: number | null;
  phi_r: number | null;
  phi_d: number | null;
  fair: boolean | null;
  seed: number;
  packets: number;
  error: string;
}

export class SchemaError extends Error {}

function toNumber(raw: string | undefined): number | null {
  if (raw === undefined || raw === "") return null;
  const value = Number(raw);
  if (Number.isNaN(value)) throw new SchemaError(`not a number: ${raw}`);
  return value;
}

/** Parse and validate sweep CSV text; rejects missing pinned columns. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse failed: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of PINNED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`missing required column: ${column}`);
    }
  }
  return parsed.data.map((raw) => {
    const row: Record<string, unknown> = { regime: raw.regime, error: raw.error ?? "" };
    for (const column of NUMERIC_COLUMNS) {
      row[column] = toNumber(raw[column]);
    }
    row.fair = raw.fair === "" || raw.fair === undefined ? null : raw.fair === "true";
    for (const key of ["period_slots", "alpha", "q", "payload_bits", "n", "seed", "packets"]) {
      if (row[key] === null) throw new SchemaError(`row missing ${key}`);
    }
    return row as unknown as SweepRow;
  });
}

/** The column that actually varies; every other axis must stay fixed. */
export function detectSweepAxis(rows: SweepRow[]): SweepAxis {
  if (rows.length === 0) throw new SchemaError("no rows to inspect");
  const varying = SWEEP_AXES.filter(
    (axis) => new Set(rows.map((r) => r[axis])).size > 1,
  );
  if (varying.length === 1) return varying[0];
  if (varying.length === 0) return "alpha"; // single point; any axis works
  throw new SchemaError(`expected one swept column, found: ${varying.join(", ")}`);
}

/**
 * Schema-checked reader for scattermet CSV artifacts.
 *
 * Every artifact starts with a `# schema=<name>` line followed by a header
 * row. Readers refuse unknown schemas and report column diffs, so figure
 * code never guesses at upstream layout changes.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  schema: string;
  columns: string[];
  /** Raw cell text, row-major; empty string marks a missing value. */
  rows: string[][];
}

export const SCHEMAS = {
  walkSummary: "scattermet.walk_summary.v1",
  walkTraces: "scattermet.walk_traces.v1",
  photonHist: "scattermet.photon_hist.v1",
  measurement: "scattermet.measurement.v1",
  qfiTable: "scattermet.qfi_table.v1",
  kadvScaling: "scattermet.kadv_scaling.v1",
} as const;

export function readTable(path: string, expectedSchema: string, expectedColumns?: string[]): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length < 2) {
    throw new SchemaError(`${path}: expected a schema line and a header row`);
  }
  const schemaMatch = lines[0].match(/^# schema=(\S+)$/);
  if (!schemaMatch) {
    throw new SchemaError(`${path}: missing '# schema=...' marker on line 1`);
  }
  const schema = schemaMatch[1];
  if (schema !== expectedSchema) {
    throw new SchemaError(`${path}: schema ${schema}, expected ${expectedSchema}`);
  }
  const columns = lines[1].split(",");
  if (expectedColumns) {
    const missing = expectedColumns.filter((c) => !columns.includes(c));
    const extra = columns.filter((c) => !expectedColumns.includes(c));
    if (missing.length > 0 || extra.length > 0) {
      throw new SchemaError(
        `${path}: column mismatch; missing [${missing.join(", ")}], unexpected [${extra.join(", ")}]`,
      );
    }
  }
  const rows = lines.slice(2).map((line) => line.split(","));
  return { schema, columns, rows };
}

/** Numeric column; blanks become NaN so optional overlays stay aligned. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column ${name} not in [${table.columns.join(", ")}]`);
  }
  return table.rows.map((row) => (row[idx] === "" || row[idx] === undefined ? NaN : Number(row[idx])));
}

export interface RunManifest {
  n_avg?: number;
  analytic_kadv?: number | null;
  empirical_kadv?: number | null;
  region_edge?: number | null;
  m?: number;
  chi?: number;
  [key: string]: unknown;
}

export function readManifest(path: string): RunManifest {
  const data = JSON.parse(readFileSync(path, "utf8")) as RunManifest;
  return data;
}

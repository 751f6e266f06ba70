import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { column, readTable, SCHEMAS, SchemaError } from "../src/csv.js";

const FIXTURES = join(__dirname, "fixtures");

function scratchFile(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("readTable", () => {
  it("reads a fixture summary", () => {
    const table = readTable(join(FIXTURES, "desk", "summary.csv"), SCHEMAS.walkSummary);
    expect(table.schema).toBe(SCHEMAS.walkSummary);
    expect(table.columns[0]).toBe("k");
    expect(table.rows.length).toBe(248);
  });

  it("refuses a missing schema marker", () => {
    const path = scratchFile("bad.csv", "k,p\n1,0.5\n");
    expect(() => readTable(path, SCHEMAS.walkSummary)).toThrow(SchemaError);
  });

  it("refuses the wrong schema version", () => {
    const path = scratchFile("bad.csv", "# schema=scattermet.walk_summary.v999\nk,p\n1,0.5\n");
    expect(() => readTable(path, SCHEMAS.walkSummary)).toThrow(/v999/);
  });

  it("reports the column diff on header mismatch", () => {
    const path = scratchFile(
      "bad.csv",
      "# schema=scattermet.photon_hist.v1\nn,count,pmf\n1,2,0.5\n",
    );
    try {
      readTable(path, SCHEMAS.photonHist, ["n", "count", "pmf_analytic"]);
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(String(err)).toContain("missing [pmf_analytic]");
      expect(String(err)).toContain("unexpected [pmf]");
    }
  });

  it("turns blank analytic cells into NaN", () => {
    const path = scratchFile(
      "s.csv",
      "# schema=scattermet.walk_summary.v1\nk,p_advantage,q05,q25,q50,q75,q95,analytic_p,region\n1,0.5,0,0,0,0,0,,\n",
    );
    const table = readTable(path, SCHEMAS.walkSummary);
    expect(Number.isNaN(column(table, "analytic_p")[0])).toBe(true);
  });

  it("rejects an unknown column request", () => {
    const table = readTable(join(FIXTURES, "kadv_scaling.csv"), SCHEMAS.kadvScaling);
    expect(() => column(table, "nope")).toThrow(SchemaError);
  });
});

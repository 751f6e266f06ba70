/**
 * The four figure kinds rendered from scattermet CSV artifacts.
 *
 * Physics is never recomputed here: every plotted value comes out of the CSV
 * columns or the run manifest written by the simulation CLI.
 */

import { column, readManifest, readTable, SCHEMAS, SchemaError, Table } from "./csv.js";
import { makeFrame, fmt } from "./svg.js";

export type FigureKind = "walker_bands" | "advantage_prob" | "photon_hist" | "kadv_scaling";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  manifest?: string;
  title?: string;
}

const EMPIRICAL_STYLE = "stroke:#1f77b4;stroke-width:1.6";
const ANALYTIC_STYLE = "stroke:#d62728;stroke-width:1.4;stroke-dasharray:6 3";
const MEDIAN_STYLE = "stroke:#1f77b4;stroke-width:1.6";
const OUTER_BAND_STYLE = "fill:#1f77b4;fill-opacity:0.15;stroke:none";
const INNER_BAND_STYLE = "fill:#1f77b4;fill-opacity:0.30;stroke:none";
const ZERO_STYLE = "stroke:#555555;stroke-width:1;stroke-dasharray:4 3";
const MARKER_STYLE = "stroke:#2ca02c;stroke-width:1.6;stroke-dasharray:2 2";
const REGION_STYLE = "fill:#999999;fill-opacity:0.12;stroke:none";
const BAR_STYLE = "fill:#1f77b4;fill-opacity:0.7;stroke:none";
const LABEL_STYLE = "font-size:11px;fill:#222222";

function pairs(xs: number[], ys: number[]): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i += 1) {
    if (Number.isFinite(xs[i]) && Number.isFinite(ys[i])) out.push([xs[i], ys[i]]);
  }
  return out;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (lo > hi) throw new SchemaError("no finite values to plot");
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

function readSummary(path: string): Table {
  return readTable(path, SCHEMAS.walkSummary, [
    "k", "p_advantage", "q05", "q25", "q50", "q75", "q95", "analytic_p", "region",
  ]);
}

export function walkerBands(summaryPath: string, title?: string): string {
  const table = readSummary(summaryPath);
  const k = column(table, "k");
  const q05 = column(table, "q05");
  const q25 = column(table, "q25");
  const q50 = column(table, "q50");
  const q75 = column(table, "q75");
  const q95 = column(table, "q95");
  const [lo, hi] = extent([...q05, ...q95, 0]);
  const frame = makeFrame({
    title: title ?? "Running information difference across the walker ensemble",
    xLabel: "samples k",
    yLabel: "total Fisher-information difference",
    xDomain: [k[0], k[k.length - 1]],
    yDomain: [lo, hi],
  });
  const { svg, x, y } = frame;
  const band = (upper: number[], lower: number[], style: string, cls: string) => {
    const top = pairs(k, upper).map(([a, b]) => [x.at(a), y.at(b)] as [number, number]);
    const bottom = pairs(k, lower)
      .map(([a, b]) => [x.at(a), y.at(b)] as [number, number])
      .reverse();
    svg.polygon([...top, ...bottom], style, cls);
  };
  band(q95, q05, OUTER_BAND_STYLE, "band-outer");
  band(q75, q25, INNER_BAND_STYLE, "band-inner");
  svg.line(x.r0, y.at(0), x.r1, y.at(0), ZERO_STYLE, "zero-line");
  svg.polyline(pairs(k, q50).map(([a, b]) => [x.at(a), y.at(b)]), MEDIAN_STYLE, "median");
  return svg.render();
}

export function advantageProb(summaryPath: string, manifestPath: string, title?: string): string {
  const table = readSummary(summaryPath);
  const manifest = readManifest(manifestPath);
  const k = column(table, "k");
  const p = column(table, "p_advantage");
  const analytic = column(table, "analytic_p");
  const region = column(table, "region");
  if (!analytic.some(Number.isFinite)) {
    throw new SchemaError(
      `${summaryPath}: analytic_p column is empty; the advantage figure needs the analytic overlay`,
    );
  }
  const kadv = manifest.analytic_kadv;
  if (kadv === undefined || kadv === null) {
    throw new SchemaError(`${manifestPath}: manifest carries no analytic_kadv for the marker`);
  }
  const frame = makeFrame({
    title: title ?? "Probability the separable stack is ahead after k samples",
    xLabel: "samples k",
    yLabel: "advantage probability",
    xDomain: [0, k[k.length - 1]],
    yDomain: [0, 1],
  });
  const { svg, x, y } = frame;

  // alternate shading per region of required enhanced-event count
  let start = 0;
  for (let i = 1; i <= region.length; i += 1) {
    const closing = i === region.length || region[i] !== region[start];
    if (!closing) continue;
    if (Number.isFinite(region[start]) && region[start] % 2 === 0) {
      svg.rect(x.at(k[start] - 0.5), y.r1, x.at(k[i - 1] + 0.5) - x.at(k[start] - 0.5),
        y.r0 - y.r1, REGION_STYLE, "region-shade");
    }
    if (i < region.length && Number.isFinite(region[i])) {
      svg.text(x.at(k[i]), y.r1 + 12, `x >= ${region[i]}`, LABEL_STYLE, "start", "region-label");
    }
    start = i;
  }

  svg.line(x.r0, y.at(0.5), x.r1, y.at(0.5), ZERO_STYLE, "half-line");
  svg.polyline(pairs(k, analytic).map(([a, b]) => [x.at(a), y.at(b)]), ANALYTIC_STYLE, "analytic");
  svg.polyline(pairs(k, p).map(([a, b]) => [x.at(a), y.at(b)]), EMPIRICAL_STYLE, "empirical");
  svg.line(x.at(kadv), y.r0, x.at(kadv), y.r1, MARKER_STYLE, "kadv-marker");
  svg.text(x.at(kadv) + 4, y.r1 + 24, `k_adv = ${fmt(kadv)}`, LABEL_STYLE, "start", "kadv-label");
  if (manifest.empirical_kadv !== undefined && manifest.empirical_kadv !== null) {
    svg.text(x.r1, y.r1 + 12, `empirical crossing ${fmt(manifest.empirical_kadv)}`,
      LABEL_STYLE, "end", "empirical-kadv");
  }
  return svg.render();
}

export function photonHist(histPath: string, manifestPath?: string, title?: string): string {
  const table = readTable(histPath, SCHEMAS.photonHist, ["n", "count", "pmf_analytic"]);
  const n = column(table, "n");
  const count = column(table, "count");
  const pmf = column(table, "pmf_analytic");
  const total = count.reduce((acc, c) => acc + c, 0);
  if (total <= 0) throw new SchemaError(`${histPath}: histogram is empty`);
  const peak = n[count.indexOf(Math.max(...count))];
  const frame = makeFrame({
    title: title ?? "Photon statistics of the scattershot samples",
    xLabel: "total photons n",
    yLabel: "samples",
    xDomain: [Math.min(...n) - 1, Math.max(...n) + 1],
    yDomain: [0, Math.max(...count, ...pmf.map((v) => v * total)) * 1.05],
  });
  const { svg, x, y } = frame;
  const barWidth = Math.max(1, (x.at(n[0] + 1) - x.at(n[0])) * 0.8);
  for (let i = 0; i < n.length; i += 1) {
    svg.rect(x.at(n[i]) - barWidth / 2, y.at(count[i]), barWidth, y.r0 - y.at(count[i]),
      BAR_STYLE, "hist-bar");
  }
  svg.polyline(pairs(n, pmf.map((v) => v * total)).map(([a, b]) => [x.at(a), y.at(b)]),
    ANALYTIC_STYLE, "pmf-overlay");
  svg.line(x.at(peak), y.r0, x.at(peak), y.r1, MARKER_STYLE, "peak-marker");
  let note = `peak at n = ${peak}`;
  if (manifestPath) {
    const manifest = readManifest(manifestPath);
    if (manifest.n_avg !== undefined) note += ` (target mean ${fmt(manifest.n_avg)})`;
  }
  svg.text(x.r1, y.r1 + 12, note, LABEL_STYLE, "end", "peak-label");
  return svg.render(`data-peak="${peak}"`);
}

export function kadvScaling(kadvPath: string, title?: string): string {
  const table = readTable(kadvPath, SCHEMAS.kadvScaling, ["m", "n_avg", "kadv"]);
  const m = column(table, "m");
  const navg = column(table, "n_avg");
  const kadv = column(table, "kadv");
  const groups = new Map<number, Array<[number, number]>>();
  for (let i = 0; i < m.length; i += 1) {
    const key = navg[i];
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push([Math.log2(m[i]), kadv[i]]);
  }
  const xs = m.map((v) => Math.log2(v));
  const frame = makeFrame({
    title: title ?? "Sample-size advantage of the symmetric network",
    xLabel: "modes m (log2)",
    yLabel: "k_adv",
    xDomain: extent(xs),
    yDomain: [0, extent(kadv)[1] * 1.05],
  });
  const { svg, x, y } = frame;
  const palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];
  let index = 0;
  for (const [key, points] of [...groups.entries()].sort((a, b) => a[0] - b[0])) {
    const colour = palette[index % palette.length];
    points.sort((a, b) => a[0] - b[0]);
    svg.polyline(points.map(([a, b]) => [x.at(a), y.at(b)]),
      `stroke:${colour};stroke-width:1.6`, `kadv-curve-n${key}`);
    const last = points[points.length - 1];
    svg.text(x.at(last[0]) - 4, y.at(last[1]) - 6, `<n> = ${key}`,
      `font-size:11px;fill:${colour}`, "end", "legend");
    index += 1;
  }
  return svg.render();
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "walker_bands":
      return walkerBands(spec.inputs[0], spec.title);
    case "advantage_prob":
      if (!spec.manifest) {
        throw new SchemaError("advantage_prob needs --manifest for the k_adv marker");
      }
      return advantageProb(spec.inputs[0], spec.manifest, spec.title);
    case "photon_hist":
      return photonHist(spec.inputs[0], spec.manifest, spec.title);
    case "kadv_scaling":
      return kadvScaling(spec.inputs[0], spec.title);
    default:
      throw new SchemaError(`unknown figure kind ${(spec as FigureSpec).kind}`);
  }
}

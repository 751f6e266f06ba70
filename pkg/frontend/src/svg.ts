/**
 * Minimal deterministic SVG scene builder: fixed-precision coordinates, no
 * timestamps or randomness, so identical inputs give identical bytes.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 36, right: 24, bottom: 46, left: 60 };

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const text = x.toFixed(2);
  return text === "-0.00" ? "0.00" : text;
}

/** Human-friendly tick label: trims trailing zeros, keeps integers bare. */
export function tickLabel(x: number): string {
  if (Number.isInteger(x)) return String(x);
  return String(Number(x.toPrecision(6)));
}

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  at(x: number): number {
    if (this.d1 === this.d0) return (this.r0 + this.r1) / 2;
    return this.r0 + ((x - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  ticks(count = 6): number[] {
    const span = this.d1 - this.d0;
    if (span <= 0) return [this.d0];
    const rawStep = span / count;
    const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
    const candidates = [1, 2, 5, 10].map((k) => k * mag);
    const step = candidates.find((c) => span / c <= count) ?? candidates[3];
    const start = Math.ceil(this.d0 / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.d1 + 1e-9 * step; v += step) {
      out.push(Math.abs(v) < 1e-12 ? 0 : v);
    }
    return out;
  }
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  raw(element: string): void {
    this.parts.push(element);
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string, cls = ""): void {
    const klass = cls ? ` class="${cls}"` : "";
    this.parts.push(
      `<line${klass} x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" style="${style}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, style: string, cls = ""): void {
    const klass = cls ? ` class="${cls}"` : "";
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polyline${klass} fill="none" points="${path}" style="${style}"/>`);
  }

  polygon(points: Array<[number, number]>, style: string, cls = ""): void {
    const klass = cls ? ` class="${cls}"` : "";
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polygon${klass} points="${path}" style="${style}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, style: string, cls = ""): void {
    const klass = cls ? ` class="${cls}"` : "";
    this.parts.push(
      `<rect${klass} x="${fmt(x)}" y="${fmt(y)}" width="${fmt(Math.max(0, w))}" height="${fmt(Math.max(0, h))}" style="${style}"/>`,
    );
  }

  text(x: number, y: number, content: string, style: string, anchor = "middle", cls = ""): void {
    const klass = cls ? ` class="${cls}"` : "";
    const escaped = content
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    this.parts.push(
      `<text${klass} x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" style="${style}">${escaped}</text>`,
    );
  }

  render(extraAttributes = ""): string {
    const attrs = extraAttributes ? ` ${extraAttributes}` : "";
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${this.width} ${this.height}" width="${this.width}" height="${this.height}" font-family="Helvetica, Arial, sans-serif"${attrs}>`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" style="fill:#ffffff"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

export interface Frame {
  svg: Svg;
  x: LinearScale;
  y: LinearScale;
}

const AXIS_STYLE = "stroke:#222222;stroke-width:1";
const GRID_STYLE = "stroke:#dddddd;stroke-width:0.5";
const LABEL_STYLE = "font-size:11px;fill:#222222";
const TITLE_STYLE = "font-size:13px;fill:#111111;font-weight:bold";

export interface FrameOptions {
  width?: number;
  height?: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
  margin?: Margin;
}

/** Axes, grid, labels; returns scales mapping data space onto the panel. */
export function makeFrame(options: FrameOptions): Frame {
  const width = options.width ?? 640;
  const height = options.height ?? 400;
  const margin = options.margin ?? DEFAULT_MARGIN;
  const svg = new Svg(width, height);
  const x = new LinearScale(options.xDomain[0], options.xDomain[1], margin.left, width - margin.right);
  const y = new LinearScale(options.yDomain[0], options.yDomain[1], height - margin.bottom, margin.top);

  for (const t of x.ticks()) {
    svg.line(x.at(t), y.r0, x.at(t), y.r1, GRID_STYLE);
    svg.text(x.at(t), y.r0 + 16, tickLabel(t), LABEL_STYLE);
  }
  for (const t of y.ticks()) {
    svg.line(x.r0, y.at(t), x.r1, y.at(t), GRID_STYLE);
    svg.text(x.r0 - 6, y.at(t) + 3, tickLabel(t), LABEL_STYLE, "end");
  }
  svg.line(x.r0, y.r0, x.r1, y.r0, AXIS_STYLE);
  svg.line(x.r0, y.r0, x.r0, y.r1, AXIS_STYLE);
  svg.text((x.r0 + x.r1) / 2, height - 12, options.xLabel, LABEL_STYLE);
  svg.raw(
    `<text x="${fmt(16)}" y="${fmt((y.r0 + y.r1) / 2)}" text-anchor="middle" style="${LABEL_STYLE}" transform="rotate(-90 16 ${fmt((y.r0 + y.r1) / 2)})">${options.yLabel}</text>`,
  );
  svg.text((x.r0 + x.r1) / 2, 20, options.title, TITLE_STYLE);
  return { svg, x, y };
}

/**
 * plot --kind <kind> --in <csv...> [--manifest <json>] --out <image.svg>
 *
 * Pure file-to-file: identical inputs produce identical output bytes. Exits
 * nonzero on unknown schemas, column mismatches, or missing inputs.
 */

import { writeFileSync } from "node:fs";
import { extname } from "node:path";

import { SchemaError } from "./csv.js";
import { FigureKind, FigureSpec, renderFigure } from "./figures.js";

const KINDS: FigureKind[] = ["walker_bands", "advantage_prob", "photon_hist", "kadv_scaling"];

const USAGE = `usage: plot --kind <${KINDS.join("|")}> --in <csv...> [--manifest <json>] --out <image.svg> [--title <text>]`;

export function parseArgs(argv: string[]): FigureSpec {
  let kind: string | undefined;
  const inputs: string[] = [];
  let output: string | undefined;
  let manifest: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new SchemaError(`${arg} needs a value\n${USAGE}`);
      return argv[i];
    };
    switch (arg) {
      case "--kind":
        kind = next();
        break;
      case "--in":
        inputs.push(next());
        while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
          inputs.push(argv[++i]);
        }
        break;
      case "--manifest":
        manifest = next();
        break;
      case "--out":
        output = next();
        break;
      case "--title":
        title = next();
        break;
      default:
        throw new SchemaError(`unknown argument ${arg}\n${USAGE}`);
    }
  }
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    throw new SchemaError(`--kind must be one of ${KINDS.join(", ")}\n${USAGE}`);
  }
  if (inputs.length === 0 || !output) {
    throw new SchemaError(`--in and --out are required\n${USAGE}`);
  }
  if (extname(output).toLowerCase() !== ".svg") {
    throw new SchemaError(`unsupported image format ${extname(output) || "(none)"}; write an .svg file`);
  }
  return { kind: kind as FigureKind, inputs, output, manifest, title };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 2;
  }
  try {
    const svg = renderFigure(spec);
    writeFileSync(spec.output, svg + "\n", { encoding: "utf8" });
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("plot")) {
  process.exit(main(process.argv.slice(2)));
}

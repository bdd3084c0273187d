#!/usr/bin/env node
/**
 * plot --input aggregate.csv --swept n --out fig.svg
 *
 * Reads a benchmark aggregate CSV and writes an SVG figure: per estimator a
 * median line plus a shaded interquartile band. Exits nonzero with a message
 * on malformed schema, empty input, or an unknown swept variable.
 */
import { readFileSync, writeFileSync } from "node:fs";

import { renderPlot } from "./render.js";
import { SWEPT_VARS, SchemaError, SweptVar, parseAggregateCsv } from "./schema.js";

const USAGE = "usage: plot --input <aggregate.csv> --swept <n|k|eps> --out <fig.svg>";

interface Args {
  input: string;
  swept: SweptVar;
  out: string;
}

export function parseArgs(argv: string[]): Args {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new SchemaError(USAGE);
    }
    opts.set(flag.slice(2), value);
  }
  const input = opts.get("input");
  const swept = opts.get("swept");
  const out = opts.get("out");
  const known = new Set(["input", "swept", "out"]);
  for (const key of opts.keys()) {
    if (!known.has(key)) throw new SchemaError(`unknown option --${key}\n${USAGE}`);
  }
  if (!input || !swept || !out) throw new SchemaError(USAGE);
  if (!(SWEPT_VARS as readonly string[]).includes(swept)) {
    throw new SchemaError(`--swept must be one of ${SWEPT_VARS.join(", ")}, got "${swept}"`);
  }
  return { input, swept: swept as SweptVar, out };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const rows = parseAggregateCsv(readFileSync(args.input, "utf8"));
    writeFileSync(args.out, renderPlot(rows, args.swept));
    return 0;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: ${message}\n`);
    return 1;
  }
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!)) {
  process.exit(main(process.argv.slice(2)));
}

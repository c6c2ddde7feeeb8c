#!/usr/bin/env node
/**
 * plot <kind> <csv...> -o <file.svg> [--title <text>]
 *
 * Kinds:
 *   curves      one or more trace CSVs -> fidelity-vs-resources plot (log x)
 *   winner_map  one sweep CSV -> winning-strategy heatmap
 *   gain_map    one sweep CSV -> winner gain / resource-difference heatmap
 */

import { readFileSync, writeFileSync } from "fs";

import { SchemaError } from "./csv.js";
import { PlotKind, render } from "./plots.js";

const KINDS: PlotKind[] = ["curves", "winner_map", "gain_map"];

export function main(argv: string[]): number {
  const args = [...argv];
  const kind = args.shift();
  if (!kind || !KINDS.includes(kind as PlotKind)) {
    process.stderr.write(`usage: plot <${KINDS.join("|")}> <csv...> -o <file.svg> [--title <text>]\n`);
    return 1;
  }
  let output: string | undefined;
  let title: string | undefined;
  const paths: string[] = [];
  while (args.length > 0) {
    const arg = args.shift() as string;
    if (arg === "-o" || arg === "--output") {
      output = args.shift();
    } else if (arg === "--title") {
      title = args.shift();
    } else {
      paths.push(arg);
    }
  }
  if (!output || paths.length === 0) {
    process.stderr.write("error: need at least one input CSV and -o <file.svg>\n");
    return 1;
  }
  try {
    const inputs = paths.map((p) => ({ path: p, text: readFileSync(p, "utf-8") }));
    const svg = render({ kind: kind as PlotKind, inputs, title });
    writeFileSync(output, svg, "utf-8");
    process.stdout.write(`wrote ${output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 2;
    }
    process.stderr.write(`error: ${String(err)}\n`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}

#!/usr/bin/env node
/** Command line: d2dalloc-plots <render|compare> --input run.csv
 *  [--input other.csv ...] --columns a,b --window N --output base [--title t] */

import { parseArgs } from "node:util";
import { compare, render } from "./render.js";

function usage(): string {
  return [
    "usage: d2dalloc-plots <render|compare> --input <csv> [--input <csv> ...]",
    "         [--columns col1,col2] [--window N] --output <base> [--title <t>]",
    "",
    "render   one CSV -> one SVG + one PNG figure",
    "compare  overlay >= 2 CSVs with identical epoch ranges",
  ].join("\n");
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render" && command !== "compare") {
    process.stderr.write(usage() + "\n");
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      options: {
        input: { type: "string", multiple: true },
        columns: { type: "string", default: "social_utility_bps,normalized_mood" },
        window: { type: "string", default: "1" },
        output: { type: "string" },
        title: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${usage()}\n`);
    return 2;
  }
  const { values } = parsed;
  if (!values.input || values.input.length === 0 || !values.output) {
    process.stderr.write("error: --input and --output are required\n" + usage() + "\n");
    return 2;
  }
  const window = Number(values.window);
  const spec = {
    inputs: values.input,
    columns: (values.columns as string).split(",").map((c) => c.trim()),
    window,
    output: values.output,
    title: values.title,
  };
  try {
    const result = command === "render" ? render(spec) : compare(spec);
    process.stdout.write(`svg: ${result.svgPath}\npng: ${result.pngPath}\n`);
    for (const s of result.chart.series) {
      process.stdout.write(`series ${s.label}: n=${s.y.length} ` +
                           `max=${Math.max(...s.y)} min=${Math.min(...s.y)}\n`);
    }
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

process.exitCode = main(process.argv.slice(2));

/** Chart assembly: CSV inputs + column selection + smoothing -> plotted
 * series. The series carry the exact values that end up in the figure. */

import { basename } from "node:path";
import { Csv, column, readCsv } from "./csv.js";
import { movingAverage } from "./smooth.js";

/** Columns bounded in [0, 1] go on the right axis. */
const RIGHT_AXIS = /^(normalized_mood|p\d+_mood)$/;

export interface Series {
  label: string;
  x: number[];
  y: number[];
  axis: "left" | "right";
}

export interface Chart {
  title: string;
  xLabel: string;
  series: Series[];
}

export class EpochMismatchError extends Error {
  constructor(a: string, b: string) {
    super(`epoch ranges differ between ${a} and ${b}`);
    this.name = "EpochMismatchError";
  }
}

export interface Input {
  path: string;
  csv: Csv;
  label: string;
}

export function loadInput(path: string): Input {
  return { path, csv: readCsv(path), label: basename(path).replace(/\.csv$/, "") };
}

function buildSeries(input: Input, col: string, window: number, prefix: string): Series {
  const x = column(input.csv, "epoch", input.path);
  const y = movingAverage(column(input.csv, col, input.path), window);
  return {
    label: prefix ? `${prefix} ${col}` : col,
    x,
    y,
    axis: RIGHT_AXIS.test(col) ? "right" : "left",
  };
}

export function buildChart(inputs: Input[], columns: string[], window: number,
                           title: string): Chart {
  if (inputs.length === 0) throw new Error("need at least one input CSV");
  if (columns.length === 0) throw new Error("need at least one column to plot");
  const first = column(inputs[0].csv, "epoch", inputs[0].path);
  for (const inp of inputs.slice(1)) {
    const epochs = column(inp.csv, "epoch", inp.path);
    if (epochs.length !== first.length ||
        epochs.some((e, i) => e !== first[i])) {
      throw new EpochMismatchError(inputs[0].path, inp.path);
    }
  }
  const multi = inputs.length > 1;
  const series: Series[] = [];
  for (const inp of inputs) {
    for (const col of columns) {
      series.push(buildSeries(inp, col, window, multi ? inp.label : ""));
    }
  }
  return { title, xLabel: "epoch", series };
}

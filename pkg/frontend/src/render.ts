/** High-level render/compare operations: CSV(s) in, one vector (SVG) and one
 * raster (PNG) file out per invocation. Inputs are opened read-only and never
 * modified. */

import { writeFileSync } from "node:fs";
import { Chart, buildChart, loadInput } from "./chart.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export interface PlotSpec {
  inputs: string[];
  columns: string[];
  window: number;
  output: string;   // base path; .svg and .png are appended
  title?: string;
}

export interface RenderResult {
  chart: Chart;
  svgPath: string;
  pngPath: string;
}

function writeFigure(chart: Chart, output: string): RenderResult {
  const base = output.replace(/\.(svg|png)$/, "");
  const svgPath = `${base}.svg`;
  const pngPath = `${base}.png`;
  writeFileSync(svgPath, renderSvg(chart));
  writeFileSync(pngPath, renderPng(chart));
  return { chart, svgPath, pngPath };
}

export function render(spec: PlotSpec): RenderResult {
  if (spec.inputs.length !== 1) {
    throw new Error(`render takes exactly one input, got ${spec.inputs.length}`);
  }
  const input = loadInput(spec.inputs[0]);
  const chart = buildChart([input], spec.columns, spec.window,
                           spec.title ?? input.label);
  return writeFigure(chart, spec.output);
}

export function compare(spec: PlotSpec): RenderResult {
  if (spec.inputs.length < 2) {
    throw new Error(`compare needs at least 2 inputs, got ${spec.inputs.length}`);
  }
  const inputs = spec.inputs.map(loadInput);
  const chart = buildChart(inputs, spec.columns, spec.window,
                           spec.title ?? "comparison");
  return writeFigure(chart, spec.output);
}

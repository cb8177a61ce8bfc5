export { EmptyCsvError, MissingColumnError, column, parseCsvText, readCsv } from "./csv.js";
export type { Csv } from "./csv.js";
export { movingAverage } from "./smooth.js";
export { EpochMismatchError, buildChart, loadInput } from "./chart.js";
export type { Chart, Input, Series } from "./chart.js";
export { renderSvg } from "./svg.js";
export { renderPng } from "./png.js";
export { compare, render } from "./render.js";
export type { PlotSpec, RenderResult } from "./render.js";

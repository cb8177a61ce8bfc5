/** Static SVG line-chart writer. Each polyline carries data-label / data-max
 * / data-min attributes with the exact plotted values, so figure fidelity is
 * machine-checkable from the artifact itself. */

import { Chart, Series } from "./chart.js";

export const WIDTH = 960;
export const HEIGHT = 540;
export const MARGIN = { top: 48, right: 64, bottom: 48, left: 72 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

export interface Scale {
  min: number;
  max: number;
  toPixel(v: number): number;
}

function linearScale(min: number, max: number, p0: number, p1: number): Scale {
  const span = max - min || 1;
  return { min, max, toPixel: (v: number) => p0 + ((v - min) / span) * (p1 - p0) };
}

export function chartScales(chart: Chart) {
  const xs = chart.series.flatMap((s) => s.x);
  const leftYs = chart.series.filter((s) => s.axis === "left").flatMap((s) => s.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  let lo = leftYs.length ? Math.min(...leftYs) : 0;
  let hi = leftYs.length ? Math.max(...leftYs) : 1;
  const pad = (hi - lo || 1) * 0.05;
  lo -= pad;
  hi += pad;
  return {
    x: linearScale(xMin, xMax, MARGIN.left, WIDTH - MARGIN.right),
    left: linearScale(lo, hi, HEIGHT - MARGIN.bottom, MARGIN.top),
    right: linearScale(0, 1, HEIGHT - MARGIN.bottom, MARGIN.top),
  };
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
          .replace(/"/g, "&quot;");
}

function polyline(s: Series, color: string,
                  scales: ReturnType<typeof chartScales>): string {
  const yScale = s.axis === "left" ? scales.left : scales.right;
  const pts = s.x.map((x, i) =>
    `${scales.x.toPixel(x).toFixed(2)},${yScale.toPixel(s.y[i]).toFixed(2)}`).join(" ");
  const yMax = Math.max(...s.y);
  const yMin = Math.min(...s.y);
  return `<polyline fill="none" stroke="${color}" stroke-width="1.2" ` +
         `data-label="${esc(s.label)}" data-max="${yMax}" data-min="${yMin}" ` +
         `points="${pts}"/>`;
}

export function renderSvg(chart: Chart): string {
  const scales = chartScales(chart);
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  // axes
  const x0 = MARGIN.left, x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom, y1 = MARGIN.top;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  const hasRight = chart.series.some((s) => s.axis === "right");
  if (hasRight) {
    parts.push(`<line x1="${x1}" y1="${y0}" x2="${x1}" y2="${y1}" stroke="black"/>`);
  }
  // axis ticks and labels
  for (let i = 0; i <= 4; i++) {
    const fx = scales.x.min + (i / 4) * (scales.x.max - scales.x.min);
    const px = scales.x.toPixel(fx);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(`<text x="${px}" y="${y0 + 20}" font-size="11" text-anchor="middle">${fx.toPrecision(4)}</text>`);
    const fy = scales.left.min + (i / 4) * (scales.left.max - scales.left.min);
    const py = scales.left.toPixel(fy);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py + 4}" font-size="11" text-anchor="end">${fy.toPrecision(4)}</text>`);
    if (hasRight) {
      const ry = scales.right.toPixel(i / 4);
      parts.push(`<text x="${x1 + 8}" y="${ry + 4}" font-size="11" text-anchor="start">${(i / 4).toFixed(2)}</text>`);
    }
  }
  parts.push(`<text x="${WIDTH / 2}" y="24" font-size="15" text-anchor="middle">${esc(chart.title)}</text>`);
  parts.push(`<text x="${WIDTH / 2}" y="${HEIGHT - 10}" font-size="12" text-anchor="middle">${esc(chart.xLabel)}</text>`);
  // series and legend
  chart.series.forEach((s, i) => {
    parts.push(polyline(s, PALETTE[i % PALETTE.length], scales));
  });
  chart.series.forEach((s, i) => {
    const ly = MARGIN.top + 14 * i;
    const color = PALETTE[i % PALETTE.length];
    parts.push(`<line x1="${x0 + 10}" y1="${ly}" x2="${x0 + 34}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${x0 + 40}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

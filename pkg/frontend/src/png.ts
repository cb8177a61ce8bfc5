/** Minimal dependency-free PNG raster of a chart: white canvas, axes and
 * per-series polylines. Uses zlib for the IDAT stream. */

import { deflateSync } from "node:zlib";
import { Chart } from "./chart.js";
import { HEIGHT, MARGIN, PALETTE, WIDTH, chartScales } from "./svg.js";

class Canvas {
  data: Uint8Array;
  constructor(readonly w: number, readonly h: number) {
    this.data = new Uint8Array(w * h * 3).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x), yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.w || yi >= this.h) return;
    const o = (yi * this.w + xi) * 3;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
  }

  line(x0: number, y0: number, x1: number, y1: number,
       rgb: [number, number, number]): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      this.set(x0 + t * (x1 - x0), y0 + t * (y1 - y0), rgb);
    }
  }
}

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const out = Buffer.alloc(12 + payload.length);
  out.writeUInt32BE(payload.length, 0);
  out.write(type, 4, "ascii");
  Buffer.from(payload).copy(out, 8);
  const crcBuf = Buffer.alloc(4 + payload.length);
  crcBuf.write(type, 0, "ascii");
  Buffer.from(payload).copy(crcBuf, 4);
  out.writeUInt32BE(crc32(crcBuf), 8 + payload.length);
  return out;
}

function encodePng(canvas: Canvas): Buffer {
  const { w, h, data } = canvas;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(w, 0);
  ihdr.writeUInt32BE(h, 4);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // truecolor
  const raw = Buffer.alloc(h * (1 + w * 3));
  for (let y = 0; y < h; y++) {
    raw[y * (1 + w * 3)] = 0; // no filter
    Buffer.from(data.subarray(y * w * 3, (y + 1) * w * 3))
      .copy(raw, y * (1 + w * 3) + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

function hexToRgb(hex: string): [number, number, number] {
  return [parseInt(hex.slice(1, 3), 16), parseInt(hex.slice(3, 5), 16),
          parseInt(hex.slice(5, 7), 16)];
}

export function renderPng(chart: Chart): Buffer {
  const canvas = new Canvas(WIDTH, HEIGHT);
  const scales = chartScales(chart);
  const black: [number, number, number] = [0, 0, 0];
  const x0 = MARGIN.left, x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom, y1 = MARGIN.top;
  canvas.line(x0, y0, x1, y0, black);
  canvas.line(x0, y0, x0, y1, black);
  if (chart.series.some((s) => s.axis === "right")) {
    canvas.line(x1, y0, x1, y1, black);
  }
  chart.series.forEach((s, i) => {
    const rgb = hexToRgb(PALETTE[i % PALETTE.length]);
    const yScale = s.axis === "left" ? scales.left : scales.right;
    for (let j = 1; j < s.x.length; j++) {
      canvas.line(scales.x.toPixel(s.x[j - 1]), yScale.toPixel(s.y[j - 1]),
                  scales.x.toPixel(s.x[j]), yScale.toPixel(s.y[j]), rgb);
    }
  });
  return encodePng(canvas);
}

// Tiny dependency-free strip chart.  Redraws the whole canvas from the
// session's frame ring; at 600 points and a few series that is well under
// a millisecond, so there is no incremental path.

import type { TelemetryFrame } from "./protocol.js";

export interface ChartSeries {
  label: string;
  color: string;
  pick: (frame: TelemetryFrame) => number;
}

const MARGIN = { left: 44, right: 10, top: 10, bottom: 22 };

export function drawChart(
  canvas: HTMLCanvasElement,
  frames: readonly TelemetryFrame[],
  series: readonly ChartSeries[],
): void {
  const dpr = window.devicePixelRatio || 1;
  const cssWidth = canvas.clientWidth || 640;
  const cssHeight = canvas.clientHeight || 240;
  if (canvas.width !== cssWidth * dpr || canvas.height !== cssHeight * dpr) {
    canvas.width = cssWidth * dpr;
    canvas.height = cssHeight * dpr;
  }
  const ctx = canvas.getContext("2d");
  if (ctx === null) {
    return;
  }
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  ctx.clearRect(0, 0, cssWidth, cssHeight);
  ctx.fillStyle = "#11161d";
  ctx.fillRect(0, 0, cssWidth, cssHeight);

  const plotW = cssWidth - MARGIN.left - MARGIN.right;
  const plotH = cssHeight - MARGIN.top - MARGIN.bottom;
  if (frames.length < 2 || plotW <= 0 || plotH <= 0) {
    ctx.fillStyle = "#8a94a3";
    ctx.font = "13px system-ui, sans-serif";
    ctx.fillText("waiting for telemetry...", MARGIN.left + 8, cssHeight / 2);
    return;
  }

  const t0 = frames[0].t;
  const t1 = frames[frames.length - 1].t;
  const tSpan = Math.max(t1 - t0, 1e-9);
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const f of frames) {
      const v = s.pick(f);
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    return;
  }
  const pad = Math.max((hi - lo) * 0.08, 1);
  lo -= pad;
  hi += pad;

  const x = (t: number): number => MARGIN.left + ((t - t0) / tSpan) * plotW;
  const y = (v: number): number => MARGIN.top + (1 - (v - lo) / (hi - lo)) * plotH;

  ctx.strokeStyle = "#2a3340";
  ctx.fillStyle = "#8a94a3";
  ctx.font = "11px system-ui, sans-serif";
  ctx.lineWidth = 1;
  const gridLines = 4;
  for (let i = 0; i <= gridLines; i++) {
    const v = lo + ((hi - lo) * i) / gridLines;
    const yy = y(v);
    ctx.beginPath();
    ctx.moveTo(MARGIN.left, yy);
    ctx.lineTo(cssWidth - MARGIN.right, yy);
    ctx.stroke();
    ctx.fillText(v.toFixed(1), 4, yy + 4);
  }
  for (let i = 0; i <= 4; i++) {
    const t = t0 + (tSpan * i) / 4;
    const xx = x(t);
    ctx.fillText(t.toFixed(1) + "s", xx - 10, cssHeight - 6);
  }

  ctx.lineWidth = 1.6;
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    frames.forEach((f, i) => {
      const xx = x(f.t);
      const yy = y(s.pick(f));
      if (i === 0) {
        ctx.moveTo(xx, yy);
      } else {
        ctx.lineTo(xx, yy);
      }
    });
    ctx.stroke();
  }

  let legendX = MARGIN.left + 8;
  ctx.font = "12px system-ui, sans-serif";
  for (const s of series) {
    ctx.fillStyle = s.color;
    ctx.fillRect(legendX, MARGIN.top + 4, 10, 10);
    ctx.fillStyle = "#c9d2dd";
    ctx.fillText(s.label, legendX + 14, MARGIN.top + 13);
    legendX += 14 + ctx.measureText(s.label).width + 16;
  }
}

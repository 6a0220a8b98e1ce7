/** Plot models plus a minimal canvas line renderer.
 *
 * Models are plain data so tests can assert on the plotted series and the
 * cursor position without touching pixels.
 */

export interface PlotModel {
  title: string;
  unit: string;
  series: number[];
  cursorPhase: number;
}

import { Source, ViewerBundle, series } from "./bundle.js";
import { ViewerState } from "./state.js";

const QUANTITIES: { key: "pos_deg" | "torque_nmkg" | "power_wkg"; title: string; unit: string }[] = [
  { key: "pos_deg", title: "joint angle", unit: "deg" },
  { key: "torque_nmkg", title: "joint torque", unit: "N.m/kg" },
  { key: "power_wkg", title: "joint power", unit: "W/kg" },
];

export function buildPlotModels(bundle: ViewerBundle, state: ViewerState): PlotModel[] {
  return QUANTITIES.map(({ key, title, unit }) => ({
    title,
    unit,
    series: series(bundle, state.source as Source, key, state.selectedJoint, state.speedIndex),
    cursorPhase: state.phase,
  }));
}

export function renderPlot(canvas: HTMLCanvasElement, model: PlotModel): void {
  const ctx = canvas.getContext ? canvas.getContext("2d") : null;
  if (!ctx) return; // headless test environment
  const { width, height } = canvas;
  const pad = { left: 44, right: 8, top: 18, bottom: 16 };
  const w = width - pad.left - pad.right;
  const h = height - pad.top - pad.bottom;
  ctx.clearRect(0, 0, width, height);

  const lo = Math.min(...model.series);
  const hi = Math.max(...model.series);
  const span = hi - lo || 1;
  const x = (k: number) => pad.left + (w * k) / (model.series.length - 1);
  const y = (v: number) => pad.top + h * (1 - (v - lo) / span);

  ctx.strokeStyle = "#ccc";
  ctx.lineWidth = 1;
  ctx.strokeRect(pad.left, pad.top, w, h);
  if (lo < 0 && hi > 0) {
    ctx.beginPath();
    ctx.moveTo(pad.left, y(0));
    ctx.lineTo(pad.left + w, y(0));
    ctx.stroke();
  }

  ctx.strokeStyle = "#2b6cb0";
  ctx.lineWidth = 1.6;
  ctx.beginPath();
  model.series.forEach((v, k) => {
    if (k === 0) ctx.moveTo(x(k), y(v));
    else ctx.lineTo(x(k), y(v));
  });
  ctx.stroke();

  // shared phase cursor
  ctx.strokeStyle = "#d33";
  ctx.lineWidth = 1.5;
  const cx = pad.left + w * model.cursorPhase;
  ctx.beginPath();
  ctx.moveTo(cx, pad.top);
  ctx.lineTo(cx, pad.top + h);
  ctx.stroke();

  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(`${model.title} (${model.unit})`, pad.left, 12);
  ctx.fillText(hi.toPrecision(3), 2, pad.top + 8);
  ctx.fillText(lo.toPrecision(3), 2, pad.top + h);
}

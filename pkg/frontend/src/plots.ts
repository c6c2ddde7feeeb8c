/**
 * The three figure kinds rendered from the simulator's CSV outputs:
 *
 *  - curves:     fidelity vs expected channel uses (log x), one curve per
 *                trace CSV
 *  - winner_map: heatmap of the winning strategy per sweep cell, colored
 *                by strategy family (pumping blues/pinks vs recurrence
 *                orange vs "same" green)
 *  - gain_map:   per-cell scalar map; fidelity gain of the winner for
 *                budget sweeps, or the recurrence-vs-pumping resource
 *                difference (log10) for target-fidelity sweeps
 *
 * Rendering is a pure function of the parsed CSV content.
 */

import { SweepCell, SweepTable, TraceRow, parseSweepCsv, parseTraceCsv, traceLabel } from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  SvgDoc,
  WIDTH,
  decadeTicks,
  fmt,
  linearScale,
  log10Scale,
  niceTicks,
  tickLabel,
} from "./svg.js";

export type PlotKind = "curves" | "winner_map" | "gain_map";

export interface PlotJob {
  kind: PlotKind;
  inputs: Array<{ path: string; text: string }>;
  title?: string;
}

const CURVE_COLORS = [
  "#e07b00",
  "#1f77b4",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#17becf",
];

/** Family palette for winner maps: pumping strategies get graded shades. */
export function winnerColor(winner: string): string {
  if (winner === "same") return "#2d8a4e";
  if (winner === "tcp") return "#e07b00";
  if (winner === "none" || winner === "") return "#d9d9d9";
  const match = winner.match(/^([sc])-(\d+)$/);
  if (match) {
    const depth = Math.min(Number(match[2]), 5);
    // lighter shade for small alpha, saturated for deep pre-purification
    const base = match[1] === "s" ? [31, 119, 180] : [214, 51, 132];
    const t = 0.35 + 0.13 * depth;
    const rgb = base.map((c) => Math.round(255 - (255 - c) * t));
    return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
  }
  if (winner.startsWith("hybrid")) return "#7b4fa6";
  return "#999999";
}

export function render(job: PlotJob): string {
  if (job.kind === "curves") {
    return renderCurves(job);
  }
  if (job.inputs.length !== 1) {
    throw new Error(`${job.kind} takes exactly one sweep CSV`);
  }
  const table = parseSweepCsv(job.inputs[0].text);
  return job.kind === "winner_map"
    ? renderWinnerMap(table, job.title ?? "Winning strategy")
    : renderGainMap(table, job.title);
}

// ---------------------------------------------------------------- curves

function renderCurves(job: PlotJob): string {
  const series = job.inputs.map((input) => ({
    label: traceLabel(input.path),
    rows: parseTraceCsv(input.text),
  }));
  const all: TraceRow[] = series.flatMap((s) => s.rows);
  const rMin = Math.min(...all.map((r) => r.resources));
  const rMax = Math.max(...all.map((r) => r.resources));
  const fMin = Math.min(...all.map((r) => r.fidelity));
  const fMax = Math.max(...all.map((r) => r.fidelity));

  const doc = new SvgDoc(job.title ?? "Fidelity vs expected channel uses");
  const x = log10Scale(rMin, rMax * 1.05, MARGIN.left, WIDTH - MARGIN.right);
  const yPad = Math.max((fMax - fMin) * 0.05, 0.005);
  const y = linearScale(fMin - yPad, Math.min(fMax + yPad, 1.0), HEIGHT - MARGIN.bottom, MARGIN.top);

  for (const tick of decadeTicks(rMin, rMax * 1.05)) {
    const px = x(tick);
    doc.line(px, MARGIN.top, px, HEIGHT - MARGIN.bottom, "#eeeeee");
    doc.text(px, HEIGHT - MARGIN.bottom + 16, tickLabel(tick), "middle");
  }
  for (const tick of niceTicks(fMin - yPad, Math.min(fMax + yPad, 1.0), 8)) {
    const py = y(tick);
    doc.line(MARGIN.left, py, WIDTH - MARGIN.right, py, "#eeeeee");
    doc.text(MARGIN.left - 8, py + 4, tickLabel(tick), "end");
  }
  frameAxes(doc, "expected channel uses (log)", "fidelity");

  series.forEach((s, i) => {
    const color = CURVE_COLORS[i % CURVE_COLORS.length];
    const pts: Array<[number, number]> = s.rows.map((r) => [x(r.resources), y(r.fidelity)]);
    doc.path(pts, color, 1.8);
    for (const [px, py] of pts) doc.circle(px, py, 2.4, color);
    const ly = MARGIN.top + 16 + i * 18;
    doc.line(WIDTH - MARGIN.right + 14, ly - 4, WIDTH - MARGIN.right + 40, ly - 4, color, 2);
    doc.text(WIDTH - MARGIN.right + 46, ly, s.label);
  });
  return doc.render();
}

// ---------------------------------------------------------------- heatmaps

interface CellRect {
  cell: SweepCell;
  px: number;
  py: number;
  w: number;
  h: number;
}

function layoutCells(doc: SvgDoc, table: SweepTable): CellRect[] {
  const { pwValues, pzValues } = table;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const w = plotW / pzValues.length;
  const h = plotH / pwValues.length;
  const rects: CellRect[] = [];
  for (const cell of table.cells) {
    const col = pzValues.indexOf(cell.pz);
    const row = pwValues.indexOf(cell.pw);
    rects.push({
      cell,
      px: MARGIN.left + col * w,
      // larger pw (less noise) drawn at the top
      py: MARGIN.top + (pwValues.length - 1 - row) * h,
      w,
      h,
    });
  }
  for (const [i, pz] of pzValues.entries()) {
    doc.text(MARGIN.left + (i + 0.5) * w, HEIGHT - MARGIN.bottom + 16, tickLabel(pz), "middle");
  }
  for (const [i, pw] of pwValues.entries()) {
    doc.text(MARGIN.left - 8, MARGIN.top + (pwValues.length - 1 - i + 0.5) * h + 4, tickLabel(pw), "end");
  }
  frameAxes(doc, "dephasing parameter pz", "white-noise parameter pw");
  return rects;
}

function frameAxes(doc: SvgDoc, xLabel: string, yLabel: string): void {
  doc.line(MARGIN.left, HEIGHT - MARGIN.bottom, WIDTH - MARGIN.right, HEIGHT - MARGIN.bottom, "#333333");
  doc.line(MARGIN.left, MARGIN.top, MARGIN.left, HEIGHT - MARGIN.bottom, "#333333");
  doc.text((MARGIN.left + WIDTH - MARGIN.right) / 2, HEIGHT - 16, xLabel, "middle", 12);
  doc.raw(
    `<text x="20" y="${fmt((MARGIN.top + HEIGHT - MARGIN.bottom) / 2)}" text-anchor="middle" ` +
      `font-size="12" transform="rotate(-90 20 ${fmt((MARGIN.top + HEIGHT - MARGIN.bottom) / 2)})">` +
      `${yLabel}</text>`,
  );
}

function renderWinnerMap(table: SweepTable, title: string): string {
  const doc = new SvgDoc(title);
  const rects = layoutCells(doc, table);
  for (const { cell, px, py, w, h } of rects) {
    doc.rect(px, py, w, h, winnerColor(cell.winner), "#ffffff");
    doc.text(px + w / 2, py + h / 2 + 4, cell.winner, "middle", 10);
  }
  const families = orderedWinners(table);
  families.forEach((winner, i) => {
    const ly = MARGIN.top + 12 + i * 20;
    doc.rect(WIDTH - MARGIN.right + 14, ly - 10, 14, 14, winnerColor(winner));
    doc.text(WIDTH - MARGIN.right + 34, ly + 1, winner);
  });
  return doc.render();
}

function orderedWinners(table: SweepTable): string[] {
  const seen = new Set(table.cells.map((c) => c.winner));
  const order = (w: string): number => {
    if (w === "same") return 0;
    if (w.startsWith("s-")) return 10 + Number(w.slice(2));
    if (w.startsWith("c-")) return 20 + Number(w.slice(2));
    if (w.startsWith("hybrid")) return 30;
    if (w === "tcp") return 40;
    return 50;
  };
  return [...seen].sort((a, b) => order(a) - order(b) || a.localeCompare(b));
}

function renderGainMap(table: SweepTable, title?: string): string {
  // Budget sweeps carry fidelities (<= 1): show the winner's gain over the
  // initial state.  Target-fidelity sweeps carry resource counts: show
  // log10 of the recurrence-minus-best-pumping resource difference.
  const values = table.cells
    .map((c) => c.winner_value)
    .filter((v): v is number => v !== null);
  const fidelityMode = values.length > 0 && Math.max(...values) <= 1.0001;

  const cellValue = (cell: SweepCell): number | null => {
    if (fidelityMode) {
      return cell.winner_value === null ? null : cell.winner_value - cell.f0;
    }
    const tcp = cell.perStrategy.get("tcp") ?? null;
    const pumping = [...cell.perStrategy.entries()]
      .filter(([sid, v]) => sid !== "tcp" && v !== null)
      .map(([, v]) => v as number);
    if (tcp === null || pumping.length === 0) return null;
    const diff = tcp - Math.min(...pumping);
    return diff > 0 ? Math.log10(diff) : null;
  };

  const doc = new SvgDoc(
    title ?? (fidelityMode ? "Winner fidelity gain" : "Resource difference, recurrence minus pumping (log10)"),
  );
  const rects = layoutCells(doc, table);
  const gains = rects.map(({ cell }) => cellValue(cell));
  const present = gains.filter((g): g is number => g !== null);
  const lo = present.length ? Math.min(...present, 0) : 0;
  const hi = present.length ? Math.max(...present, 0) : 1;

  rects.forEach(({ cell, px, py, w, h }, i) => {
    const g = gains[i];
    doc.rect(px, py, w, h, gainColor(g, lo, hi), "#ffffff");
    doc.text(px + w / 2, py + h / 2 + 4, g === null ? "-" : g.toFixed(2), "middle", 10);
  });

  // simple two-sided legend bar
  const steps = 24;
  const barX = WIDTH - MARGIN.right + 24;
  const barH = HEIGHT - MARGIN.top - MARGIN.bottom - 40;
  for (let i = 0; i < steps; i++) {
    const v = hi - ((hi - lo) * i) / (steps - 1);
    doc.rect(barX, MARGIN.top + 20 + (barH / steps) * i, 18, barH / steps + 0.5, gainColor(v, lo, hi));
  }
  doc.text(barX + 24, MARGIN.top + 28, tickLabel(hi));
  doc.text(barX + 24, MARGIN.top + 20 + barH, tickLabel(lo));
  return doc.render();
}

function gainColor(value: number | null, lo: number, hi: number): string {
  if (value === null) return "#d9d9d9";
  if (value >= 0) {
    // white to blue with increasing positive value
    const t = hi > 0 ? value / hi : 0;
    const c = Math.round(245 - 175 * t);
    return `rgb(${Math.max(0, c - 35)},${c},255)`;
  }
  // white to red with increasingly negative value
  const t = lo < 0 ? value / lo : 0;
  const c = Math.round(245 - 175 * t);
  return `rgb(255,${c},${c})`;
}

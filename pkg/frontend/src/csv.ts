/**
 * Parsers for the two CSV contracts published by the simulator CLI.
 *
 * Trace CSV:  round,action,fidelity,success_prob,resources
 * Sweep CSV:  pw,pz,f0,status,winner,winner_value,<strategy>,...
 *
 * Values never contain commas or quotes, so a plain split is exact.
 */

export class SchemaError extends Error {}

export interface TraceRow {
  round: number;
  action: string;
  fidelity: number;
  success_prob: number;
  resources: number;
}

export interface SweepCell {
  pw: number;
  pz: number;
  f0: number;
  status: string;
  winner: string;
  winner_value: number | null;
  perStrategy: Map<string, number | null>;
}

export interface SweepTable {
  strategies: string[];
  cells: SweepCell[];
  pwValues: number[];
  pzValues: number[];
}

const TRACE_COLUMNS = ["round", "action", "fidelity", "success_prob", "resources"];
const SWEEP_PREFIX = ["pw", "pz", "f0", "status", "winner", "winner_value"];

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.length > 0);
}

function requireColumns(header: string[], required: string[], kind: string): void {
  for (const column of required) {
    if (!header.includes(column)) {
      throw new SchemaError(`${kind} CSV is missing column '${column}'`);
    }
  }
}

export function parseTraceCsv(text: string): TraceRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError("trace CSV is empty");
  }
  const header = lines[0].split(",");
  requireColumns(header, TRACE_COLUMNS, "trace");
  const col = (name: string) => header.indexOf(name);
  const rows: TraceRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    rows.push({
      round: Number(parts[col("round")]),
      action: parts[col("action")],
      fidelity: Number(parts[col("fidelity")]),
      success_prob: Number(parts[col("success_prob")]),
      resources: Number(parts[col("resources")]),
    });
  }
  if (rows.length === 0) {
    throw new SchemaError("trace CSV has a header but no rows");
  }
  return rows;
}

export function parseSweepCsv(text: string): SweepTable {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError("sweep CSV is empty");
  }
  const header = lines[0].split(",");
  requireColumns(header, SWEEP_PREFIX, "sweep");
  const strategies = header.slice(SWEEP_PREFIX.length);
  if (strategies.length === 0) {
    throw new SchemaError("sweep CSV has no per-strategy columns");
  }
  const cells: SweepCell[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    const perStrategy = new Map<string, number | null>();
    strategies.forEach((sid, i) => {
      const raw = parts[SWEEP_PREFIX.length + i];
      perStrategy.set(sid, raw === "" || raw === undefined ? null : Number(raw));
    });
    cells.push({
      pw: Number(parts[0]),
      pz: Number(parts[1]),
      f0: Number(parts[2]),
      status: parts[3],
      winner: parts[4],
      winner_value: parts[5] === "" ? null : Number(parts[5]),
      perStrategy,
    });
  }
  if (cells.length === 0) {
    throw new SchemaError("sweep CSV has a header but no rows");
  }
  const pwValues = [...new Set(cells.map((c) => c.pw))].sort((a, b) => a - b);
  const pzValues = [...new Set(cells.map((c) => c.pz))].sort((a, b) => a - b);
  return { strategies, cells, pwValues, pzValues };
}

/** Curve label from a trace CSV path: basename without the scenario prefix. */
export function traceLabel(path: string): string {
  const base = path.split("/").pop() ?? path;
  const stem = base.replace(/\.csv$/i, "");
  const cut = stem.indexOf("_");
  return cut >= 0 ? stem.slice(cut + 1) : stem;
}

import { readFileSync, existsSync } from "node:fs";
import { join } from "node:path";

/** One solver run directory: trajectory log plus optional JSON results. */
export interface RunData {
  dir: string;
  config: Record<string, string>;
  columns: string[];
  rows: number[][];
  bounds?: Record<string, number>;
}

export class RunError extends Error {}

/**
 * Parse a trajectory CSV: leading `# key=value` config lines, a header
 * row, then numeric rows.
 */
export function parseTrajectory(text: string): {
  config: Record<string, string>;
  columns: string[];
  rows: number[][];
} {
  const config: Record<string, string> = {};
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  let i = 0;
  for (; i < lines.length && lines[i].startsWith("# "); i++) {
    const body = lines[i].slice(2);
    const eq = body.indexOf("=");
    if (eq < 0) throw new RunError(`malformed config line: ${lines[i]}`);
    config[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
  }
  if (i >= lines.length) throw new RunError("trajectory has no header row");
  const columns = lines[i++].split(",");
  const rows: number[][] = [];
  for (; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length)
      throw new RunError(`row ${i + 1} has ${parts.length} fields, expected ${columns.length}`);
    rows.push(parts.map((p) => (p === "nan" ? NaN : Number(p))));
  }
  if (rows.length === 0) throw new RunError("trajectory has no data rows");
  return { config, columns, rows };
}

export function loadRun(dir: string): RunData {
  const trajPath = join(dir, "trajectory.csv");
  if (!existsSync(trajPath)) throw new RunError(`missing ${trajPath}`);
  const { config, columns, rows } = parseTrajectory(readFileSync(trajPath, "utf8"));
  const run: RunData = { dir, config, columns, rows };
  const boundsPath = join(dir, "bounds.json");
  if (existsSync(boundsPath)) {
    run.bounds = JSON.parse(readFileSync(boundsPath, "utf8"));
  }
  return run;
}

export function column(run: RunData, name: string): number[] {
  const idx = run.columns.indexOf(name);
  if (idx < 0) throw new RunError(`${run.dir}: trajectory lacks column '${name}'`);
  return run.rows.map((r) => r[idx]);
}

export function configNumber(run: RunData, key: string): number {
  const raw = run.config[key];
  if (raw === undefined) throw new RunError(`${run.dir}: config header lacks '${key}'`);
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new RunError(`${run.dir}: config '${key}' is not numeric`);
  return value;
}

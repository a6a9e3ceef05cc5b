import { mkdtempSync, mkdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

let counter = 0;

export function tempRoot(): string {
  return mkdtempSync(join(tmpdir(), "figures-test-"));
}

export interface FakeRunOptions {
  application: "maxcut" | "embed";
  beta: number;
  n: number;
  iters?: number;
  ratio?: number;
}

/** Write a synthetic run directory matching the solver's file schemas. */
export function fakeRun(root: string, opts: FakeRunOptions): string {
  const dir = join(root, `run-${counter++}`);
  mkdirSync(dir);
  const iters = opts.iters ?? 20;
  const lines = [
    `# application=${opts.application}`,
    `# beta=${opts.beta}`,
    `# n=${opts.n}`,
    "t,objective,constraint_residual_estimate,mu_or_lambda_norm,smoothed_mu,wall_ms",
  ];
  for (let t = 1; t <= iters; t++) {
    const obj = -1 + Math.exp(-t / 5);
    const mu = 0.5 + 0.1 * Math.exp(-t / 5);
    lines.push(`${t},${obj},0.01,${mu},${mu},${t * 2}`);
  }
  writeFileSync(join(dir, "trajectory.csv"), lines.join("\n") + "\n");
  if (opts.ratio !== undefined) {
    writeFileSync(
      join(dir, "bounds.json"),
      JSON.stringify({ lower: -2, upper_expected: -2 * opts.ratio, ratio: opts.ratio }) + "\n"
    );
  }
  return dir;
}

export function countPolylines(svg: string): number {
  return (svg.match(/<polyline /g) ?? []).length;
}

export function dashArrays(svg: string): string[] {
  return [...svg.matchAll(/stroke-dasharray="([^"]*)"/g)].map((m) => m[1]);
}

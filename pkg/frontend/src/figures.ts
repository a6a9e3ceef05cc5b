import { RunData, RunError, column, configNumber, loadRun } from "./csv.js";
import { Panel, dashForBeta, renderSvg } from "./svg.js";

export type Kind = "convergence" | "ratio-vs-n" | "mu-trajectory";

function requireApplication(run: RunData, wanted: string, kind: Kind): void {
  const app = run.config["application"];
  if (app !== wanted)
    throw new RunError(
      `${run.dir}: '${kind}' needs a ${wanted} run, config says application=${app ?? "?"}`
    );
}

/** Unregularized dual objective vs iteration, one styled curve per run. */
function convergence(runs: RunData[]): Panel[] {
  const curves = runs.map((run) => {
    requireApplication(run, "maxcut", "convergence");
    const beta = configNumber(run, "beta");
    const n = configNumber(run, "n");
    return {
      xs: column(run, "t"),
      ys: column(run, "objective"),
      dash: dashForBeta(beta),
      label: `n=${n}, beta=${beta}`,
    };
  });
  return [
    {
      title: "Dual objective convergence",
      xLabel: "iteration",
      yLabel: "unregularized dual objective",
      curves,
    },
  ];
}

/** Approximation ratio vs n, one curve per beta (a single run is a point). */
function ratioVsN(runs: RunData[]): Panel[] {
  const byBeta = new Map<number, { n: number; ratio: number }[]>();
  for (const run of runs) {
    requireApplication(run, "maxcut", "ratio-vs-n");
    if (!run.bounds || typeof run.bounds["ratio"] !== "number")
      throw new RunError(`${run.dir}: 'ratio-vs-n' needs bounds.json with a ratio field`);
    const beta = configNumber(run, "beta");
    const n = configNumber(run, "n");
    const list = byBeta.get(beta) ?? [];
    list.push({ n, ratio: run.bounds["ratio"] });
    byBeta.set(beta, list);
  }
  const curves = [...byBeta.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([beta, points]) => {
      points.sort((a, b) => a.n - b.n);
      return {
        xs: points.map((p) => p.n),
        ys: points.map((p) => p.ratio),
        dash: dashForBeta(beta),
        label: `beta=${beta}`,
        markers: true,
      };
    });
  return [
    {
      title: "Approximation ratio vs problem size",
      xLabel: "n",
      yLabel: "approximation ratio",
      curves,
    },
  ];
}

/** Smoothed mu vs iteration, one panel per beta. */
function muTrajectory(runs: RunData[]): Panel[] {
  const byBeta = new Map<number, RunData[]>();
  for (const run of runs) {
    requireApplication(run, "embed", "mu-trajectory");
    const beta = configNumber(run, "beta");
    byBeta.set(beta, [...(byBeta.get(beta) ?? []), run]);
  }
  return [...byBeta.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([beta, group]) => ({
      title: `beta = ${beta}`,
      xLabel: "iteration",
      yLabel: "smoothed mu",
      curves: group.map((run) => ({
        xs: column(run, "t"),
        ys: column(run, "smoothed_mu"),
        dash: "",
        label: `n=${configNumber(run, "n")}`,
      })),
    }));
}

export function buildFigure(kind: Kind, runDirs: string[]): string {
  if (runDirs.length === 0) throw new RunError("at least one run directory is required");
  const runs = runDirs.map(loadRun);
  switch (kind) {
    case "convergence":
      return renderSvg(convergence(runs));
    case "ratio-vs-n":
      return renderSvg(ratioVsN(runs));
    case "mu-trajectory":
      return renderSvg(muTrajectory(runs));
    default:
      throw new RunError(`unknown figure kind '${kind satisfies never}'`);
  }
}

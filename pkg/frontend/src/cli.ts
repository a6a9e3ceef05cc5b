#!/usr/bin/env node
import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { RunError } from "./csv.js";
import { Kind, buildFigure } from "./figures.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("$0 <kind>", "render a figure from solver run directories", (y) =>
      y.positional("kind", {
        choices: ["convergence", "ratio-vs-n", "mu-trajectory"] as const,
        demandOption: true,
      })
    )
    .option("runs", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "run output directories (each holds trajectory.csv)",
    })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .strict()
    .exitProcess(false)
    .fail((msg) => {
      throw new RunError(msg);
    })
    .parseSync();
  const svg = buildFigure(args.kind as Kind, args.runs as string[]);
  writeFileSync(args.out as string, svg);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  try {
    process.exit(main(hideBin(process.argv)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}

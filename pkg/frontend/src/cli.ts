#!/usr/bin/env node
import { pathToFileURL } from "url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { renderFile } from "./render.js";

/** Parse arguments and render one figure.  Returns the process exit code. */
export function main(argv: string[]): number {
  const parser = yargs(argv)
    .scriptName("plots")
    .command("$0 <input>", "render an SVG figure from scenario CSV output", (y) =>
      y
        .positional("input", {
          type: "string",
          demandOption: true,
          describe: "CSV file produced by the optimism CLI",
        })
        .option("scenario", {
          type: "string",
          demandOption: true,
          describe: "scenario name to select",
        })
        .option("x", {
          type: "string",
          demandOption: true,
          describe: "param_name giving the x axis",
        })
        .option("y", {
          type: "string",
          demandOption: true,
          describe: "kind giving the y axis (omega, df, train, pred)",
        })
        .option("ci", {
          type: "boolean",
          default: false,
          describe: "shade estimate +/- 1.96*stderr around each line",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "output SVG path",
        }),
    )
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    });

  let args: { input: string; scenario: string; x: string; y: string; ci: boolean; out: string };
  try {
    args = parser.parseSync() as unknown as typeof args;
  } catch (e) {
    console.error(`plots: ${(e as Error).message}`);
    return 2;
  }
  try {
    renderFile(args.input, { scenario: args.scenario, x: args.x, y: args.y, ci: args.ci }, args.out);
  } catch (e) {
    console.error(`plots: ${(e as Error).message}`);
    return 1;
  }
  return 0;
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(hideBin(process.argv)));
}

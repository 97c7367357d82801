#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { FIGURES } from "./figures.js";
import { renderAll, renderFigure } from "./render.js";

yargs(hideBin(process.argv))
  .command(
    "render",
    "render figures from a results directory",
    (y) =>
      y
        .option("in", { type: "string", demandOption: true, describe: "results directory" })
        .option("out", { type: "string", demandOption: true, describe: "gallery output directory" })
        .option("fig", {
          type: "string",
          describe: `single figure id (${FIGURES.map((f) => f.id).join(", ")})`,
        }),
    (argv) => {
      try {
        if (argv.fig) {
          const spec = FIGURES.find((f) => f.id === argv.fig);
          if (!spec) throw new Error(`unknown figure id "${argv.fig}"`);
          const path = renderFigure(spec, argv.in, argv.out);
          console.log(`rendered ${path}`);
        } else {
          const report = renderAll(argv.in, argv.out);
          console.log(`rendered ${report.rendered.length} figures to ${argv.out}`);
          for (const m of report.missing) console.log(`missing: ${m}`);
        }
      } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        process.exit(1);
      }
    },
  )
  .demandCommand(1)
  .strict()
  .help()
  .parse();

#!/usr/bin/env node
import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { KINDS, render } from "./index.js";

yargs(hideBin(process.argv))
  .scriptName("plot")
  .command(
    "$0 <kind>",
    "render an SVG figure from a gcnlab CSV",
    (y) =>
      y
        .positional("kind", { choices: KINDS, describe: "figure kind" })
        .option("in", { type: "string", demandOption: true, describe: "input CSV path" })
        .option("out", { type: "string", demandOption: true, describe: "output SVG path" }),
    (args) => {
      const { svg, note } = render(String(args.kind), String(args.in));
      writeFileSync(String(args.out), svg);
      console.log(`${args.out} ${note}`);
    }
  )
  .strict()
  .fail((msg, err) => {
    console.error(`error: ${msg ?? err?.message ?? "unknown failure"}`);
    process.exit(1);
  })
  .parse();

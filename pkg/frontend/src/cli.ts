/** Command-line driver: `plot (regret|placement) <inputs> -o <out.svg>`. */

import { readFileSync, writeFileSync } from "node:fs";

import { SchemaError } from "./csv.js";
import { renderPlacementSvg } from "./placement.js";
import { NamedCsv, renderRegretSvg } from "./regret.js";

const USAGE = `usage:
  plot regret <aggregated.csv>... -o <out.svg> [--log-y] [--title TEXT]
  plot placement <placement.csv> -o <out.svg> [--title TEXT]`;

interface ParsedArgs {
  kind: "regret" | "placement";
  inputs: string[];
  out: string;
  logY: boolean;
  title?: string;
}

function parseArgs(argv: string[]): ParsedArgs {
  const [kind, ...rest] = argv;
  if (kind !== "regret" && kind !== "placement") {
    throw new SchemaError(USAGE);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let logY = false;
  let title: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i];
    if (arg === "-o" || arg === "--out") {
      out = rest[++i];
    } else if (arg === "--log-y") {
      logY = true;
    } else if (arg === "--title") {
      title = rest[++i];
    } else if (arg.startsWith("-")) {
      throw new SchemaError(`unknown flag '${arg}'\n${USAGE}`);
    } else {
      inputs.push(arg);
    }
  }
  if (out === undefined) {
    throw new SchemaError(`missing -o <out.svg>\n${USAGE}`);
  }
  if (inputs.length === 0) {
    throw new SchemaError(`no input CSVs given\n${USAGE}`);
  }
  if (kind === "placement" && inputs.length !== 1) {
    throw new SchemaError(`placement takes exactly one CSV\n${USAGE}`);
  }
  if (kind === "placement" && logY) {
    throw new SchemaError(`--log-y only applies to regret\n${USAGE}`);
  }
  return { kind, inputs, out, logY, title };
}

/** Run the tool; returns the process exit code. */
export function main(argv: string[]): number {
  let parsed: ParsedArgs;
  try {
    parsed = parseArgs(argv);
  } catch (error) {
    process.stderr.write(`${(error as Error).message}\n`);
    return 1;
  }

  try {
    const files: NamedCsv[] = parsed.inputs.map((path) => ({
      name: path,
      text: readFileSync(path, "utf8"),
    }));
    const svg =
      parsed.kind === "regret"
        ? renderRegretSvg(files, { logY: parsed.logY, title: parsed.title })
        : renderPlacementSvg(files[0].text, files[0].name, {
            title: parsed.title,
          });
    writeFileSync(parsed.out, svg);
    process.stdout.write(`wrote ${parsed.out}\n`);
    return 0;
  } catch (error) {
    process.stderr.write(`${(error as Error).message}\n`);
    return 1;
  }
}

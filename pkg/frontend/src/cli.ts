#!/usr/bin/env node
/**
 * plots <kind> --in <file...> --out <image.svg> [--style <file>]
 *              [--manifest <manifest.jsonl>] [--column <name>]
 *
 * Kinds: spread, capacity, dist_heatmap, interplay, spacetime.
 * Exits 2 on usage errors, 1 on schema violations.
 */

import { writeFileSync } from "node:fs";
import process from "node:process";

import { KINDS, Kind, SchemaError, renderFiles } from "./index.js";

interface Args {
  kind: Kind;
  inputs: string[];
  out: string;
  style?: string;
  manifest?: string;
  column?: string;
}

function usage(): never {
  console.error(
    `usage: plots <${KINDS.join("|")}> --in <file...> --out <image.svg> ` +
      "[--style <file>] [--manifest <jsonl>] [--column <name>]",
  );
  process.exit(2);
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0) usage();
  const kind = argv[0] as Kind;
  if (!KINDS.includes(kind)) usage();
  const inputs: string[] = [];
  let out: string | undefined;
  let style: string | undefined;
  let manifest: string | undefined;
  let column: string | undefined;
  let i = 1;
  while (i < argv.length) {
    const flag = argv[i];
    if (flag === "--in") {
      i += 1;
      while (i < argv.length && !argv[i].startsWith("--")) {
        inputs.push(argv[i]);
        i += 1;
      }
    } else if (flag === "--out") {
      out = argv[i + 1];
      i += 2;
    } else if (flag === "--style") {
      style = argv[i + 1];
      i += 2;
    } else if (flag === "--manifest") {
      manifest = argv[i + 1];
      i += 2;
    } else if (flag === "--column") {
      column = argv[i + 1];
      i += 2;
    } else {
      usage();
    }
  }
  if (!out || inputs.length === 0) usage();
  return { kind, inputs, out, style, manifest, column };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch {
    return 2;
  }
  try {
    const svg = renderFiles(args.kind, args.inputs, args.manifest, args.style, args.column);
    writeFileSync(args.out, svg, "utf-8");
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}

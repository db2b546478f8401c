import { readFileSync } from "node:fs";

import { SchemaError, parseJsonl } from "./csv.js";
import {
  Guides,
  renderCapacity,
  renderDistHeatmap,
  renderInterplay,
  renderSpacetime,
  renderSpread,
} from "./kinds.js";
import { DEFAULT_STYLE, Style, mergeStyle } from "./svg.js";

export { SchemaError } from "./csv.js";
export { DEFAULT_STYLE } from "./svg.js";
export * from "./kinds.js";

export const KINDS = ["spread", "capacity", "dist_heatmap", "interplay", "spacetime"] as const;
export type Kind = (typeof KINDS)[number];

export interface RenderRequest {
  kind: Kind;
  inputs: string[];
  manifest?: string;
  styleOverrides?: Partial<Style>;
  column?: string;
}

/** Guide velocities and fit lines travel in the run manifest, keeping all
 * physics numbers on the producer side. */
export function guidesFromManifest(text: string | undefined): Guides | undefined {
  if (!text) return undefined;
  const records = parseJsonl(text);
  const out: Guides = {};
  for (const rec of records) {
    const g = rec["guides"] as Record<string, number> | undefined;
    if (g) {
      out.v_B = g["v_B"] ?? out.v_B;
      out.two_v_E = g["two_v_E"] ?? out.two_v_E;
      out.v_max = g["v_max"] ?? out.v_max;
    }
    const fits = rec["fits"] as Guides["fits"] | undefined;
    if (fits && typeof fits === "object" && !("error" in fits)) {
      out.fits = fits;
    }
  }
  return out;
}

export function render(req: RenderRequest): string {
  if (!KINDS.includes(req.kind)) {
    throw new SchemaError(`unknown figure kind '${req.kind}'`);
  }
  if (req.inputs.length === 0) {
    throw new SchemaError("no input files given");
  }
  const style = mergeStyle(req.styleOverrides);
  const text = req.inputs[0];
  const guides = guidesFromManifest(req.manifest);
  switch (req.kind) {
    case "spread":
      return renderSpread(text, style, guides);
    case "capacity":
      return renderCapacity(text, style);
    case "dist_heatmap":
      return renderDistHeatmap(text, style);
    case "interplay":
      return renderInterplay(text, style, guides);
    case "spacetime":
      return renderSpacetime(text, style, req.column);
  }
}

export function renderFiles(
  kind: Kind,
  inputPaths: string[],
  manifestPath?: string,
  stylePath?: string,
  column?: string,
): string {
  const inputs = inputPaths.map((p) => readFileSync(p, "utf-8"));
  const manifest = manifestPath ? readFileSync(manifestPath, "utf-8") : undefined;
  const styleOverrides = stylePath
    ? (JSON.parse(readFileSync(stylePath, "utf-8")) as Partial<Style>)
    : undefined;
  return render({ kind, inputs, manifest, styleOverrides, column });
}

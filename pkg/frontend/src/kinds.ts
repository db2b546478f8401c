/** The five figure kinds, each a pure function of its input files. */

import {
  SchemaError,
  Table,
  numericColumn,
  parseDelimited,
  requireColumns,
  stringColumn,
} from "./csv.js";
import { LinearScale, Scene, Style, plotFrame } from "./svg.js";

export interface Guides {
  v_B?: number;
  two_v_E?: number;
  v_max?: number;
  fits?: {
    slope_W?: number;
    intercept_W?: number;
    slope_l?: number;
    intercept_l?: number;
  };
}

function extent(values: number[], pad = 0.05): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  return [lo - pad * span, hi + pad * span];
}

/** Growth of the two length scales with optional dashed fit lines. */
export function renderSpread(csvText: string, style: Style, guides?: Guides): string {
  const table = parseDelimited(csvText);
  const col = requireColumns(table, ["t", "mean_W", "mean_l", "se_W", "se_l"], "spread");
  const t = numericColumn(table, col, "t");
  const w = numericColumn(table, col, "mean_W");
  const l = numericColumn(table, col, "mean_l");
  const scene = new Scene(style);
  const frame = plotFrame(style);
  const xs = new LinearScale(0, Math.max(...t), frame.x0, frame.x1);
  const ys = new LinearScale(0, extent([...w, ...l])[1], frame.y0, frame.y1);
  scene.axes(xs, ys, "t (layers)", "interval width", "growth of the magic length scales");
  scene.path(t.map((tt, i) => [xs.map(tt), ys.map(w[i])]), style.palette[0], 1.8);
  scene.path(t.map((tt, i) => [xs.map(tt), ys.map(l[i])]), style.palette[1], 1.8);
  const fits = guides?.fits;
  const fitLines: Array<[string, string]> = [];
  if (fits?.slope_W !== undefined && fits.intercept_W !== undefined) {
    scene.path(
      t.map((tt) => [xs.map(tt), ys.map(fits.intercept_W! + fits.slope_W! * tt)] as [number, number])
        .filter(([, y]) => y >= frame.y1 && y <= frame.y0),
      style.palette[0],
      1.2,
      "6,4",
    );
    fitLines.push(["fit 2v_W t", style.palette[0]]);
  }
  if (fits?.slope_l !== undefined && fits.intercept_l !== undefined) {
    scene.path(
      t.map((tt) => [xs.map(tt), ys.map(fits.intercept_l! + fits.slope_l! * tt)] as [number, number])
        .filter(([, y]) => y >= frame.y1 && y <= frame.y0),
      style.palette[1],
      1.2,
      "6,4",
    );
    fitLines.push(["fit 2v_l t", style.palette[1]]);
  }
  scene.legend(
    [["W(t) union width", style.palette[0]], ["l(t) centered width", style.palette[1]], ...fitLines],
    frame.x0 + 10,
    frame.y1 + 14,
  );
  return scene.render();
}

/** Capacity proxy vs erased fraction, one curve per time (plus baseline). */
export function renderCapacity(csvText: string, style: Style): string {
  const table = parseDelimited(csvText);
  const col = requireColumns(table, ["f", "c_tilde", "stderr", "n_samples"], "capacity");
  const f = numericColumn(table, col, "f");
  const c = numericColumn(table, col, "c_tilde");
  const se = numericColumn(table, col, "stderr");
  const source = col.has("source") ? stringColumn(table, col, "source") : f.map(() => "data");
  const tcol = col.has("t") ? stringColumn(table, col, "t") : f.map(() => "");
  const series = new Map<string, number[]>();
  f.forEach((_, i) => {
    const key = source[i] === "global_random" ? "global random" : `t=${tcol[i]}`;
    if (!series.has(key)) series.set(key, []);
    series.get(key)!.push(i);
  });
  const scene = new Scene(style);
  const frame = plotFrame(style);
  const xs = new LinearScale(0, Math.max(...f, 1), frame.x0, frame.x1);
  const ys = new LinearScale(0, 1.05, frame.y0, frame.y1);
  scene.axes(xs, ys, "erased fraction f", "capacity proxy", "logical survival under random erasure");
  scene.line(xs.map(0.5), frame.y0, xs.map(0.5), frame.y1, "#999", 1, "3,3");
  const legend: Array<[string, string]> = [];
  let k = 0;
  for (const [key, idxs] of series) {
    const color = style.palette[k % style.palette.length];
    const pts = idxs
      .slice()
      .sort((a, b) => f[a] - f[b])
      .map((i) => [xs.map(f[i]), ys.map(c[i])] as [number, number]);
    scene.path(pts, color, 1.8);
    for (const i of idxs) {
      const px = xs.map(f[i]);
      scene.line(px, ys.map(Math.min(1, c[i] + se[i])), px, ys.map(Math.max(0, c[i] - se[i])), color, 1);
      scene.circle(px, ys.map(c[i]), 2.4, color);
    }
    legend.push([key, color]);
    k += 1;
  }
  scene.legend(legend, frame.x0 + 10, frame.y1 + 14);
  return scene.render();
}

/** Histogram of minimal-interval widths as a (t, width) heatmap. */
export function renderDistHeatmap(csvText: string, style: Style): string {
  const table = parseDelimited(csvText);
  const col = requireColumns(table, ["t", "width", "count"], "dist_heatmap");
  const t = numericColumn(table, col, "t");
  const w = numericColumn(table, col, "width");
  const n = numericColumn(table, col, "count");
  const scene = new Scene(style);
  const frame = plotFrame(style);
  const tMax = Math.max(...t);
  const wMax = Math.max(...w);
  const nMax = Math.max(...n);
  const xs = new LinearScale(0, tMax + 1, frame.x0, frame.x1);
  const ys = new LinearScale(0, wMax + 1, frame.y0, frame.y1);
  scene.axes(xs, ys, "t (layers)", "interval width", "minimal-interval width histogram");
  const cellW = Math.max(xs.map(1) - xs.map(0), 1);
  const cellH = Math.max(ys.map(0) - ys.map(1), 1);
  t.forEach((tt, i) => {
    const frac = Math.log1p(n[i]) / Math.log1p(nMax);
    const shade = Math.round(255 * (1 - frac));
    const color = `rgb(255,${shade},${shade})`;
    scene.rect(xs.map(tt), ys.map(w[i] + 1), cellW, cellH, color);
  });
  return scene.render();
}

/** Union-width growth per split-evolution case with velocity guide lines. */
export function renderInterplay(csvText: string, style: Style, guides?: Guides): string {
  const table = parseDelimited(csvText);
  const col = requireColumns(table, ["case", "t", "mean_W", "se_W"], "interplay");
  const t = numericColumn(table, col, "t");
  const w = numericColumn(table, col, "mean_W");
  const cases = stringColumn(table, col, "case");
  const byCase = new Map<string, number[]>();
  cases.forEach((c, i) => {
    if (!byCase.has(c)) byCase.set(c, []);
    byCase.get(c)!.push(i);
  });
  const scene = new Scene(style);
  const frame = plotFrame(style);
  const xs = new LinearScale(0, Math.max(...t), frame.x0, frame.x1);
  const ys = new LinearScale(0, extent(w)[1], frame.y0, frame.y1);
  scene.axes(xs, ys, "t (layers)", "union width W", "operator spreading vs entanglement growth");
  const legend: Array<[string, string]> = [];
  let k = 0;
  for (const [name, idxs] of byCase) {
    const color = style.palette[k % style.palette.length];
    const pts = idxs
      .slice()
      .sort((a, b) => t[a] - t[b])
      .map((i) => [xs.map(t[i]), ys.map(w[i])] as [number, number]);
    scene.path(pts, color, 1.8);
    legend.push([name, color]);
    k += 1;
  }
  const guideDefs: Array<[string, number | undefined, string]> = [
    ["2 v_B t", guides?.v_B !== undefined ? 2 * guides.v_B : undefined, "#e75480"],
    ["4 v_E t", guides?.two_v_E !== undefined ? 2 * guides.two_v_E : undefined, "#1e8449"],
    ["2 v_max t", guides?.v_max !== undefined ? 2 * guides.v_max : undefined, "#000000"],
  ];
  const w0 = w.length ? w[0] : 0;
  for (const [label, rate, color] of guideDefs) {
    if (rate === undefined) continue;
    const pts = t
      .map((tt) => [xs.map(tt), ys.map(w0 + rate * tt)] as [number, number])
      .filter(([, y]) => y >= frame.y1 && y <= frame.y0);
    scene.path(pts, color, 1.1, "5,4");
    legend.push([label, color]);
  }
  scene.legend(legend, frame.x0 + 10, frame.y1 + 14, );
  return scene.render();
}

/** Operator spacetime raster with the four-color Pauli code. */
export function renderSpacetime(tsvText: string, style: Style, column?: string): string {
  const table = parseDelimited(tsvText, "\t");
  if (table.header[0] !== "t" || table.header.length < 2) {
    throw new SchemaError("spacetime: expected a 't' column plus operator literals");
  }
  const col = requireColumns(table, ["t"], "spacetime");
  const name = column ?? table.header[1];
  const opIdx = table.header.indexOf(name);
  if (opIdx < 0) {
    throw new SchemaError(`spacetime: no operator column '${name}'`);
  }
  const literals = table.rows.map((row) => row[opIdx]);
  const letters = literals.map((lit) => lit.replace(/^[+-]i?/, ""));
  const L = letters[0]?.length ?? 0;
  if (L === 0) {
    throw new SchemaError("spacetime: empty operator literals");
  }
  for (const [i, s] of letters.entries()) {
    if (s.length !== L) throw new SchemaError(`spacetime: row ${i + 1} width differs`);
    if (!/^[IXYZ]+$/.test(s)) {
      throw new SchemaError(`spacetime: row ${i + 1} has letters outside IXYZ`);
    }
  }
  const t = numericColumn(table, col, "t");
  const scene = new Scene(style);
  const frame = plotFrame(style);
  const xs = new LinearScale(0, L, frame.x0, frame.x1);
  const ys = new LinearScale(0, Math.max(...t) + 1, frame.y0, frame.y1);
  scene.axes(xs, ys, "qubit", "t (layers)", `spacetime of ${name}`);
  const cellW = xs.map(1) - xs.map(0);
  const cellH = ys.map(0) - ys.map(1);
  letters.forEach((rowLetters, i) => {
    for (let q = 0; q < L; q += 1) {
      const letter = rowLetters[q];
      const fill = style.pauliColors[letter];
      scene.rect(xs.map(q), ys.map(t[i] + 1), cellW, cellH, fill, "#dddddd");
    }
  });
  scene.legend(
    (["X", "Y", "Z"] as const).map((s) => [s, style.pauliColors[s]]),
    frame.x1 - 60,
    frame.y1 + 14,
  );
  return scene.render();
}

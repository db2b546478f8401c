/** Minimal deterministic SVG scene builder (vector output, no DOM). */

export interface Style {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  background: string;
  fontFamily: string;
  fontSize: number;
  palette: string[];
  pauliColors: Record<string, string>;
}

export const DEFAULT_STYLE: Style = {
  width: 640,
  height: 420,
  margin: { top: 28, right: 20, bottom: 44, left: 56 },
  background: "#ffffff",
  fontFamily: "Helvetica, Arial, sans-serif",
  fontSize: 12,
  // series palette; the Pauli raster colors follow the four-color code:
  // identity white, X orange, Y purple, Z green
  palette: ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"],
  pauliColors: { I: "#ffffff", X: "#ff8c00", Y: "#7d3c98", Z: "#1e8449" },
};

export function mergeStyle(overrides: Partial<Style> | undefined): Style {
  if (!overrides) return DEFAULT_STYLE;
  return {
    ...DEFAULT_STYLE,
    ...overrides,
    margin: { ...DEFAULT_STYLE.margin, ...(overrides.margin ?? {}) },
    pauliColors: { ...DEFAULT_STYLE.pauliColors, ...(overrides.pauliColors ?? {}) },
    palette: overrides.palette ?? DEFAULT_STYLE.palette,
  };
}

const fmt = (x: number): string => {
  const v = Math.round(x * 100) / 100;
  return Object.is(v, -0) ? "0" : String(v);
};

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  map(x: number): number {
    if (this.d1 === this.d0) return (this.r0 + this.r1) / 2;
    return this.r0 + ((x - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  ticks(n = 6): number[] {
    const span = this.d1 - this.d0;
    if (span <= 0) return [this.d0];
    const raw = span / n;
    const mag = 10 ** Math.floor(Math.log10(raw));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? mag * 10;
    const out: number[] = [];
    for (let v = Math.ceil(this.d0 / step) * step; v <= this.d1 + 1e-9; v += step) {
      out.push(Math.round(v * 1e9) / 1e9);
    }
    return out;
  }
}

export class Scene {
  private parts: string[] = [];

  constructor(readonly style: Style) {}

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none") {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string) {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.5, dash?: string) {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string) {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, anchor = "middle", size?: number, rotate?: number) {
    const s = size ?? this.style.fontSize;
    const tr = rotate ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="${this.style.fontFamily}" font-size="${s}"${tr}>${escapeXml(content)}</text>`,
    );
  }

  axes(
    xs: LinearScale,
    ys: LinearScale,
    xLabel: string,
    yLabel: string,
    title = "",
  ) {
    const { margin, width, height } = this.style;
    const x0 = margin.left;
    const x1 = width - margin.right;
    const y0 = height - margin.bottom;
    const y1 = margin.top;
    this.line(x0, y0, x1, y0, "#000", 1);
    this.line(x0, y0, x0, y1, "#000", 1);
    for (const t of xs.ticks()) {
      const px = xs.map(t);
      this.line(px, y0, px, y0 + 4, "#000", 1);
      this.text(px, y0 + 16, String(t));
    }
    for (const t of ys.ticks()) {
      const py = ys.map(t);
      this.line(x0 - 4, py, x0, py, "#000", 1);
      this.text(x0 - 8, py + 4, String(t), "end");
    }
    this.text((x0 + x1) / 2, height - 10, xLabel);
    this.text(16, (y0 + y1) / 2, yLabel, "middle", undefined, -90);
    if (title) this.text((x0 + x1) / 2, margin.top - 10, title, "middle", this.style.fontSize + 1);
  }

  legend(entries: Array<[string, string]>, x: number, y: number) {
    entries.forEach(([label, color], i) => {
      const yy = y + i * 16;
      this.line(x, yy - 4, x + 18, yy - 4, color, 2);
      this.text(x + 24, yy, label, "start");
    });
  }

  render(): string {
    const { width, height, background } = this.style;
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
      `<rect width="${width}" height="${height}" fill="${background}"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function plotFrame(style: Style): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: style.margin.left,
    x1: style.width - style.margin.right,
    y0: style.height - style.margin.bottom,
    y1: style.margin.top,
  };
}

/** CSV and TSV readers with loud schema validation. */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseDelimited(text: string, sep = ","): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((ln) => ln.trim().length > 0 && !ln.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError("empty input: no header row");
  }
  const header = lines[0].split(sep).map((s) => s.trim());
  const rows = lines.slice(1).map((ln) => ln.split(sep).map((s) => s.trim()));
  for (const [i, row] of rows.entries()) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `row ${i + 1} has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { header, rows };
}

export function requireColumns(table: Table, needed: string[], what: string): Map<string, number> {
  const index = new Map<string, number>();
  table.header.forEach((name, i) => index.set(name, i));
  for (const col of needed) {
    if (!index.has(col)) {
      throw new SchemaError(
        `${what}: missing column '${col}' (have: ${table.header.join(", ")})`,
      );
    }
  }
  return index;
}

export function numericColumn(table: Table, col: Map<string, number>, name: string): number[] {
  const idx = col.get(name);
  if (idx === undefined) throw new SchemaError(`unknown column '${name}'`);
  return table.rows.map((row, i) => {
    const v = Number(row[idx]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(`column '${name}' row ${i + 1}: '${row[idx]}' is not numeric`);
    }
    return v;
  });
}

export function stringColumn(table: Table, col: Map<string, number>, name: string): string[] {
  const idx = col.get(name);
  if (idx === undefined) throw new SchemaError(`unknown column '${name}'`);
  return table.rows.map((row) => row[idx]);
}

/** One JSON object per line; later records override earlier scalar keys. */
export function parseJsonl(text: string): Record<string, unknown>[] {
  const out: Record<string, unknown>[] = [];
  for (const [i, ln] of text.split(/\r?\n/).entries()) {
    if (!ln.trim()) continue;
    try {
      out.push(JSON.parse(ln) as Record<string, unknown>);
    } catch {
      throw new SchemaError(`manifest line ${i + 1} is not valid JSON`);
    }
  }
  return out;
}

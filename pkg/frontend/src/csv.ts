/** Minimal strict CSV handling for the simulator's fixed-schema outputs. */

export class CsvError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((ln, i) => {
    const cells = ln.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `row ${i + 2} has ${cells.length} cells, header has ${header.length}`
      );
    }
    return cells;
  });
  return { header, rows };
}

/** Throw a named-column error for the first schema violation. */
export function requireColumns(table: Table, required: string[], label = "input"): void {
  for (const col of required) {
    if (!table.header.includes(col)) {
      throw new CsvError(`${label} is missing required column "${col}"`);
    }
  }
}

export function column(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`missing required column "${name}"`);
  }
  return table.rows.map((r) => r[idx]);
}

export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((cell, i) => {
    const v = Number(cell);
    if (cell === "" || Number.isNaN(v)) {
      throw new CsvError(`column "${name}" row ${i + 2}: not a number (${cell})`);
    }
    return v;
  });
}

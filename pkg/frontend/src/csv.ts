/**
 * Strict parsing for the CSV files the optimisation package writes. Those
 * files are plain comma-separated tables with one header row and no quoting,
 * so anything fancier than splitting is a sign the input is not ours.
 */

export interface Table {
  header: string[];
  rows: string[][];
}

/** Input does not match the documented CSV schema. */
export class SchemaError extends Error {}

/** Split a CSV file into header and data rows, rejecting ragged lines. */
export function parseTable(text: string, context: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${context}: file is empty`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${context}: row ${i + 1} has ${cells.length} cells, ` +
          `header has ${header.length}`,
      );
    }
    return cells;
  });
  return { header, rows };
}

/**
 * Require the header to equal `expected` cell for cell, in order. The error
 * spells out the difference so a mismatched file is diagnosable from the
 * message alone.
 */
export function requireColumns(
  table: Table,
  expected: readonly string[],
  context: string,
): void {
  const found = table.header;
  const same =
    found.length === expected.length &&
    expected.every((name, i) => found[i] === name);
  if (same) {
    return;
  }
  const missing = expected.filter((name) => !found.includes(name));
  const unexpected = found.filter((name) => !expected.includes(name));
  const parts = [
    `${context}: column mismatch`,
    `  expected: ${expected.join(", ")}`,
    `  found:    ${found.join(", ")}`,
  ];
  if (missing.length > 0) {
    parts.push(`  missing: ${missing.join(", ")}`);
  }
  if (unexpected.length > 0) {
    parts.push(`  unexpected: ${unexpected.join(", ")}`);
  }
  if (missing.length === 0 && unexpected.length === 0) {
    parts.push("  (same columns, different order)");
  }
  throw new SchemaError(parts.join("\n"));
}

/** Require at least one data row. */
export function requireRows(table: Table, context: string): void {
  if (table.rows.length === 0) {
    throw new SchemaError(`${context}: no data rows`);
  }
}

/** Parse one cell as a finite number. */
export function numberCell(
  row: string[],
  index: number,
  name: string,
  context: string,
): number {
  const value = Number(row[index]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `${context}: column '${name}' has non-numeric value '${row[index]}'`,
    );
  }
  return value;
}

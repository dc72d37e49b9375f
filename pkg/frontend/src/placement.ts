/**
 * Inducing-point placement figure: the 2-d benchmark surface as a colour-map
 * raster with candidate and selected points scattered on top, rendered from
 * the placement CSV the optimisation CLI exports.
 *
 * The colour-map is recomputed here from the benchmark formula; everything
 * else on the figure is a CSV value. The summary means drawn under the plot
 * are also written into a <metadata> block as JSON so they can be parsed
 * back and checked against an independent recomputation.
 */

import { colormap } from "./colormap.js";
import {
  numberCell,
  parseTable,
  requireColumns,
  requireRows,
  SchemaError,
} from "./csv.js";
import { logGoldsteinPrice } from "./loggp2.js";
import { encodePng, pngDataUri } from "./png.js";

export const PLACEMENT_COLUMNS = [
  "role",
  "x1",
  "x2",
  "y",
  "f_true",
  "pred_mean",
  "pred_sd",
  "selected",
] as const;

export interface PlacementOptions {
  title?: string;
  /** Colour-map resolution (cells per side). */
  gridSize?: number;
}

export interface ObjectiveGrid {
  size: number;
  /** Row-major values, top scanline first (x2 decreasing). */
  values: Float64Array;
  min: number;
  max: number;
}

/** Evaluate the benchmark on a gridSize x gridSize raster of cell centres. */
export function objectiveGrid(size: number): ObjectiveGrid {
  const values = new Float64Array(size * size);
  let min = Infinity;
  let max = -Infinity;
  for (let row = 0; row < size; row++) {
    const x2 = (size - 1 - row + 0.5) / size;
    for (let col = 0; col < size; col++) {
      const x1 = (col + 0.5) / size;
      const value = logGoldsteinPrice(x1, x2);
      values[row * size + col] = value;
      min = Math.min(min, value);
      max = Math.max(max, value);
    }
  }
  return { size, values, min, max };
}

/** Render the grid to PNG bytes through the colour ramp. */
export function gridToPng(grid: ObjectiveGrid): Uint8Array {
  const rgb = new Uint8Array(grid.size * grid.size * 3);
  const span = grid.max - grid.min;
  for (let i = 0; i < grid.values.length; i++) {
    const t = span > 0 ? (grid.values[i] - grid.min) / span : 0.5;
    const [r, g, b] = colormap(t);
    rgb[3 * i] = r;
    rgb[3 * i + 1] = g;
    rgb[3 * i + 2] = b;
  }
  return encodePng(grid.size, grid.size, rgb);
}

interface Point {
  role: string;
  x1: number;
  x2: number;
  fTrue: number;
  selected: boolean;
}

const COLUMN_INDEX = Object.fromEntries(
  PLACEMENT_COLUMNS.map((name, i) => [name, i]),
) as Record<(typeof PLACEMENT_COLUMNS)[number], number>;

function extractPoints(text: string, context: string): Point[] {
  const table = parseTable(text, context);
  requireColumns(table, PLACEMENT_COLUMNS, context);
  requireRows(table, context);
  return table.rows.map((row, i) => {
    const role = row[COLUMN_INDEX.role];
    if (role !== "candidate" && role !== "inducing") {
      throw new SchemaError(
        `${context}: row ${i + 1} has unknown role '${role}'`,
      );
    }
    const selected = row[COLUMN_INDEX.selected];
    if (selected !== "0" && selected !== "1") {
      throw new SchemaError(
        `${context}: row ${i + 1} has non-flag selected value '${selected}'`,
      );
    }
    return {
      role,
      x1: numberCell(row, COLUMN_INDEX.x1, "x1", context),
      x2: numberCell(row, COLUMN_INDEX.x2, "x2", context),
      fTrue: numberCell(row, COLUMN_INDEX.f_true, "f_true", context),
      selected: selected === "1",
    };
  });
}

function mean(values: number[]): number {
  let total = 0;
  for (const value of values) {
    total += value;
  }
  return total / values.length;
}

/** Render a placement CSV (text plus a name for error messages) to SVG. */
export function renderPlacementSvg(
  text: string,
  context: string,
  options: PlacementOptions = {},
): string {
  const points = extractPoints(text, context);
  const gridSize = options.gridSize ?? 200;
  const grid = objectiveGrid(gridSize);
  const uri = pngDataUri(gridToPng(grid));

  const candidates = points.filter((p) => p.role === "candidate");
  const selected = points.filter((p) => p.selected);
  if (candidates.length === 0) {
    throw new SchemaError(`${context}: no candidate rows`);
  }
  if (selected.length === 0) {
    throw new SchemaError(`${context}: no selected rows`);
  }
  const meanSelected = mean(selected.map((p) => p.fTrue));
  const meanCandidates = mean(candidates.map((p) => p.fTrue));

  const width = 560;
  const height = 620;
  const plot = { x: 56, y: 32, width: 460, height: 460 };
  const px = (x1: number): number => plot.x + plot.width * x1;
  const py = (x2: number): number => plot.y + plot.height * (1 - x2);

  const annotations = {
    meanObjectiveAtSelected: meanSelected,
    meanObjectiveAtCandidates: meanCandidates,
    selectedCount: selected.length,
    candidateCount: candidates.length,
    colourMap: { gridSize, min: grid.min, max: grid.max },
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12" ` +
      `data-x-min="0" data-x-max="1" data-y-min="0" data-y-max="1" ` +
      `data-plot-x="${plot.x}" data-plot-y="${plot.y}" ` +
      `data-plot-width="${plot.width}" data-plot-height="${plot.height}">`,
  );
  parts.push(
    `<metadata id="placement-annotations">${JSON.stringify(annotations)}</metadata>`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  const title = options.title ?? "inducing point placement";
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14">${title}</text>`,
  );
  parts.push(
    `<image x="${plot.x}" y="${plot.y}" width="${plot.width}" ` +
      `height="${plot.height}" preserveAspectRatio="none" href="${uri}"/>`,
  );
  parts.push(
    `<rect x="${plot.x}" y="${plot.y}" width="${plot.width}" height="${plot.height}" ` +
      `fill="none" stroke="#333333"/>`,
  );

  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    parts.push(
      `<text x="${px(tick)}" y="${plot.y + plot.height + 16}" ` +
        `text-anchor="middle">${tick}</text>`,
    );
    parts.push(
      `<text x="${plot.x - 8}" y="${py(tick) + 4}" text-anchor="end">${tick}</text>`,
    );
  }

  for (const p of candidates) {
    if (p.selected) {
      continue;
    }
    parts.push(
      `<circle class="candidate" cx="${px(p.x1)}" cy="${py(p.x2)}" r="2.4" ` +
        `fill="none" stroke="white" stroke-width="1" stroke-opacity="0.85"/>`,
    );
  }
  for (const p of selected) {
    const cls = p.role === "inducing" ? "inducing" : "selected";
    parts.push(
      `<circle class="${cls}" cx="${px(p.x1)}" cy="${py(p.x2)}" r="4.2" ` +
        `fill="#2ca02c" stroke="white" stroke-width="1.2"/>`,
    );
  }

  const textY = plot.y + plot.height + 44;
  parts.push(
    `<text class="annotation" x="${plot.x}" y="${textY}">` +
      `mean objective at selected points: ${meanSelected.toFixed(4)} ` +
      `(${selected.length} points)</text>`,
  );
  parts.push(
    `<text class="annotation" x="${plot.x}" y="${textY + 18}">` +
      `mean objective at all candidates: ${meanCandidates.toFixed(4)} ` +
      `(${candidates.length} points)</text>`,
  );
  parts.push(
    `<text class="annotation" x="${plot.x}" y="${textY + 36}">` +
      `colour-map: benchmark surface, ${gridSize}x${gridSize} grid, ` +
      `range [${grid.min.toFixed(4)}, ${grid.max.toFixed(4)}]</text>`,
  );

  parts.push("</svg>");
  return parts.join("\n");
}

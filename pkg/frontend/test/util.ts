import { readdirSync, readFileSync } from "node:fs";
import { join } from "node:path";

export function fixturePath(name: string): string {
  return join(process.cwd(), "fixtures", name);
}

export function readFixture(name: string): string {
  return readFileSync(fixturePath(name), "utf8");
}

/** All committed aggregated-run fixture files. */
export function aggFixtureNames(): string[] {
  return readdirSync(join(process.cwd(), "fixtures"))
    .filter((name) => name.startsWith("agg_") && name.endsWith(".csv"))
    .sort();
}

/** First value of an attribute anywhere in the SVG text. */
export function attr(svg: string, name: string): string {
  const match = svg.match(new RegExp(`${name}="([^"]*)"`));
  if (match === null) {
    throw new Error(`attribute ${name} not found`);
  }
  return match[1];
}

export function numAttr(svg: string, name: string): number {
  return Number(attr(svg, name));
}

/** Coordinate pairs of a path's d string (M/L/Z commands only). */
export function pathPairs(d: string): Array<[number, number]> {
  return d
    .replace(/[MLZ]/g, " ")
    .trim()
    .split(/\s+/)
    .map((pair) => {
      const [x, y] = pair.split(",").map(Number);
      return [x, y] as [number, number];
    });
}

/** Invert a pixel x coordinate back to a data value via the data- attrs. */
export function invertX(svg: string, px: number): number {
  const x0 = numAttr(svg, "data-plot-x");
  const width = numAttr(svg, "data-plot-width");
  const min = numAttr(svg, "data-x-min");
  const max = numAttr(svg, "data-x-max");
  return min + ((px - x0) / width) * (max - min);
}

/** Invert a pixel y coordinate (flipped axis, optional log10 scale). */
export function invertY(svg: string, py: number): number {
  const y0 = numAttr(svg, "data-plot-y");
  const height = numAttr(svg, "data-plot-height");
  const min = numAttr(svg, "data-y-min");
  const max = numAttr(svg, "data-y-max");
  const t = min + ((y0 + height - py) / height) * (max - min);
  return attr(svg, "data-y-scale") === "log10" ? 10 ** t : t;
}

/** |a - b| within 1e-9, relative for large magnitudes. */
export function expectClose(a: number, b: number): void {
  const tol = 1e-9 * Math.max(1, Math.abs(b));
  if (!(Math.abs(a - b) <= tol)) {
    throw new Error(`expected ${a} to be within ${tol} of ${b}`);
  }
}

/**
 * The 2-d benchmark surface, duplicated here so the plotter can paint its
 * colour-map without calling back into Python. The cross-check test compares
 * this function against objective values the optimisation package exported
 * into the placement CSV.
 */

/**
 * Standardised logarithmic Goldstein-Price surface on the unit square,
 * negated so that larger is better.
 */
export function logGoldsteinPrice(x1: number, x2: number): number {
  const u = 4.0 * x1 - 2.0;
  const v = 4.0 * x2 - 2.0;
  const f1 =
    1.0 +
    (u + v + 1.0) ** 2 *
      (19.0 - 14.0 * u + 3.0 * u * u - 14.0 * v + 6.0 * u * v + 3.0 * v * v);
  const f2 =
    30.0 +
    (2.0 * u - 3.0 * v) ** 2 *
      (18.0 - 32.0 * u + 12.0 * u * u + 48.0 * v - 36.0 * u * v + 27.0 * v * v);
  return -(Math.log(f1 * f2) - 8.693) / 2.427;
}

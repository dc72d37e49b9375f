/** Perceptual colour ramp for the objective colour-map. */

const ANCHORS: ReadonlyArray<readonly [number, number, number]> = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

/**
 * Map t in [0, 1] to an RGB triple by linear interpolation between the
 * anchor colours (a compact viridis approximation). Values outside [0, 1]
 * are clamped.
 */
export function colormap(t: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (ANCHORS.length - 1);
  const low = Math.min(ANCHORS.length - 2, Math.floor(scaled));
  const frac = scaled - low;
  const a = ANCHORS[low];
  const b = ANCHORS[low + 1];
  return [
    Math.round(a[0] + frac * (b[0] - a[0])),
    Math.round(a[1] + frac * (b[1] - a[1])),
    Math.round(a[2] + frac * (b[2] - a[2])),
  ];
}

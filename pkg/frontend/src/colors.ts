/** Distance color code: darkest blue at zero distance, darkest red at the
 * top of the scale, fading through a neutral light grey in between. The
 * scale top is the matrix maximum by default; an absolute [0, sqrt(2)]
 * scale is available for comparing heatmaps across artifacts. */

export type Rgb = [number, number, number];

export const DARKEST_BLUE: Rgb = [0, 0, 139];
export const DARKEST_RED: Rgb = [139, 0, 0];
const NEUTRAL: Rgb = [247, 247, 247];

/** Upper bound of the squareInverse transform: distance of two entities
 * with similarity 0. */
export const ABSOLUTE_SCALE_MAX = Math.sqrt(2);

function mix(a: Rgb, b: Rgb, t: number): Rgb {
  return [
    Math.round(a[0] + (b[0] - a[0]) * t),
    Math.round(a[1] + (b[1] - a[1]) * t),
    Math.round(a[2] + (b[2] - a[2]) * t),
  ];
}

export function rgbString(color: Rgb): string {
  return `rgb(${color[0]}, ${color[1]}, ${color[2]})`;
}

/** Map a distance to a color on the blue-to-red scale over [0, scaleMax].
 * A non-positive scaleMax means every value on the scale is zero distance
 * (an all-zero matrix), which renders darkest blue. Values are clamped so
 * out-of-scale distances saturate instead of wrapping. */
export function heatColor(value: number, scaleMax: number): string {
  if (scaleMax <= 0) {
    return rgbString(DARKEST_BLUE);
  }
  const t = Math.min(1, Math.max(0, value / scaleMax));
  const color =
    t <= 0.5 ? mix(DARKEST_BLUE, NEUTRAL, t * 2) : mix(NEUTRAL, DARKEST_RED, t * 2 - 1);
  return rgbString(color);
}

export function scaleTop(matrixMax: number, absolute: boolean): number {
  return absolute ? ABSOLUTE_SCALE_MAX : matrixMax;
}

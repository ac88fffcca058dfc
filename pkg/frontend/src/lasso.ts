/** Lasso path utilities: screen-to-domain conversion and the degeneracy
 * check that gates requests to the selection endpoint. */

export type Point = [number, number];

export function shoelaceArea(polygon: Point[]): number {
  if (polygon.length < 3) return 0;
  let area = 0;
  for (let i = 0; i < polygon.length; i++) {
    const [x0, y0] = polygon[i];
    const [x1, y1] = polygon[(i + 1) % polygon.length];
    area += x0 * y1 - x1 * y0;
  }
  return Math.abs(area) / 2;
}

export function isDegenerate(polygon: Point[]): boolean {
  return polygon.length < 3 || shoelaceArea(polygon) === 0;
}

/** Canvas pixel coordinates to unit-square domain coordinates. */
export function toDomain(
  path: Point[],
  canvasWidth: number,
  canvasHeight: number,
): Point[] {
  return path.map(([x, y]) => [x / canvasWidth, y / canvasHeight]);
}

/** Thin out a freehand path: keep every stride-th vertex plus the last. */
export function decimate(path: Point[], stride: number): Point[] {
  if (stride <= 1 || path.length <= 3) return path;
  const out = path.filter((_point, index) => index % stride === 0);
  if (out[out.length - 1] !== path[path.length - 1]) {
    out.push(path[path.length - 1]);
  }
  return out;
}

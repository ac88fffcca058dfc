/** DOM-free rendering core: composes encodings and points into an RGBA
 * buffer that the browser blits via putImageData. Keeping it canvas-free
 * makes the frame-budget behavior testable headlessly. */

export interface FrameBuffer {
  width: number;
  height: number;
  data: Uint8ClampedArray<ArrayBuffer>; // RGBA, ImageData-compatible
}

export type Rgb = [number, number, number];

/** Categorical palette; first entries follow the blue/red/green/orange
 * cluster coloring used by the batch renderer. */
export const PALETTE: Rgb[] = [
  [31, 119, 180], [214, 39, 40], [44, 160, 44], [255, 127, 14],
  [148, 103, 189], [140, 86, 75], [227, 119, 194], [127, 127, 127],
  [188, 189, 34], [23, 190, 207],
];
export const UNLABELED: Rgb = [40, 40, 90];
export const SELECTION: Rgb = [255, 0, 255];
export const GRID_COLOR: Rgb = [170, 170, 170];
export const CONTOUR_COLOR: Rgb = [60, 60, 60];

export function createFrame(width: number, height: number): FrameBuffer {
  return { width, height, data: new Uint8ClampedArray(width * height * 4) };
}

export function clear(fb: FrameBuffer, rgb: Rgb = [255, 255, 255]): void {
  const { data } = fb;
  if (rgb[0] === 255 && rgb[1] === 255 && rgb[2] === 255) {
    data.fill(255); // white with opaque alpha is a plain memset
    return;
  }
  for (let p = 0; p < data.length; p += 4) {
    data[p] = rgb[0];
    data[p + 1] = rgb[1];
    data[p + 2] = rgb[2];
    data[p + 3] = 255;
  }
}

function setPixel(fb: FrameBuffer, x: number, y: number, rgb: Rgb): void {
  if (x < 0 || y < 0 || x >= fb.width || y >= fb.height) return;
  const p = (y * fb.width + x) * 4;
  fb.data[p] = rgb[0];
  fb.data[p + 1] = rgb[1];
  fb.data[p + 2] = rgb[2];
  fb.data[p + 3] = 255;
}

/** Density backdrop: monotone single-hue ramp from white to deep blue. */
export function drawBackground(
  fb: FrameBuffer,
  values: Float32Array,
  size: number,
  range: [number, number],
): void {
  const span = range[1] > range[0] ? range[1] - range[0] : 1;
  for (let y = 0; y < fb.height; y++) {
    const sy = Math.min(size - 1, Math.floor((y * size) / fb.height));
    for (let x = 0; x < fb.width; x++) {
      const sx = Math.min(size - 1, Math.floor((x * size) / fb.width));
      let t = (values[sy * size + sx] - range[0]) / span;
      t = Math.max(0, Math.min(1, t));
      setPixel(fb, x, y, [
        Math.round(255 - 205 * t),
        Math.round(255 - 175 * t),
        Math.round(255 - 75 * t),
      ]);
    }
  }
}

export function drawPolylines(
  fb: FrameBuffer,
  polylines: [number, number][][],
  rgb: Rgb,
): void {
  for (const line of polylines) {
    for (let s = 0; s + 1 < line.length; s++) {
      const [x0, y0] = line[s];
      const [x1, y1] = line[s + 1];
      const steps = Math.max(
        1,
        Math.ceil(Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0)) * fb.width) * 2,
      );
      for (let t = 0; t <= steps; t++) {
        const f = t / steps;
        const px = Math.min(fb.width - 1, Math.floor((x0 + f * (x1 - x0)) * fb.width));
        const py = Math.min(fb.height - 1, Math.floor((y0 + f * (y1 - y0)) * fb.height));
        setPixel(fb, px, py, rgb);
      }
    }
  }
}

/** Draw flat (x, y) pairs as squares of side 2 * radius + 1. Selected ids
 * render on top in the selection color. */
export function drawPoints(
  fb: FrameBuffer,
  xy: Float32Array,
  labels: number[] | null,
  selected: Set<number> | null,
  radius: number,
): void {
  const n = xy.length / 2;
  for (let pass = 0; pass < 2; pass++) {
    for (let i = 0; i < n; i++) {
      const isSelected = selected !== null && selected.has(i);
      if ((pass === 1) !== isSelected) continue;
      const color = isSelected
        ? SELECTION
        : labels
          ? PALETTE[labels[i] % PALETTE.length]
          : UNLABELED;
      const cx = Math.min(fb.width - 1, Math.floor(xy[2 * i] * fb.width));
      const cy = Math.min(fb.height - 1, Math.floor(xy[2 * i + 1] * fb.height));
      for (let dy = -radius; dy <= radius; dy++) {
        for (let dx = -radius; dx <= radius; dx++) {
          setPixel(fb, cx + dx, cy + dy, color);
        }
      }
    }
  }
}

export interface Scene {
  positions: Float32Array;
  labels: number[] | null;
  selected: Set<number> | null;
  pointRadius: number;
  background?: { values: Float32Array; size: number; range: [number, number] };
  grid?: [number, number][][];
  contours?: [number, number][][];
}

/** Full composition: encodings render beneath the points. */
export function renderView(fb: FrameBuffer, scene: Scene): void {
  if (scene.background) {
    drawBackground(fb, scene.background.values, scene.background.size,
      scene.background.range);
  } else {
    clear(fb);
  }
  if (scene.grid) drawPolylines(fb, scene.grid, GRID_COLOR);
  if (scene.contours) drawPolylines(fb, scene.contours, CONTOUR_COLOR);
  drawPoints(fb, scene.positions, scene.labels, scene.selected, scene.pointRadius);
}

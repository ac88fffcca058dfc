/** Client-side blending between cached integer-level frames.
 *
 * Matches the server's transition semantics: positions at a fractional level
 * are the per-sample linear blend of the frames bracketing it, so a cached
 * pair of frames answers any level between them without a round trip. */

export function interpolateFrames(
  low: Float32Array | number[],
  high: Float32Array | number[],
  fraction: number,
): Float32Array {
  if (low.length !== high.length) {
    throw new Error('frame length mismatch');
  }
  const out = new Float32Array(low.length);
  const a = 1 - fraction;
  for (let i = 0; i < low.length; i++) {
    out[i] = a * (low[i] as number) + fraction * (high[i] as number);
  }
  return out;
}

export function flattenPositions(pairs: [number, number][]): Float32Array {
  const out = new Float32Array(pairs.length * 2);
  for (let i = 0; i < pairs.length; i++) {
    out[2 * i] = pairs[i][0];
    out[2 * i + 1] = pairs[i][1];
  }
  return out;
}

/** Frame cache plus level resolution: integer levels come from the server,
 * fractional ones interpolate between the two nearest cached frames. */
export class FrameStore {
  private frames = new Map<number, Float32Array>();

  has(level: number): boolean {
    return this.frames.has(level);
  }

  put(level: number, frame: Float32Array): void {
    this.frames.set(level, frame);
  }

  get(level: number): Float32Array | undefined {
    return this.frames.get(level);
  }

  /** Positions at a continuous level, or undefined until both bracketing
   * frames are cached. */
  resolve(level: number): Float32Array | undefined {
    const low = Math.floor(level);
    const high = Math.ceil(level);
    if (low === high) return this.frames.get(low);
    const a = this.frames.get(low);
    const b = this.frames.get(high);
    if (!a || !b) return undefined;
    return interpolateFrames(a, b, level - low);
  }

  missingLevels(level: number): number[] {
    const need = level === Math.floor(level)
      ? [level]
      : [Math.floor(level), Math.ceil(level)];
    return need.filter((l) => !this.frames.has(l));
  }
}

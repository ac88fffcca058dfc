/** Slider scrubbing: debounced integer-frame fetches with at most one
 * in-flight request, stale responses discarded by sequence number, and
 * client-side interpolation while both bracketing frames are cached. */

import { FrameStore } from './interpolate.js';

export type FrameFetcher = (level: number) => Promise<Float32Array>;

export interface ScrubUpdate {
  level: number;
  positions: Float32Array | undefined; // undefined while frames are loading
}

export class Scrubber {
  readonly store = new FrameStore();
  private sequence = 0;
  private inFlight = false;
  private pending: number | null = null;
  requestCount = 0;

  constructor(
    private fetchFrame: FrameFetcher,
    private onUpdate: (update: ScrubUpdate) => void,
  ) {}

  /** Jump to a level. Cached levels render synchronously; otherwise the
   * missing integer frames are fetched one at a time and newer scrubs
   * supersede queued ones. */
  scrub(level: number): void {
    this.sequence += 1;
    const resolved = this.store.resolve(level);
    if (resolved !== undefined) {
      this.onUpdate({ level, positions: resolved });
      return;
    }
    this.onUpdate({ level, positions: undefined });
    this.pending = level;
    void this.pump();
  }

  private async pump(): Promise<void> {
    if (this.inFlight || this.pending === null) return;
    const level = this.pending;
    const missing = this.store.missingLevels(level);
    if (missing.length === 0) {
      this.pending = null;
      this.onUpdate({ level, positions: this.store.resolve(level) });
      return;
    }
    this.inFlight = true;
    const ticket = this.sequence;
    try {
      this.requestCount += 1;
      const frame = await this.fetchFrame(missing[0]);
      this.store.put(missing[0], frame);
    } finally {
      this.inFlight = false;
    }
    // a newer scrub may have repointed `pending`; always keep pumping, but
    // only the latest level gets rendered
    if (ticket === this.sequence && this.pending === level) {
      const resolved = this.store.resolve(level);
      if (resolved !== undefined) {
        this.pending = null;
        this.onUpdate({ level, positions: resolved });
        return;
      }
    }
    void this.pump();
  }
}

/** Trailing-edge debounce for high-frequency slider events. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, waitMs);
  };
}

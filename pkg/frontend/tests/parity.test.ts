/** Parity against the live service: the client interpolation must reproduce
 * the server's fractional-level positions, and a lasso drawn around one
 * deformed cluster must come back single-label. */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SessionApi } from '../src/api.js';
import { FrameStore, flattenPositions } from '../src/interpolate.js';
import { ServerHandle, startServer } from './server.js';

const FLOAT32_EPS = 1.1920929e-7;

let server: ServerHandle;
let api: SessionApi;

beforeAll(async () => {
  server = await startServer(8765);
  api = new SessionApi(server.baseUrl);
}, 60_000);

afterAll(() => {
  server?.stop();
});

describe('client interpolation parity', () => {
  it('level 1.5 equals the server transition within float32 epsilon', async () => {
    const info = await api.createFromGenerator(
      { kind: 'four-cluster', desk_scale: true, seed: 4 },
      { k: 9, iterations: 4 },
    );
    expect(info.n).toBe(10_000);

    const store = new FrameStore();
    store.put(1, flattenPositions((await api.positions(info.id, 1)).positions));
    store.put(2, flattenPositions((await api.positions(info.id, 2)).positions));
    const client = store.resolve(1.5)!;

    const serverSide = flattenPositions(
      (await api.positions(info.id, 1.5)).positions,
    );
    expect(client.length).toBe(serverSide.length);
    let worst = 0;
    for (let i = 0; i < client.length; i++) {
      worst = Math.max(worst, Math.abs(client[i] - serverSide[i]));
    }
    expect(worst).toBeLessThanOrEqual(FLOAT32_EPS);
  }, 120_000);

  it('binary and JSON payloads agree', async () => {
    const info = await api.createFromGenerator(
      { kind: 'four-cluster', desk_scale: true, seed: 4 },
      { k: 8, iterations: 2 },
    );
    const json = flattenPositions((await api.positions(info.id, 2)).positions);
    const binary = await api.positionsBinary(info.id, 2);
    expect(binary.length).toBe(json.length);
    for (let i = 0; i < binary.length; i += 997) {
      expect(Math.abs(binary[i] - json[i])).toBeLessThanOrEqual(FLOAT32_EPS);
    }
  }, 120_000);
});

describe('lasso selection', () => {
  it('a rectangle inside one deformed cluster returns a single label', async () => {
    const info = await api.createFromGenerator(
      { kind: 'four-cluster', desk_scale: true, seed: 4 },
      { k: 9, iterations: 16 },
    );
    const payload = await api.positions(info.id, 16);
    const labels = payload.labels!;

    // bounding box of the first cluster's deformed positions, shrunk toward
    // its centroid so the polygon stays strictly inside the cluster hull
    let lo = [Infinity, Infinity];
    let hi = [-Infinity, -Infinity];
    payload.positions.forEach(([x, y], row) => {
      if (labels[row] !== 0) return;
      lo = [Math.min(lo[0], x), Math.min(lo[1], y)];
      hi = [Math.max(hi[0], x), Math.max(hi[1], y)];
    });
    const mid = [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2];
    const half = [(hi[0] - lo[0]) * 0.35, (hi[1] - lo[1]) * 0.35];
    const polygon: [number, number][] = [
      [mid[0] - half[0], mid[1] - half[1]],
      [mid[0] + half[0], mid[1] - half[1]],
      [mid[0] + half[0], mid[1] + half[1]],
      [mid[0] - half[0], mid[1] + half[1]],
    ];
    const result = await api.lasso(info.id, polygon, 16);
    expect(result.ids.length).toBeGreaterThan(500);
    const picked = new Set(result.ids.map((id) => labels[id]));
    expect([...picked]).toEqual([0]);

    // selection identity is id-based: the original coordinates come back
    const frame0 = await api.positions(info.id, 0);
    result.ids.forEach((id, row) => {
      expect(result.original[row][0]).toBeCloseTo(frame0.positions[id][0], 10);
    });
  }, 120_000);
});

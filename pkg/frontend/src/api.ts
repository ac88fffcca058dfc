/** Typed client for the session service. The UI never computes deformation
 * math itself; everything comes through these endpoints. */

export interface SessionInfo {
  id: string;
  iterations: number;
  n: number;
}

export interface PositionsPayload {
  level: number;
  ids: number[];
  positions: [number, number][];
  labels: number[] | null;
}

export interface GridEncoding {
  kind: 'grid';
  spacing: number;
  subdivision: number;
  polylines: [number, number][][];
}

export interface ContourEncoding {
  kind: 'contours';
  levels: number[];
  line_levels: number[];
  polylines: [number, number][][];
}

export interface DensityEncoding {
  kind: 'density';
  size: number;
  range: [number, number];
  values_b64: string;
}

export interface LassoResult {
  ids: number[];
  original: [number, number][];
}

export interface MetricRecord {
  iteration: number;
  binned_stddev: number;
  overplotting: number;
  trustworthiness: number | null;
  ordering: number | null;
}

/** Binary payloads above this sample count; JSON below. */
export const BINARY_THRESHOLD = 100_000;

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let message = response.statusText;
    try {
      const body = await response.json();
      message = `${body.code}: ${body.message}`;
    } catch {
      /* non-JSON error body */
    }
    throw new Error(message);
  }
  return response;
}

export class SessionApi {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createFromCsv(csv: string): Promise<SessionInfo> {
    const response = await fetch(this.url('/api/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body: csv,
    });
    return (await expectOk(response)).json();
  }

  async createFromGenerator(
    generator: Record<string, unknown>,
    params: Record<string, unknown> = {},
  ): Promise<SessionInfo> {
    const response = await fetch(this.url('/api/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ generator, params }),
    });
    return (await expectOk(response)).json();
  }

  async positions(id: string, level: number): Promise<PositionsPayload> {
    const response = await fetch(
      this.url(`/api/sessions/${id}/positions?level=${level}`),
    );
    return (await expectOk(response)).json();
  }

  /** Compact id-ordered little-endian float32 (x, y) pairs for large n. */
  async positionsBinary(id: string, level: number): Promise<Float32Array> {
    const response = await fetch(
      this.url(`/api/sessions/${id}/positions?level=${level}&format=binary`),
    );
    const buffer = await (await expectOk(response)).arrayBuffer();
    return new Float32Array(buffer);
  }

  async encoding(
    id: string,
    kind: 'grid' | 'density' | 'contours',
    level: number,
  ): Promise<GridEncoding | ContourEncoding | DensityEncoding> {
    const response = await fetch(
      this.url(`/api/sessions/${id}/encodings/${kind}?level=${level}`),
    );
    return (await expectOk(response)).json();
  }

  async lasso(
    id: string,
    polygon: [number, number][],
    level: number,
  ): Promise<LassoResult> {
    const response = await fetch(this.url(`/api/sessions/${id}/lasso`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ polygon, level }),
    });
    return (await expectOk(response)).json();
  }

  async metrics(id: string): Promise<{ records: MetricRecord[] }> {
    const response = await fetch(this.url(`/api/sessions/${id}/metrics`));
    return (await expectOk(response)).json();
  }

  async remove(id: string): Promise<void> {
    await expectOk(
      await fetch(this.url(`/api/sessions/${id}`), { method: 'DELETE' }),
    );
  }
}

export function decodeDensity(payload: DensityEncoding): Float32Array {
  const binary = atob(payload.values_b64);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return new Float32Array(bytes.buffer);
}

/** Browser glue: wires the canvas, slider, encoding toggles, lasso tool, and
 * metrics table to the session API. All math lives server-side. */

import {
  BINARY_THRESHOLD,
  ContourEncoding,
  DensityEncoding,
  GridEncoding,
  SessionApi,
  decodeDensity,
} from './api.js';
import { flattenPositions } from './interpolate.js';
import { decimate, isDegenerate, toDomain, Point } from './lasso.js';
import { createFrame, renderView, Scene } from './renderer.js';
import { Scrubber, debounce } from './scrub.js';
import {
  ViewState,
  initialState,
  selectionMask,
  toggleEncoding,
  withLevel,
  withSelection,
} from './state.js';

const CANVAS_SIZE = 768;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

class App {
  private api = new SessionApi('');
  private state: ViewState = initialState();
  private canvas = el<HTMLCanvasElement>('plot');
  private ctx = this.canvas.getContext('2d')!;
  private frame = createFrame(CANVAS_SIZE, CANVAS_SIZE);
  private labels: number[] | null = null;
  private scrubber: Scrubber | null = null;
  private currentPositions: Float32Array | null = null;
  private encodingCache = new Map<string, GridEncoding | ContourEncoding | DensityEncoding>();
  private lassoPath: Point[] = [];
  private lassoActive = false;

  constructor() {
    this.canvas.width = CANVAS_SIZE;
    this.canvas.height = CANVAS_SIZE;
    el<HTMLButtonElement>('load-demo').onclick = () => void this.loadDemo();
    el<HTMLInputElement>('csv-file').onchange = (ev) => void this.loadCsv(ev);
    const slider = el<HTMLInputElement>('level');
    slider.oninput = debounce(() => {
      this.setLevel(parseFloat(slider.value));
    }, 30);
    for (const kind of ['grid', 'density', 'contours'] as const) {
      el<HTMLInputElement>(`toggle-${kind}`).onchange = () => {
        this.state = toggleEncoding(this.state, kind);
        void this.refreshEncodings();
      };
    }
    el<HTMLButtonElement>('clear-selection').onclick = () => {
      this.state = withSelection(this.state, null);
      this.redraw();
      this.renderSelectionTable();
    };
    this.canvas.onpointerdown = (ev) => this.lassoStart(ev);
    this.canvas.onpointermove = (ev) => this.lassoMove(ev);
    this.canvas.onpointerup = () => void this.lassoEnd();
  }

  private toast(message: string): void {
    const node = el<HTMLDivElement>('toast');
    node.textContent = message;
    node.style.opacity = '1';
    setTimeout(() => (node.style.opacity = '0'), 2500);
  }

  private async loadDemo(): Promise<void> {
    const info = await this.api.createFromGenerator(
      { kind: 'four-cluster', desk_scale: true, seed: 4 },
      { k: 9, iterations: 16 },
    );
    await this.startSession(info.id, info.iterations, info.n);
  }

  private async loadCsv(ev: Event): Promise<void> {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const info = await this.api.createFromCsv(await file.text());
      await this.startSession(info.id, info.iterations, info.n);
    } catch (err) {
      this.toast(String(err));
    }
  }

  private async startSession(id: string, iterations: number, n: number): Promise<void> {
    this.state = { ...initialState(), sessionId: id, iterations, n };
    this.encodingCache.clear();
    const slider = el<HTMLInputElement>('level');
    slider.max = String(iterations);
    slider.step = '0.05';
    slider.value = '0';
    // labels ride along with the JSON payload of frame 0
    const first = await this.api.positions(id, 0);
    this.labels = first.labels;
    this.scrubber = new Scrubber(
      (level) => this.fetchFrame(level),
      (update) => {
        if (update.positions) {
          this.currentPositions = update.positions;
          this.redraw();
        }
      },
    );
    this.scrubber.store.put(0, flattenPositions(first.positions));
    this.scrubber.scrub(0);
    await this.refreshMetrics();
    this.toast(`session ${id.slice(0, 8)}…: ${n} samples, ${iterations} iterations`);
  }

  private async fetchFrame(level: number): Promise<Float32Array> {
    const id = this.state.sessionId!;
    if (this.state.n > BINARY_THRESHOLD) {
      return this.api.positionsBinary(id, level);
    }
    return flattenPositions((await this.api.positions(id, level)).positions);
  }

  private setLevel(level: number): void {
    this.state = withLevel(this.state, level);
    el<HTMLSpanElement>('level-value').textContent =
      this.state.level.toFixed(2);
    this.scrubber?.scrub(this.state.level);
    void this.refreshEncodings();
  }

  private encodingLevel(): number {
    return Math.round(this.state.level);
  }

  private async refreshEncodings(): Promise<void> {
    if (!this.state.sessionId) return;
    const level = this.encodingLevel();
    for (const kind of this.state.encodings) {
      const key = `${kind}:${level}`;
      if (!this.encodingCache.has(key)) {
        this.encodingCache.set(
          key,
          await this.api.encoding(this.state.sessionId, kind, level),
        );
      }
    }
    this.redraw();
  }

  private async refreshMetrics(): Promise<void> {
    if (!this.state.sessionId) return;
    const { records } = await this.api.metrics(this.state.sessionId);
    const rows = records.map(
      (r) =>
        `<tr><td>${r.iteration}</td><td>${r.binned_stddev.toFixed(3)}</td>` +
        `<td>${(100 * r.overplotting).toFixed(1)}%</td></tr>`,
    );
    el<HTMLTableElement>('metrics-table').innerHTML =
      '<tr><th>iter</th><th>binned σ</th><th>overplotting</th></tr>' +
      rows.join('');
  }

  private redraw(): void {
    if (!this.currentPositions) return;
    const level = this.encodingLevel();
    const scene: Scene = {
      positions: this.currentPositions,
      labels: this.labels,
      selected: selectionMask(this.state),
      pointRadius: this.state.pointRadius,
    };
    const grid = this.encodingCache.get(`grid:${level}`) as GridEncoding | undefined;
    if (this.state.encodings.has('grid') && grid) scene.grid = grid.polylines;
    const contours = this.encodingCache.get(`contours:${level}`) as
      | ContourEncoding
      | undefined;
    if (this.state.encodings.has('contours') && contours) {
      scene.contours = contours.polylines;
    }
    const density = this.encodingCache.get(`density:${level}`) as
      | DensityEncoding
      | undefined;
    if (this.state.encodings.has('density') && density) {
      scene.background = {
        values: decodeDensity(density),
        size: density.size,
        range: density.range,
      };
    }
    renderView(this.frame, scene);
    this.ctx.putImageData(
      new ImageData(this.frame.data, CANVAS_SIZE, CANVAS_SIZE),
      0,
      0,
    );
    this.drawLassoOverlay();
  }

  private lassoStart(ev: PointerEvent): void {
    if (!this.state.sessionId) return;
    this.lassoActive = true;
    this.lassoPath = [[ev.offsetX, ev.offsetY]];
  }

  private lassoMove(ev: PointerEvent): void {
    if (!this.lassoActive) return;
    this.lassoPath.push([ev.offsetX, ev.offsetY]);
    this.redraw();
  }

  private async lassoEnd(): Promise<void> {
    if (!this.lassoActive) return;
    this.lassoActive = false;
    const polygon = toDomain(
      decimate(this.lassoPath, 3),
      CANVAS_SIZE,
      CANVAS_SIZE,
    );
    this.lassoPath = [];
    if (isDegenerate(polygon)) {
      this.toast('lasso has no interior — draw a closed region');
      this.redraw();
      return;
    }
    try {
      const result = await this.api.lasso(
        this.state.sessionId!,
        polygon,
        this.state.level,
      );
      this.state = withSelection(this.state, result);
      this.renderSelectionTable();
      this.redraw();
    } catch (err) {
      this.toast(String(err));
    }
  }

  private drawLassoOverlay(): void {
    if (this.lassoPath.length < 2) return;
    this.ctx.strokeStyle = '#c0c';
    this.ctx.beginPath();
    this.ctx.moveTo(this.lassoPath[0][0], this.lassoPath[0][1]);
    for (const [x, y] of this.lassoPath) this.ctx.lineTo(x, y);
    this.ctx.stroke();
  }

  private renderSelectionTable(): void {
    const selection = this.state.selection;
    el<HTMLSpanElement>('selection-count').textContent = selection
      ? `${selection.ids.length} selected`
      : 'none';
    const rows = (selection?.ids ?? []).slice(0, 50).map((id, row) => {
      const [x, y] = selection!.original[row];
      return `<tr><td>${id}</td><td>${x.toFixed(4)}</td><td>${y.toFixed(4)}</td></tr>`;
    });
    el<HTMLTableElement>('selection-table').innerHTML =
      '<tr><th>id</th><th>x₀</th><th>y₀</th></tr>' + rows.join('');
  }
}

new App();

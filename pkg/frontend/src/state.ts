/** View state: what the analyst is looking at, independent of the DOM. */

export type EncodingKind = 'grid' | 'density' | 'contours';

export interface Selection {
  ids: number[];
  original: [number, number][];
}

export interface ViewState {
  sessionId: string | null;
  iterations: number;
  n: number;
  level: number; // continuous in [0, iterations]
  encodings: Set<EncodingKind>;
  selection: Selection | null;
  colorBy: 'label' | 'original-density';
  pointRadius: number;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    iterations: 0,
    n: 0,
    level: 0,
    encodings: new Set(),
    selection: null,
    colorBy: 'label',
    pointRadius: 1,
  };
}

export function clampLevel(state: ViewState, level: number): number {
  return Math.max(0, Math.min(state.iterations, level));
}

/** Scrubbing never touches the selection: it is id-based and the ids are
 * stable across levels. */
export function withLevel(state: ViewState, level: number): ViewState {
  return { ...state, level: clampLevel(state, level) };
}

export function withSelection(
  state: ViewState,
  selection: Selection | null,
): ViewState {
  return { ...state, selection };
}

export function toggleEncoding(state: ViewState, kind: EncodingKind): ViewState {
  const encodings = new Set(state.encodings);
  if (encodings.has(kind)) encodings.delete(kind);
  else encodings.add(kind);
  return { ...state, encodings };
}

export function selectionMask(state: ViewState): Set<number> | null {
  if (!state.selection) return null;
  return new Set(state.selection.ids);
}

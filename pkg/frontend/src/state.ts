/** View state and its pure update helpers.
 *
 * Every update returns a new state; the drawing document inside is treated
 * as read-only layout data. The view restyles it but never rewrites orders,
 * red assignments, or the crossing report.
 */

import { assertSupportedDocument, TOGGLEABLE_CLASSES } from "./scene.js";
import type { HighlightClass } from "./scene.js";
import type {
  DocumentEdge,
  DrawingDocument,
  LayoutPayload,
  SolveInfo,
} from "./types.js";

export interface SolverOptions {
  mode: "heuristic" | "exact" | "both";
  rec: boolean;
  strategy: "A" | "B";
  seed: number | null;
}

export interface Transform {
  x: number;
  y: number;
  scale: number;
}

export interface ViewState {
  document: DrawingDocument | null;
  solve: SolveInfo | null;
  visible: ReadonlySet<HighlightClass>;
  options: SolverOptions;
  transform: Transform;
  hovered: string | null;
  error: string | null;
}

export function initialViewState(): ViewState {
  return {
    document: null,
    solve: null,
    visible: new Set(TOGGLEABLE_CLASSES),
    options: { mode: "heuristic", rec: true, strategy: "A", seed: 0 },
    transform: { x: 0, y: 0, scale: 1 },
    hovered: null,
    error: null,
  };
}

export function applyPayload(state: ViewState, payload: LayoutPayload): ViewState {
  assertSupportedDocument(payload.document);
  return {
    ...state,
    document: payload.document,
    solve: payload.solve,
    hovered: null,
    error: null,
  };
}

/** Record a request failure; the last good document stays on screen. */
export function applyError(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}

export function toggleClass(state: ViewState, cls: string): ViewState {
  if (!(TOGGLEABLE_CLASSES as readonly string[]).includes(cls)) {
    throw new Error(`unknown highlight class ${cls}`);
  }
  const visible = new Set(state.visible);
  const known = cls as HighlightClass;
  if (visible.has(known)) {
    visible.delete(known);
  } else {
    visible.add(known);
  }
  return { ...state, visible };
}

export function setHovered(state: ViewState, id: string | null): ViewState {
  return { ...state, hovered: id };
}

export function setOptions(
  state: ViewState,
  patch: Partial<SolverOptions>,
): ViewState {
  return { ...state, options: { ...state.options, ...patch } };
}

export function setTransform(state: ViewState, transform: Transform): ViewState {
  return { ...state, transform };
}

/** Edges touching an argument, straight from the document's edge list. */
export function incidentEdges(doc: DrawingDocument, id: string): DocumentEdge[] {
  return doc.edges.filter((edge) => edge.source === id || edge.target === id);
}

/** The crossing number shown in the header; always the report's value. */
export function displayedObjective(state: ViewState): number | null {
  return state.document === null
    ? null
    : state.document.report.weighted_objective;
}

/** Readout lines for the solve panel; numbers come straight from the payload. */
export function objectiveSummary(state: ViewState): string[] {
  const lines: string[] = [];
  if (state.document !== null) {
    lines.push(
      `weighted crossings: ${state.document.report.weighted_objective}`,
    );
  }
  const solve = state.solve;
  if (solve === null) {
    return lines;
  }
  if (solve.heuristic !== undefined) {
    lines.push(`heuristic objective: ${solve.heuristic.objective}`);
  }
  if (solve.exact !== undefined) {
    lines.push(`exact objective: ${solve.exact.objective} (${solve.exact.status})`);
  }
  if (solve.ratio !== undefined) {
    lines.push(`heuristic/exact ratio: ${solve.ratio.toFixed(4)}`);
  }
  if (solve.absolute_crossings !== undefined) {
    lines.push(`absolute crossings: ${solve.absolute_crossings}`);
  }
  return lines;
}

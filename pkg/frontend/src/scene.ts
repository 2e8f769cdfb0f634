/** Pure scene construction: document plus visible classes in, drawable data out.
 *
 * The client computes its own geometry from the document's abstract layer
 * orders, so a resize or style change never needs another server round trip.
 * A scene is plain data with no DOM handles; building twice from the same
 * inputs gives deep-equal results, which is what makes toggle round trips
 * checkable.
 */

import type {
  ArgumentDisplay,
  CrossingReport,
  DocumentEdge,
  DrawingDocument,
  EdgeDisplay,
} from "./types.js";

export const SUPPORTED_SCHEMA_VERSION = 1;

/**
 * Highlight groups the UI can hide. Each toggle covers one semantic
 * highlight: RED and ORANGE also restyle the arguments or edges that share
 * the highlight, ODD_CYCLE covers both the cycle's arcs and its member
 * arguments. PLAIN is the base style and cannot be hidden.
 */
export const TOGGLEABLE_CLASSES = [
  "RED",
  "ORANGE",
  "ODD_CYCLE",
  "LONG_FLAG",
  "NON_ATTACKING_IN",
  "UNATTACKED_UNDEC",
] as const;

export type HighlightClass = (typeof TOGGLEABLE_CLASSES)[number];

// palette lookup keys; LONG_FLAG edges use the base stroke, flagged by dashes
const EDGE_COLOR_KEY: Record<EdgeDisplay, string> = {
  RED: "RED",
  ORANGE: "ORANGE",
  ODD_CYCLE: "ODD_CYCLE",
  LONG_FLAG: "PLAIN",
  PLAIN: "PLAIN",
};

const ARGUMENT_COLOR_KEY: Record<ArgumentDisplay, string> = {
  ORANGE_ATTACKER: "ORANGE",
  ODD_CYCLE_MEMBER: "ODD_CYCLE",
  NON_ATTACKING_IN: "NON_ATTACKING_IN",
  UNATTACKED_UNDEC: "UNATTACKED_UNDEC",
  PLAIN: "PLAIN",
};

const FALLBACK_COLOR = "#444444";

export interface SceneConfig {
  layerGap: number;
  rowGap: number;
  margin: number;
  nodeRadius: number;
  laneOffset: number;
  laneStep: number;
}

export const DEFAULT_SCENE_CONFIG: SceneConfig = {
  layerGap: 260,
  rowGap: 56,
  margin: 48,
  nodeRadius: 12,
  laneOffset: 70,
  laneStep: 16,
};

export type EdgeShape =
  | { kind: "segment"; x1: number; y1: number; x2: number; y2: number }
  | { kind: "arc"; x: number; y1: number; y2: number; bulge: number }
  | { kind: "loop"; x: number; y: number; radius: number }
  | { kind: "lane"; x1: number; y1: number; laneX: number; x2: number; y2: number };

export interface SceneNode {
  id: string;
  layer: "in" | "out" | "undec";
  x: number;
  y: number;
  radius: number;
  display: ArgumentDisplay;
  fill: string;
}

export interface SceneEdge {
  source: string;
  target: string;
  edgeClass: DocumentEdge["edge_class"];
  display: EdgeDisplay;
  stroke: string;
  strokeWidth: number;
  dashed: boolean;
  shape: EdgeShape;
}

export interface Scene {
  width: number;
  height: number;
  nodes: SceneNode[];
  edges: SceneEdge[];
  /** Copied from the document report; the client never recounts crossings. */
  objective: CrossingReport;
}

export function assertSupportedDocument(doc: DrawingDocument): void {
  if (doc.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new Error(
      `unsupported document schema version ${doc.schema_version}; ` +
        `this client understands version ${SUPPORTED_SCHEMA_VERSION}`,
    );
  }
}

/**
 * Resolve an edge's drawn class under the current visibility set.
 *
 * A hidden red witness falls back to its base class (it is still an attack
 * from the accepted layer), which in turn hides with the ORANGE toggle.
 * Every other hidden class drops straight to PLAIN.
 */
export function effectiveEdgeDisplay(
  display: EdgeDisplay,
  visible: ReadonlySet<string>,
): EdgeDisplay {
  if (display === "RED" && !visible.has("RED")) {
    display = "ORANGE";
  }
  if (display === "PLAIN" || visible.has(display)) {
    return display;
  }
  return "PLAIN";
}

/**
 * Resolve an argument's drawn class under the current visibility set.
 *
 * Hiding the odd-cycle highlight re-evaluates the member against the next
 * rule in the assignment order: an undecided argument with no incoming arc
 * from its own layer shows as UNATTACKED_UNDEC, anything else as PLAIN.
 */
export function effectiveArgumentDisplay(
  display: ArgumentDisplay,
  hasIncomingUndecArc: boolean,
  visible: ReadonlySet<string>,
): ArgumentDisplay {
  if (display === "ODD_CYCLE_MEMBER" && !visible.has("ODD_CYCLE")) {
    display = hasIncomingUndecArc ? "PLAIN" : "UNATTACKED_UNDEC";
  }
  switch (display) {
    case "PLAIN":
      return "PLAIN";
    case "ORANGE_ATTACKER":
      return visible.has("ORANGE") ? display : "PLAIN";
    case "ODD_CYCLE_MEMBER":
      return display;
    default:
      return visible.has(display) ? display : "PLAIN";
  }
}

interface Placement {
  layer: "in" | "out" | "undec";
  col: number;
  row: number;
}

export function buildScene(
  doc: DrawingDocument,
  visible: ReadonlySet<string>,
  config: SceneConfig = DEFAULT_SCENE_CONFIG,
): Scene {
  assertSupportedDocument(doc);

  const columns: Array<[Placement["layer"], string[]]> = [
    ["in", doc.layers.in],
    ["out", doc.layers.out],
    ["undec", doc.layers.undec],
  ];
  const placed = new Map<string, Placement>();
  columns.forEach(([layer, ids], col) => {
    ids.forEach((id, row) => placed.set(id, { layer, col, row }));
  });

  const xOf = (col: number) => config.margin + col * config.layerGap;
  const yOf = (row: number) => config.margin + row * config.rowGap;
  const color = (key: string): string => doc.palette[key] ?? FALLBACK_COLOR;

  const incomingUndecArc = new Set<string>();
  for (const edge of doc.edges) {
    if (edge.edge_class === "E4" && edge.source !== edge.target) {
      incomingUndecArc.add(edge.target);
    }
  }

  const nodes: SceneNode[] = [];
  for (const [layer, ids] of columns) {
    for (const id of ids) {
      const spot = placed.get(id);
      if (spot === undefined) continue;
      const assigned = doc.argument_display[id] ?? "PLAIN";
      const display = effectiveArgumentDisplay(
        assigned,
        incomingUndecArc.has(id),
        visible,
      );
      nodes.push({
        id,
        layer,
        x: xOf(spot.col),
        y: yOf(spot.row),
        radius: config.nodeRadius,
        display,
        fill: color(ARGUMENT_COLOR_KEY[display]),
      });
    }
  }

  // bypass lanes sit right of the undecided column, one vertical track each
  const laneBase = config.margin + 2 * config.layerGap + config.laneOffset;
  let laneCount = 0;

  const edges: SceneEdge[] = doc.edges.map((edge) => {
    const from = placed.get(edge.source);
    const to = placed.get(edge.target);
    if (from === undefined || to === undefined) {
      throw new Error(
        `edge ${edge.source}->${edge.target} references an argument missing from the layers`,
      );
    }
    const display = effectiveEdgeDisplay(edge.display, visible);

    let shape: EdgeShape;
    if (edge.source === edge.target) {
      shape = {
        kind: "loop",
        x: xOf(from.col),
        y: yOf(from.row),
        radius: config.nodeRadius * 1.4,
      };
    } else if (from.col === to.col) {
      const y1 = yOf(from.row);
      const y2 = yOf(to.row);
      shape = {
        kind: "arc",
        x: xOf(from.col),
        y1,
        y2,
        bulge: Math.max(config.rowGap * 0.45, Math.abs(y2 - y1) * 0.3),
      };
    } else if (Math.abs(from.col - to.col) === 1) {
      shape = {
        kind: "segment",
        x1: xOf(from.col),
        y1: yOf(from.row),
        x2: xOf(to.col),
        y2: yOf(to.row),
      };
    } else {
      shape = {
        kind: "lane",
        x1: xOf(from.col),
        y1: yOf(from.row),
        laneX: laneBase + laneCount++ * config.laneStep,
        x2: xOf(to.col),
        y2: yOf(to.row),
      };
    }

    return {
      source: edge.source,
      target: edge.target,
      edgeClass: edge.edge_class,
      display,
      stroke: color(EDGE_COLOR_KEY[display]),
      strokeWidth: display === "RED" ? 2.5 : 1.5,
      dashed: display === "LONG_FLAG",
      shape,
    };
  });

  const deepestRow = Math.max(
    doc.layers.in.length,
    doc.layers.out.length,
    doc.layers.undec.length,
    1,
  );
  const width =
    laneBase + (laneCount > 0 ? (laneCount - 1) * config.laneStep : 0) + config.margin;
  const height = 2 * config.margin + (deepestRow - 1) * config.rowGap;

  return {
    width,
    height,
    nodes,
    edges,
    objective: { ...doc.report },
  };
}

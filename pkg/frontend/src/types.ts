/** Types mirroring the layout service's JSON contract (document schema 1). */

export type EdgeClass = "E1" | "E2" | "E3" | "E4" | "LONG" | "ININ";

export type EdgeDisplay = "RED" | "ORANGE" | "ODD_CYCLE" | "LONG_FLAG" | "PLAIN";

export type ArgumentDisplay =
  | "ORANGE_ATTACKER"
  | "ODD_CYCLE_MEMBER"
  | "NON_ATTACKING_IN"
  | "UNATTACKED_UNDEC"
  | "PLAIN";

export interface DocumentEdge {
  source: string;
  target: string;
  edge_class: EdgeClass;
  display: EdgeDisplay;
}

export interface CrossingReport {
  c1: number;
  c2: number;
  c3: number;
  c4: number;
  weighted_objective: number;
  rec_violations: number;
}

export interface DrawingDocument {
  schema_version: number;
  instance: { name: string; argument_count: number; attack_count: number };
  layers: { in: string[]; out: string[]; undec: string[] };
  red_edges: Record<string, string>;
  edges: DocumentEdge[];
  argument_display: Record<string, ArgumentDisplay>;
  report: CrossingReport;
  palette: Record<string, string>;
}

export interface SolveInfo {
  mode: string;
  rec: boolean;
  strategy: string;
  seed: number | null;
  heuristic?: { objective: number };
  exact?: { status: string; objective: number };
  ratio?: number;
  absolute_crossings?: number;
}

/** Body of a successful POST /api/layout response. */
export interface LayoutPayload {
  document: DrawingDocument;
  solve: SolveInfo;
  timing?: Record<string, number>;
}

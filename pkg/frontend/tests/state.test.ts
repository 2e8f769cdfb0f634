import { describe, expect, it } from "vitest";

import mixedJson from "../fixtures/mixed-document.json";
import recOffJson from "../fixtures/penalty-rec-off.json";
import recOnJson from "../fixtures/penalty-rec-on.json";
import { TOGGLEABLE_CLASSES } from "../src/scene.js";
import {
  applyError,
  applyPayload,
  displayedObjective,
  incidentEdges,
  initialViewState,
  objectiveSummary,
  setHovered,
  setOptions,
  toggleClass,
} from "../src/state.js";
import type { DrawingDocument, LayoutPayload } from "../src/types.js";

const mixed = mixedJson as unknown as DrawingDocument;
const recOn = recOnJson as unknown as LayoutPayload;
const recOff = recOffJson as unknown as LayoutPayload;

describe("view state", () => {
  it("starts with every highlight visible and nothing loaded", () => {
    const state = initialViewState();
    expect(state.document).toBeNull();
    expect(state.error).toBeNull();
    expect(state.visible).toEqual(new Set(TOGGLEABLE_CLASSES));
    expect(displayedObjective(state)).toBeNull();
  });

  it("applies a payload and clears any prior error", () => {
    const failed = applyError(initialViewState(), "boom");
    const state = applyPayload(failed, recOn);
    expect(state.error).toBeNull();
    expect(state.document).toBe(recOn.document);
    expect(state.solve).toBe(recOn.solve);
    expect(displayedObjective(state)).toBe(
      recOn.document.report.weighted_objective,
    );
  });

  it("shows a strictly smaller objective after a rerun without the red constraint", () => {
    const on = applyPayload(initialViewState(), recOn);
    const off = applyPayload(on, recOff);
    const before = displayedObjective(on);
    const after = displayedObjective(off);
    expect(before).not.toBeNull();
    expect(after).not.toBeNull();
    if (before === null || after === null) return;
    expect(after).toBeLessThan(before);
    // the readout mirrors the solver, it never recounts
    expect(before).toBe(recOn.solve.exact?.objective);
    expect(after).toBe(recOff.solve.exact?.objective);
  });

  it("summarizes whatever the solve section reports", () => {
    const exactOnly = objectiveSummary(applyPayload(initialViewState(), recOn));
    expect(exactOnly).toContain("weighted crossings: 8");
    expect(exactOnly).toContain("exact objective: 8 (OPTIMAL)");
    expect(exactOnly.join("\n")).not.toContain("ratio");

    const both: LayoutPayload = {
      document: recOn.document,
      solve: {
        mode: "both",
        rec: true,
        strategy: "A",
        seed: 0,
        heuristic: { objective: 9 },
        exact: { status: "OPTIMAL", objective: 8 },
        ratio: 1.125,
      },
    };
    const lines = objectiveSummary(applyPayload(initialViewState(), both));
    expect(lines).toContain("heuristic objective: 9");
    expect(lines).toContain("exact objective: 8 (OPTIMAL)");
    expect(lines).toContain("heuristic/exact ratio: 1.1250");

    const zeroWeight: LayoutPayload = {
      document: recOn.document,
      solve: {
        mode: "both",
        rec: true,
        strategy: "A",
        seed: 0,
        heuristic: { objective: 0 },
        exact: { status: "OPTIMAL", objective: 0 },
        absolute_crossings: 0,
      },
    };
    const flat = objectiveSummary(applyPayload(initialViewState(), zeroWeight));
    expect(flat).toContain("absolute crossings: 0");
  });

  it("toggles a class off and back on without touching the document", () => {
    const loaded = applyPayload(initialViewState(), recOn);
    for (const cls of TOGGLEABLE_CLASSES) {
      const off = toggleClass(loaded, cls);
      expect(off.visible.has(cls)).toBe(false);
      expect(loaded.visible.has(cls)).toBe(true);
      const back = toggleClass(off, cls);
      expect(back.visible).toEqual(loaded.visible);
      expect(back.document).toBe(loaded.document);
    }
  });

  it("rejects toggles for classes that do not exist", () => {
    expect(() => toggleClass(initialViewState(), "SPARKLES")).toThrow(
      /unknown highlight class/,
    );
    expect(() => toggleClass(initialViewState(), "PLAIN")).toThrow(
      /unknown highlight class/,
    );
  });

  it("keeps the last document on screen when a request fails", () => {
    const loaded = applyPayload(initialViewState(), recOn);
    const failed = applyError(loaded, "EXACT_TOO_LARGE: size 200 exceeds cap 150");
    expect(failed.document).toBe(loaded.document);
    expect(failed.error).toMatch(/EXACT_TOO_LARGE/);
    expect(displayedObjective(failed)).toBe(
      recOn.document.report.weighted_objective,
    );
  });

  it("rejects payloads with an unsupported document schema", () => {
    const future: LayoutPayload = {
      document: { ...recOn.document, schema_version: 3 },
      solve: recOn.solve,
    };
    expect(() => applyPayload(initialViewState(), future)).toThrow(
      /schema version 3/,
    );
  });

  it("finds exactly the edges incident to a hovered argument", () => {
    const edges = incidentEdges(mixed, "u1");
    expect(edges.length).toBe(4);
    for (const edge of edges) {
      expect(edge.source === "u1" || edge.target === "u1").toBe(true);
    }
    const pairs = edges.map((e) => `${e.source}->${e.target}`).sort();
    expect(pairs).toEqual(["o2->u1", "u1->i1", "u1->u2", "u3->u1"]);
    expect(incidentEdges(mixed, "i3")).toEqual([]);
  });

  it("tracks hover without altering anything else", () => {
    const loaded = applyPayload(initialViewState(), recOn);
    const hovered = setHovered(loaded, "u");
    expect(hovered.hovered).toBe("u");
    expect(hovered.document).toBe(loaded.document);
    const cleared = setHovered(hovered, null);
    expect(cleared.hovered).toBeNull();
  });

  it("never mutates the loaded document through any update", () => {
    const snapshot = JSON.stringify(recOn.document);
    let state = applyPayload(initialViewState(), recOn);
    state = toggleClass(state, "RED");
    state = setHovered(state, "v");
    state = setOptions(state, { mode: "both", rec: false, seed: 7 });
    state = applyError(state, "transient");
    state = toggleClass(state, "RED");
    expect(JSON.stringify(recOn.document)).toBe(snapshot);
    expect(state.document).toBe(recOn.document);
  });

  it("merges solver option patches", () => {
    const state = setOptions(initialViewState(), { mode: "exact", seed: null });
    expect(state.options.mode).toBe("exact");
    expect(state.options.seed).toBeNull();
    expect(state.options.rec).toBe(true);
    expect(state.options.strategy).toBe("A");
  });
});

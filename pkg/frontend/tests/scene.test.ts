import { describe, expect, it } from "vitest";

import mixedJson from "../fixtures/mixed-document.json";
import {
  DEFAULT_SCENE_CONFIG,
  TOGGLEABLE_CLASSES,
  assertSupportedDocument,
  buildScene,
  effectiveArgumentDisplay,
  effectiveEdgeDisplay,
} from "../src/scene.js";
import type { DrawingDocument } from "../src/types.js";

const mixed = mixedJson as unknown as DrawingDocument;

function visibleExcept(...hidden: string[]): Set<string> {
  const visible = new Set<string>(TOGGLEABLE_CLASSES);
  for (const cls of hidden) {
    visible.delete(cls);
  }
  return visible;
}

const ALL = visibleExcept();

/** A document no server would produce: one cycle member lacks an incoming
 * arc from its own layer, so hiding the cycle must surface the
 * unattacked-undecided style for it. */
const synthetic: DrawingDocument = {
  schema_version: 1,
  instance: { name: "synthetic", argument_count: 3, attack_count: 2 },
  layers: { in: [], out: [], undec: ["z1", "z2", "z3"] },
  red_edges: {},
  edges: [
    { source: "z1", target: "z2", edge_class: "E4", display: "ODD_CYCLE" },
    { source: "z2", target: "z3", edge_class: "E4", display: "ODD_CYCLE" },
  ],
  argument_display: {
    z1: "ODD_CYCLE_MEMBER",
    z2: "ODD_CYCLE_MEMBER",
    z3: "PLAIN",
  },
  report: { c1: 0, c2: 0, c3: 0, c4: 0, weighted_objective: 0, rec_violations: 0 },
  palette: mixed.palette,
};

describe("buildScene", () => {
  it("draws exactly the documented argument and attack counts", () => {
    const scene = buildScene(mixed, ALL);
    expect(scene.nodes.length).toBe(mixed.instance.argument_count);
    expect(scene.edges.length).toBe(mixed.instance.attack_count);
  });

  it("exercises every display class in the fixture", () => {
    const scene = buildScene(mixed, ALL);
    const edgeDisplays = new Set(scene.edges.map((edge) => edge.display));
    expect(edgeDisplays).toEqual(
      new Set(["RED", "ORANGE", "ODD_CYCLE", "LONG_FLAG", "PLAIN"]),
    );
    const nodeDisplays = new Set(scene.nodes.map((node) => node.display));
    expect(nodeDisplays).toEqual(
      new Set([
        "ORANGE_ATTACKER",
        "ODD_CYCLE_MEMBER",
        "NON_ATTACKING_IN",
        "UNATTACKED_UNDEC",
        "PLAIN",
      ]),
    );
  });

  it("stacks each layer in its own column in declaration order", () => {
    const scene = buildScene(mixed, ALL);
    const cfg = DEFAULT_SCENE_CONFIG;
    const byId = new Map(scene.nodes.map((node) => [node.id, node]));
    const expectColumn = (ids: string[], col: number) => {
      ids.forEach((id, row) => {
        const node = byId.get(id);
        expect(node).toBeDefined();
        expect(node?.x).toBe(cfg.margin + col * cfg.layerGap);
        expect(node?.y).toBe(cfg.margin + row * cfg.rowGap);
      });
    };
    expectColumn(mixed.layers.in, 0);
    expectColumn(mixed.layers.out, 1);
    expectColumn(mixed.layers.undec, 2);
  });

  it("copies the crossing report instead of recounting", () => {
    const scene = buildScene(mixed, ALL);
    expect(scene.objective).toEqual(mixed.report);
    expect(scene.objective).not.toBe(mixed.report);
  });

  it("builds deep-equal scenes from identical inputs", () => {
    expect(buildScene(mixed, ALL)).toEqual(buildScene(mixed, ALL));
  });

  it("round-trips every class toggle to an identical scene", () => {
    for (const doc of [mixed, synthetic]) {
      const before = buildScene(doc, ALL);
      for (const cls of TOGGLEABLE_CLASSES) {
        const off = visibleExcept(cls);
        const on = new Set(off);
        on.add(cls);
        expect(buildScene(doc, on)).toEqual(before);
      }
    }
  });

  it("keeps geometry fixed under any visibility change", () => {
    const reference = buildScene(mixed, ALL);
    const variants = [
      visibleExcept("RED"),
      visibleExcept("ORANGE"),
      visibleExcept("ODD_CYCLE", "LONG_FLAG"),
      visibleExcept(...TOGGLEABLE_CLASSES),
    ];
    for (const visible of variants) {
      const scene = buildScene(mixed, visible);
      expect(scene.nodes.map((n) => [n.id, n.x, n.y])).toEqual(
        reference.nodes.map((n) => [n.id, n.x, n.y]),
      );
      expect(scene.edges.map((e) => e.shape)).toEqual(
        reference.edges.map((e) => e.shape),
      );
      expect(scene.width).toBe(reference.width);
      expect(scene.height).toBe(reference.height);
    }
  });

  it("restyles hidden red witnesses as orange in place", () => {
    const on = buildScene(mixed, ALL);
    const off = buildScene(mixed, visibleExcept("RED"));
    expect(off.edges.length).toBe(on.edges.length);
    let witnessed = 0;
    on.edges.forEach((was, i) => {
      const now = off.edges[i];
      expect(now).toBeDefined();
      if (now === undefined) return;
      expect(now.shape).toEqual(was.shape);
      if (was.display === "RED") {
        witnessed += 1;
        expect(now.display).toBe("ORANGE");
        expect(now.stroke).toBe(mixed.palette["ORANGE"]);
        expect(now.strokeWidth).toBe(1.5);
      } else {
        expect(now.display).toBe(was.display);
        expect(now.stroke).toBe(was.stroke);
      }
    });
    expect(witnessed).toBeGreaterThan(0);
  });

  it("drops witnesses to the base style when orange is hidden too", () => {
    const scene = buildScene(mixed, visibleExcept("RED", "ORANGE"));
    for (const edge of scene.edges) {
      if (edge.edgeClass === "E1") {
        expect(edge.display).toBe("PLAIN");
        expect(edge.stroke).toBe(mixed.palette["PLAIN"]);
      }
    }
    const attackers = scene.nodes.filter((n) => n.id === "i1" || n.id === "i2");
    for (const node of attackers) {
      expect(node.display).toBe("PLAIN");
    }
  });

  it("reverts cycle members along the assignment order when hidden", () => {
    const off = buildScene(mixed, visibleExcept("ODD_CYCLE"));
    for (const edge of off.edges) {
      expect(edge.display).not.toBe("ODD_CYCLE");
    }
    // every member in this fixture is attacked from inside its layer
    for (const id of ["u1", "u2", "u3"]) {
      const node = off.nodes.find((n) => n.id === id);
      expect(node?.display).toBe("PLAIN");
      expect(node?.fill).toBe(mixed.palette["PLAIN"]);
    }
    const untouched = off.nodes.find((n) => n.id === "u4");
    expect(untouched?.display).toBe("UNATTACKED_UNDEC");
  });

  it("surfaces the unattacked style for members without incoming arcs", () => {
    const off = buildScene(synthetic, visibleExcept("ODD_CYCLE"));
    expect(off.nodes.find((n) => n.id === "z1")?.display).toBe("UNATTACKED_UNDEC");
    expect(off.nodes.find((n) => n.id === "z2")?.display).toBe("PLAIN");

    const bothOff = buildScene(
      synthetic,
      visibleExcept("ODD_CYCLE", "UNATTACKED_UNDEC"),
    );
    expect(bothOff.nodes.find((n) => n.id === "z1")?.display).toBe("PLAIN");
  });

  it("flags long edges with dashes and hides the flag on toggle", () => {
    const on = buildScene(mixed, ALL);
    const flagged = on.edges.filter((e) => e.edgeClass === "LONG");
    expect(flagged.length).toBe(2);
    for (const edge of flagged) {
      expect(edge.display).toBe("LONG_FLAG");
      expect(edge.dashed).toBe(true);
    }
    const off = buildScene(mixed, visibleExcept("LONG_FLAG"));
    for (const edge of off.edges.filter((e) => e.edgeClass === "LONG")) {
      expect(edge.display).toBe("PLAIN");
      expect(edge.dashed).toBe(false);
    }
  });

  it("shapes same-layer arcs, self-loops, and skip-layer lanes", () => {
    const scene = buildScene(mixed, ALL);
    const cfg = DEFAULT_SCENE_CONFIG;
    const shapeOf = (source: string, target: string) =>
      scene.edges.find((e) => e.source === source && e.target === target)?.shape;

    const loop = shapeOf("o1", "o1");
    expect(loop?.kind).toBe("loop");

    const arc = shapeOf("o1", "o2");
    expect(arc?.kind).toBe("arc");
    if (arc?.kind === "arc") {
      expect(arc.x).toBe(cfg.margin + cfg.layerGap);
    }

    const lanes = [shapeOf("u1", "i1"), shapeOf("u2", "i2")];
    const laneXs: number[] = [];
    for (const lane of lanes) {
      expect(lane?.kind).toBe("lane");
      if (lane?.kind === "lane") {
        expect(lane.laneX).toBeGreaterThan(cfg.margin + 2 * cfg.layerGap);
        laneXs.push(lane.laneX);
      }
    }
    expect(new Set(laneXs).size).toBe(lanes.length);

    const straight = shapeOf("i1", "o1");
    expect(straight?.kind).toBe("segment");
  });

  it("rejects documents from a different schema version", () => {
    const future = { ...mixed, schema_version: 2 };
    expect(() => assertSupportedDocument(future)).toThrow(/schema version 2/);
    expect(() => buildScene(future, ALL)).toThrow(/schema version 2/);
  });
});

describe("display fallbacks", () => {
  it("resolves edge styles against the visibility set", () => {
    expect(effectiveEdgeDisplay("RED", ALL)).toBe("RED");
    expect(effectiveEdgeDisplay("RED", visibleExcept("RED"))).toBe("ORANGE");
    expect(effectiveEdgeDisplay("RED", visibleExcept("RED", "ORANGE"))).toBe(
      "PLAIN",
    );
    expect(effectiveEdgeDisplay("RED", visibleExcept("ORANGE"))).toBe("RED");
    expect(effectiveEdgeDisplay("ORANGE", visibleExcept("ORANGE"))).toBe("PLAIN");
    expect(effectiveEdgeDisplay("ODD_CYCLE", visibleExcept("ODD_CYCLE"))).toBe(
      "PLAIN",
    );
    expect(effectiveEdgeDisplay("LONG_FLAG", visibleExcept("LONG_FLAG"))).toBe(
      "PLAIN",
    );
    expect(effectiveEdgeDisplay("PLAIN", visibleExcept(...TOGGLEABLE_CLASSES))).toBe(
      "PLAIN",
    );
  });

  it("resolves argument styles against the visibility set", () => {
    expect(effectiveArgumentDisplay("ORANGE_ATTACKER", true, ALL)).toBe(
      "ORANGE_ATTACKER",
    );
    expect(
      effectiveArgumentDisplay("ORANGE_ATTACKER", true, visibleExcept("ORANGE")),
    ).toBe("PLAIN");
    expect(
      effectiveArgumentDisplay("ODD_CYCLE_MEMBER", true, visibleExcept("ODD_CYCLE")),
    ).toBe("PLAIN");
    expect(
      effectiveArgumentDisplay("ODD_CYCLE_MEMBER", false, visibleExcept("ODD_CYCLE")),
    ).toBe("UNATTACKED_UNDEC");
    expect(
      effectiveArgumentDisplay(
        "ODD_CYCLE_MEMBER",
        false,
        visibleExcept("ODD_CYCLE", "UNATTACKED_UNDEC"),
      ),
    ).toBe("PLAIN");
    expect(
      effectiveArgumentDisplay(
        "NON_ATTACKING_IN",
        false,
        visibleExcept("NON_ATTACKING_IN"),
      ),
    ).toBe("PLAIN");
    expect(
      effectiveArgumentDisplay(
        "UNATTACKED_UNDEC",
        false,
        visibleExcept("UNATTACKED_UNDEC"),
      ),
    ).toBe("PLAIN");
  });
});

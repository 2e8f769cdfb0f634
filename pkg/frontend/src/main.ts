/** Browser bootstrap: wires the pure scene/state modules to the DOM.
 *
 * Everything testable lives in scene.ts, state.ts, and api.ts; this file
 * only translates scenes into SVG elements and DOM events into state
 * updates.
 */

import { LayoutClient } from "./api.js";
import type { InstanceSummary } from "./api.js";
import { buildScene, TOGGLEABLE_CLASSES } from "./scene.js";
import type { Scene, SceneEdge } from "./scene.js";
import {
  applyError,
  applyPayload,
  incidentEdges,
  initialViewState,
  objectiveSummary,
  setHovered,
  setOptions,
  setTransform,
  toggleClass,
} from "./state.js";
import type { ViewState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

let state: ViewState = initialViewState();
let currentAf: string | null = null;
let currentExtension: string[] | null = null;

const client = new LayoutClient("", (url, init) =>
  fetch(url, init).then((response) => ({
    status: response.status,
    json: () => response.json(),
  })),
);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  parent: Element,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) {
    node.textContent = text;
  }
  parent.appendChild(node);
  return node;
}

function edgePath(edge: SceneEdge): string {
  const s = edge.shape;
  switch (s.kind) {
    case "segment":
      return `M ${s.x1} ${s.y1} L ${s.x2} ${s.y2}`;
    case "arc": {
      const midY = (s.y1 + s.y2) / 2;
      return `M ${s.x} ${s.y1} Q ${s.x + s.bulge} ${midY} ${s.x} ${s.y2}`;
    }
    case "loop": {
      const r = s.radius;
      return (
        `M ${s.x + r * 0.4} ${s.y - r * 0.4} ` +
        `a ${r} ${r} 0 1 1 ${r * 0.1} ${r * 0.8}`
      );
    }
    case "lane":
      return (
        `M ${s.x1} ${s.y1} L ${s.laneX} ${s.y1} ` +
        `L ${s.laneX} ${s.y2} L ${s.x2} ${s.y2}`
      );
  }
}

function renderScene(svg: SVGSVGElement, scene: Scene): void {
  while (svg.firstChild !== null) {
    svg.removeChild(svg.firstChild);
  }
  svg.setAttribute("viewBox", `0 0 ${scene.width} ${scene.height}`);

  const root = document.createElementNS(SVG_NS, "g");
  const { x, y, scale } = state.transform;
  root.setAttribute("transform", `translate(${x} ${y}) scale(${scale})`);
  svg.appendChild(root);

  const highlighted = new Set<string>();
  if (state.hovered !== null && state.document !== null) {
    for (const edge of incidentEdges(state.document, state.hovered)) {
      highlighted.add(`${edge.source}->${edge.target}`);
    }
  }

  for (const edge of scene.edges) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", edgePath(edge));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", edge.stroke);
    const hot = highlighted.has(`${edge.source}->${edge.target}`);
    path.setAttribute("stroke-width", String(hot ? edge.strokeWidth + 1.5 : edge.strokeWidth));
    if (edge.dashed) {
      path.setAttribute("stroke-dasharray", "6 4");
    }
    if (state.hovered !== null && !hot) {
      path.setAttribute("opacity", "0.25");
    }
    root.appendChild(path);
  }

  for (const node of scene.nodes) {
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", String(node.radius));
    circle.setAttribute("fill", node.fill);
    circle.setAttribute("data-id", node.id);
    circle.addEventListener("mouseenter", () => {
      state = setHovered(state, node.id);
      redraw();
    });
    circle.addEventListener("mouseleave", () => {
      state = setHovered(state, null);
      redraw();
    });
    root.appendChild(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(node.x));
    label.setAttribute("y", String(node.y - node.radius - 4));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("font-size", "11");
    label.textContent = node.id;
    root.appendChild(label);
  }
}

function redraw(): void {
  const svg = document.querySelector<SVGSVGElement>("#canvas");
  const banner = document.querySelector<HTMLElement>("#banner");
  const readout = document.querySelector<HTMLElement>("#readout");
  if (svg === null || banner === null || readout === null) {
    return;
  }

  banner.textContent = state.error ?? "";
  banner.style.display = state.error === null ? "none" : "block";

  readout.textContent = objectiveSummary(state).join("\n");

  if (state.document === null) {
    return;
  }
  renderScene(svg, buildScene(state.document, state.visible));
}

async function runSolve(): Promise<void> {
  if (currentAf === null) {
    state = applyError(state, "load an instance first");
    redraw();
    return;
  }
  const body = {
    af: currentAf,
    format: "apx" as const,
    mode: state.options.mode,
    rec: state.options.rec,
    strategy: state.options.strategy,
    ...(state.options.seed === null ? {} : { seed: state.options.seed }),
    ...(currentExtension === null
      ? { semantics: "grounded" as const }
      : { extension: currentExtension }),
  };
  const result = await client.requestLayout(body);
  if (result.kind === "stale") {
    return;
  }
  if (result.kind === "error") {
    state = applyError(state, `${result.code}: ${result.message}`);
  } else {
    state = applyPayload(state, result.payload);
  }
  redraw();
}

function buildControls(panel: HTMLElement): void {
  const toggles = el("fieldset", panel);
  el("legend", toggles, "highlights");
  for (const cls of TOGGLEABLE_CLASSES) {
    const label = el("label", toggles, cls.toLowerCase().replace(/_/g, " "));
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = true;
    box.addEventListener("change", () => {
      state = toggleClass(state, cls);
      redraw();
    });
    label.prepend(box);
  }

  const options = el("fieldset", panel);
  el("legend", options, "solver");

  const modeLabel = el("label", options, "mode ");
  const mode = document.createElement("select");
  for (const value of ["heuristic", "exact", "both"]) {
    const opt = document.createElement("option");
    opt.value = value;
    opt.textContent = value;
    mode.appendChild(opt);
  }
  mode.addEventListener("change", () => {
    state = setOptions(state, {
      mode: mode.value as "heuristic" | "exact" | "both",
    });
  });
  modeLabel.appendChild(mode);

  const recLabel = el("label", options, " red constraint");
  const rec = document.createElement("input");
  rec.type = "checkbox";
  rec.checked = true;
  rec.addEventListener("change", () => {
    state = setOptions(state, { rec: rec.checked });
  });
  recLabel.prepend(rec);

  const strategyLabel = el("label", options, " strategy ");
  const strategy = document.createElement("select");
  for (const value of ["A", "B"]) {
    const opt = document.createElement("option");
    opt.value = value;
    opt.textContent = value;
    strategy.appendChild(opt);
  }
  strategy.addEventListener("change", () => {
    state = setOptions(state, { strategy: strategy.value as "A" | "B" });
  });
  strategyLabel.appendChild(strategy);

  const seedLabel = el("label", options, " seed ");
  const seed = document.createElement("input");
  seed.type = "number";
  seed.value = "0";
  seed.addEventListener("change", () => {
    const parsed = Number.parseInt(seed.value, 10);
    state = setOptions(state, { seed: Number.isNaN(parsed) ? null : parsed });
  });
  seedLabel.appendChild(seed);

  const run = el("button", options, "lay out");
  run.addEventListener("click", () => {
    void runSolve();
  });
}

async function populateInstances(select: HTMLSelectElement): Promise<void> {
  let instances: InstanceSummary[];
  try {
    instances = await client.listInstances();
  } catch (err) {
    state = applyError(state, String(err));
    redraw();
    return;
  }
  for (const summary of instances) {
    const opt = document.createElement("option");
    opt.value = summary.id;
    opt.textContent = `${summary.id} (${summary.arguments} args, ${summary.attacks} attacks)`;
    select.appendChild(opt);
  }
  select.addEventListener("change", () => {
    void (async () => {
      try {
        const detail = await client.fetchInstance(select.value);
        currentAf = detail.af;
        currentExtension = detail.extension;
        await runSolve();
      } catch (err) {
        state = applyError(state, String(err));
        redraw();
      }
    })();
  });
}

function wirePanZoom(svg: SVGSVGElement): void {
  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  svg.addEventListener("mousedown", (event) => {
    dragging = true;
    lastX = event.clientX;
    lastY = event.clientY;
  });
  window.addEventListener("mouseup", () => {
    dragging = false;
  });
  window.addEventListener("mousemove", (event) => {
    if (!dragging) {
      return;
    }
    const t = state.transform;
    state = setTransform(state, {
      ...t,
      x: t.x + (event.clientX - lastX),
      y: t.y + (event.clientY - lastY),
    });
    lastX = event.clientX;
    lastY = event.clientY;
    redraw();
  });
  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const t = state.transform;
    const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
    state = setTransform(state, {
      ...t,
      scale: Math.min(8, Math.max(0.125, t.scale * factor)),
    });
    redraw();
  });
}

function boot(): void {
  const app = document.querySelector<HTMLElement>("#app");
  if (app === null) {
    return;
  }

  const panel = el("div", app);
  panel.id = "panel";
  const pickerLabel = el("label", panel, "instance ");
  const picker = document.createElement("select");
  pickerLabel.appendChild(picker);
  buildControls(panel);
  const readout = el("pre", panel);
  readout.id = "readout";

  const banner = el("div", app);
  banner.id = "banner";
  banner.style.display = "none";

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.id = "canvas";
  app.appendChild(svg);

  wirePanZoom(svg);
  void populateInstances(picker);
  redraw();
}

boot();

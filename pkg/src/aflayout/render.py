"""Geometry and export: positioned scenes, a JSON document, and SVG.

The document is the exchange format between the solvers and any viewer:
three ordered layers, every attack with its structural class (E1, E2, E3,
E4, LONG, ININ) and display class, the red-edge witness map, the crossing
report, and the palette.  The embedded report is redundant on purpose: a
consumer can rebuild the partition from the edge classes and recount, and
validation does exactly that.

Geometry conventions: layers sit on vertical lines x = 0, G, 2G (G the
layer gap, default 300); the k-th argument of a layer sits at y = k * 60.
Edges between adjacent layers are straight segments, edges within a layer
are semicircular arcs bulging right of the layer with radius half the
vertical endpoint distance, self-attacks are small loops, and IN-UNDEC
edges are dashed orthogonal polylines routed right of all three layers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .annotate import AnnotationSet
from .layout import (
    CrossingReport,
    EdgePartition,
    LayeredDrawing,
    count_crossings,
)

SCHEMA_VERSION = 1

PALETTE: dict[str, str] = {
    "ORANGE": "#E69F00",
    "RED": "#D62728",
    "ODD_CYCLE": "#8FD694",
    "NON_ATTACKING_IN": "#86CEEB",
    "UNATTACKED_UNDEC": "#9467BD",
    "PLAIN": "#444444",
}

# display class -> palette key
_EDGE_COLOR_KEY = {
    "RED": "RED",
    "ORANGE": "ORANGE",
    "ODD_CYCLE": "ODD_CYCLE",
    "LONG_FLAG": "PLAIN",
    "PLAIN": "PLAIN",
}
_ARG_COLOR_KEY = {
    "ORANGE_ATTACKER": "ORANGE",
    "ODD_CYCLE_MEMBER": "ODD_CYCLE",
    "NON_ATTACKING_IN": "NON_ATTACKING_IN",
    "UNATTACKED_UNDEC": "UNATTACKED_UNDEC",
    "PLAIN": "PLAIN",
}

_EDGE_CLASSES = ("E1", "E2", "E3", "E4", "LONG", "ININ")


@dataclass(frozen=True)
class RenderConfig:
    layer_gap: int = 300
    row_gap: int = 60
    node_radius: int = 13
    margin: int = 40
    long_lane_offset: int = 60
    long_lane_step: int = 18
    loop_radius: int = 10
    arc_opacity: float = 0.6
    font_size: int = 11
    palette: dict[str, str] = field(default_factory=lambda: dict(PALETTE))


def load_render_config(path: str) -> RenderConfig:
    """Read overrides from a JSON file; unspecified fields keep defaults."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    config = RenderConfig()
    palette = dict(PALETTE)
    palette.update(data.pop("palette", {}))
    fields = {k: v for k, v in data.items() if hasattr(config, k)}
    return replace(config, palette=palette, **fields)


@dataclass(frozen=True)
class DocumentEdge:
    source: str
    target: str
    edge_class: str  # one of E1 E2 E3 E4 LONG ININ
    display: str     # EdgeDisplay name


@dataclass(frozen=True)
class DrawingDocument:
    schema_version: int
    name: str
    argument_count: int
    attack_count: int
    in_order: tuple[str, ...]
    out_order: tuple[str, ...]
    undec_order: tuple[str, ...]
    red_edges: dict[str, str]
    edges: tuple[DocumentEdge, ...]
    argument_display: dict[str, str]
    report: CrossingReport
    palette: dict[str, str]


def build_document(
    drawing: LayeredDrawing,
    partition: EdgePartition,
    annotations: AnnotationSet,
    report: CrossingReport,
    name: str = "af",
    palette: dict[str, str] | None = None,
) -> DrawingDocument:
    """Assemble the exchange document from solver outputs."""
    edges: list[DocumentEdge] = []
    for cls, attack_list in zip(_EDGE_CLASSES, (
            partition.e1, partition.e2, partition.e3, partition.e4,
            partition.long_edges, partition.in_in_edges)):
        for s, t in attack_list:
            edges.append(DocumentEdge(s, t, cls, annotations.edge_class[(s, t)].name))
    args_in_order = list(drawing.in_order) + list(drawing.out_order) + list(drawing.undec_order)
    return DrawingDocument(
        schema_version=SCHEMA_VERSION,
        name=name,
        argument_count=len(args_in_order),
        attack_count=len(edges),
        in_order=tuple(drawing.in_order),
        out_order=tuple(drawing.out_order),
        undec_order=tuple(drawing.undec_order),
        red_edges={t: drawing.red_edges[t] for t in drawing.out_order if t in drawing.red_edges},
        edges=tuple(edges),
        argument_display={a: annotations.argument_class[a].name for a in args_in_order},
        report=report,
        palette=dict(palette) if palette is not None else dict(PALETTE),
    )


def document_to_dict(doc: DrawingDocument) -> dict:
    return {
        "schema_version": doc.schema_version,
        "instance": {
            "name": doc.name,
            "argument_count": doc.argument_count,
            "attack_count": doc.attack_count,
        },
        "layers": {
            "in": list(doc.in_order),
            "out": list(doc.out_order),
            "undec": list(doc.undec_order),
        },
        "red_edges": dict(doc.red_edges),
        "edges": [
            {"source": e.source, "target": e.target,
             "edge_class": e.edge_class, "display": e.display}
            for e in doc.edges
        ],
        "argument_display": dict(doc.argument_display),
        "report": {
            "c1": doc.report.c1,
            "c2": doc.report.c2,
            "c3": doc.report.c3,
            "c4": doc.report.c4,
            "weighted_objective": doc.report.weighted_objective,
            "rec_violations": doc.report.rec_violations,
        },
        "palette": dict(doc.palette),
    }


def to_json(doc: DrawingDocument) -> str:
    """Canonical document text: fixed field order, two-space indent."""
    return json.dumps(document_to_dict(doc), indent=2) + "\n"


def from_json(text: str) -> DrawingDocument:
    """Parse document text and re-validate all embedded invariants."""
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported document schema version {data.get('schema_version')!r}")
    rep = data["report"]
    doc = DrawingDocument(
        schema_version=data["schema_version"],
        name=data["instance"]["name"],
        argument_count=data["instance"]["argument_count"],
        attack_count=data["instance"]["attack_count"],
        in_order=tuple(data["layers"]["in"]),
        out_order=tuple(data["layers"]["out"]),
        undec_order=tuple(data["layers"]["undec"]),
        red_edges=dict(data["red_edges"]),
        edges=tuple(DocumentEdge(e["source"], e["target"], e["edge_class"], e["display"])
                    for e in data["edges"]),
        argument_display=dict(data["argument_display"]),
        report=CrossingReport(
            c1=rep["c1"], c2=rep["c2"], c3=rep["c3"], c4=rep["c4"],
            weighted_objective=rep["weighted_objective"],
            rec_violations=rep["rec_violations"],
        ),
        palette=dict(data["palette"]),
    )
    validate_document(doc)
    return doc


def partition_from_document(doc: DrawingDocument) -> EdgePartition:
    by_class: dict[str, list[tuple[str, str]]] = {c: [] for c in _EDGE_CLASSES}
    for e in doc.edges:
        by_class[e.edge_class].append((e.source, e.target))
    return EdgePartition(
        e1=tuple(by_class["E1"]),
        e2=tuple(by_class["E2"]),
        e3=tuple(by_class["E3"]),
        e4=tuple(by_class["E4"]),
        long_edges=tuple(by_class["LONG"]),
        in_in_edges=tuple(by_class["ININ"]),
    )


def drawing_from_document(doc: DrawingDocument) -> LayeredDrawing:
    return LayeredDrawing(doc.in_order, doc.out_order, doc.undec_order, dict(doc.red_edges))


_CLASS_OF_LAYERS = {
    frozenset(("in", "out")): "E1",
    frozenset(("out",)): "E2",
    frozenset(("out", "undec")): "E3",
    frozenset(("undec",)): "E4",
    frozenset(("in", "undec")): "LONG",
    frozenset(("in",)): "ININ",
}


def validate_document(doc: DrawingDocument) -> None:
    """Check structural consistency and recount the embedded report."""
    layer_of: dict[str, str] = {}
    for tag, order in (("in", doc.in_order), ("out", doc.out_order), ("undec", doc.undec_order)):
        for a in order:
            if a in layer_of:
                raise ValueError(f"argument {a!r} appears in more than one layer")
            layer_of[a] = tag
    if doc.argument_count != len(layer_of):
        raise ValueError("argument_count does not match the layers")
    if doc.attack_count != len(doc.edges):
        raise ValueError("attack_count does not match the edge list")

    red_seen: dict[str, str] = {}
    for e in doc.edges:
        if e.source not in layer_of or e.target not in layer_of:
            raise ValueError(f"edge ({e.source!r}, {e.target!r}) references unknown arguments")
        expected = _CLASS_OF_LAYERS[frozenset((layer_of[e.source], layer_of[e.target]))]
        if e.edge_class != expected:
            raise ValueError(f"edge ({e.source!r}, {e.target!r}) has class {e.edge_class}, expected {expected}")
        allowed = {
            "E1": ("RED", "ORANGE") if layer_of[e.source] == "in" else ("PLAIN",),
            "E2": ("PLAIN",),
            "E3": ("PLAIN",),
            "E4": ("ODD_CYCLE", "PLAIN"),
            "LONG": ("LONG_FLAG",),
            "ININ": ("PLAIN",),
        }[e.edge_class]
        if e.display not in allowed:
            raise ValueError(f"edge ({e.source!r}, {e.target!r}) display {e.display} invalid for {e.edge_class}")
        if e.display == "RED":
            if e.target in red_seen:
                raise ValueError(f"OUT argument {e.target!r} carries two red edges")
            red_seen[e.target] = e.source
    if red_seen != dict(doc.red_edges):
        raise ValueError("red_edges mapping disagrees with RED edge displays")

    for a, cls in doc.argument_display.items():
        if a not in layer_of:
            raise ValueError(f"argument_display references unknown argument {a!r}")
        allowed = {
            "in": ("ORANGE_ATTACKER", "NON_ATTACKING_IN"),
            "out": ("PLAIN",),
            "undec": ("ODD_CYCLE_MEMBER", "UNATTACKED_UNDEC", "PLAIN"),
        }[layer_of[a]]
        if cls not in allowed:
            raise ValueError(f"argument {a!r} display {cls} invalid for layer {layer_of[a]}")
    if set(doc.argument_display) != set(layer_of):
        raise ValueError("argument_display must cover exactly the layer arguments")

    recount = count_crossings(drawing_from_document(doc), partition_from_document(doc))
    if recount != doc.report:
        raise ValueError("embedded crossing report does not match a recount")


# ---------------------------------------------------------------------------
# scene geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SceneNode:
    id: str
    layer: str  # in / out / undec
    x: float
    y: float
    display: str


@dataclass(frozen=True)
class SceneEdge:
    source: str
    target: str
    kind: str  # segment / arc / loop / long
    path: str  # SVG path data
    display: str
    radius: float = 0.0  # arcs only: semicircle radius


@dataclass(frozen=True)
class Scene:
    nodes: tuple[SceneNode, ...]
    edges: tuple[SceneEdge, ...]
    width: float
    height: float


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.2f}"


def layout_geometry(doc: DrawingDocument, config: RenderConfig | None = None) -> Scene:
    """Positions in scene coordinates (margins are applied at SVG time)."""
    cfg = config or RenderConfig()
    coords: dict[str, tuple[float, float]] = {}
    layer_tag: dict[str, str] = {}
    nodes: list[SceneNode] = []
    for col, (tag, order) in enumerate(
            (("in", doc.in_order), ("out", doc.out_order), ("undec", doc.undec_order))):
        for row, a in enumerate(order):
            x, y = float(col * cfg.layer_gap), float(row * cfg.row_gap)
            coords[a] = (x, y)
            layer_tag[a] = tag
            nodes.append(SceneNode(a, tag, x, y, doc.argument_display[a]))

    edges: list[SceneEdge] = []
    long_lane = 0
    for e in doc.edges:
        (x1, y1), (x2, y2) = coords[e.source], coords[e.target]
        if e.edge_class in ("E1", "E3"):
            dx, dy = x2 - x1, y2 - y1
            length = math.hypot(dx, dy)
            ux, uy = dx / length, dy / length
            sx, sy = x1 + ux * cfg.node_radius, y1 + uy * cfg.node_radius
            tx, ty = x2 - ux * (cfg.node_radius + 6), y2 - uy * (cfg.node_radius + 6)
            path = f"M {_fmt(sx)} {_fmt(sy)} L {_fmt(tx)} {_fmt(ty)}"
            edges.append(SceneEdge(e.source, e.target, "segment", path, e.display))
        elif e.edge_class == "LONG":
            lane_x = 2 * cfg.layer_gap + cfg.long_lane_offset + long_lane * cfg.long_lane_step
            long_lane += 1
            path = (f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(lane_x)} {_fmt(y1)} "
                    f"L {_fmt(lane_x)} {_fmt(y2)} L {_fmt(x2 + cfg.node_radius)} {_fmt(y2)}")
            edges.append(SceneEdge(e.source, e.target, "long", path, e.display))
        elif e.source == e.target:
            r = cfg.loop_radius
            path = (f"M {_fmt(x1)} {_fmt(y1 - 5)} "
                    f"A {r} {r} 0 1 1 {_fmt(x1)} {_fmt(y1 + 5)}")
            edges.append(SceneEdge(e.source, e.target, "loop", path, e.display, radius=float(r)))
        else:
            # semicircle right of the layer, radius = half the y distance
            r = abs(y2 - y1) / 2.0
            sweep = 1 if y2 > y1 else 0
            path = (f"M {_fmt(x1)} {_fmt(y1)} "
                    f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}")
            edges.append(SceneEdge(e.source, e.target, "arc", path, e.display, radius=r))

    rows = max((len(doc.in_order), len(doc.out_order), len(doc.undec_order)), default=0)
    arc_extent = max((ed.radius for ed in edges if ed.kind in ("arc", "loop")), default=0.0)
    lane_extent = (cfg.long_lane_offset + (long_lane - 1) * cfg.long_lane_step
                   if long_lane else 0)
    width = 2 * cfg.layer_gap + max(arc_extent, float(lane_extent), 0.0) + cfg.node_radius
    height = float(max(rows - 1, 0) * cfg.row_gap)
    return Scene(tuple(nodes), tuple(edges), width, height)


# ---------------------------------------------------------------------------
# SVG export
# ---------------------------------------------------------------------------


def to_svg(doc: DrawingDocument, config: RenderConfig | None = None) -> str:
    """Deterministic SVG 1.1: one path per edge, one circle and one text
    label per argument.  Arcs render at reduced opacity behind segments."""
    validate_document(doc)
    cfg = config or RenderConfig()
    scene = layout_geometry(doc, cfg)
    palette = cfg.palette

    def edge_color(display: str) -> str:
        return palette[_EDGE_COLOR_KEY[display]]

    def node_color(display: str) -> str:
        return palette[_ARG_COLOR_KEY[display]]

    used_keys = []
    for e in scene.edges:
        key = _EDGE_COLOR_KEY[e.display]
        if key not in used_keys:
            used_keys.append(key)

    width = scene.width + 2 * cfg.margin
    height = scene.height + 2 * cfg.margin
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">')
    out.append("<defs>")
    for key in used_keys:
        out.append(
            f'<marker id="arrow-{key}" viewBox="0 0 10 10" refX="9" refY="5" '
            f'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
            f'<polygon points="0,0 10,5 0,10" fill="{palette[key]}"/></marker>')
    out.append("</defs>")
    out.append(f'<g transform="translate({cfg.margin},{cfg.margin})">')

    back = [e for e in scene.edges if e.kind in ("arc", "loop", "long")]
    front = [e for e in scene.edges if e.kind == "segment"]
    for e in back:
        key = _EDGE_COLOR_KEY[e.display]
        dash = ' stroke-dasharray="6,4"' if e.display == "LONG_FLAG" else ""
        out.append(
            f'<path d="{e.path}" fill="none" stroke="{edge_color(e.display)}" '
            f'stroke-width="1.5" opacity="{cfg.arc_opacity}"{dash} '
            f'marker-end="url(#arrow-{key})"/>')
    for e in front:
        key = _EDGE_COLOR_KEY[e.display]
        sw = "2.5" if e.display == "RED" else "1.5"
        out.append(
            f'<path d="{e.path}" fill="none" stroke="{edge_color(e.display)}" '
            f'stroke-width="{sw}" marker-end="url(#arrow-{key})"/>')
    for n in scene.nodes:
        out.append(
            f'<circle cx="{_fmt(n.x)}" cy="{_fmt(n.y)}" r="{cfg.node_radius}" '
            f'fill="#ffffff" stroke="{node_color(n.display)}" stroke-width="2"/>')
    for n in scene.nodes:
        out.append(
            f'<text x="{_fmt(n.x)}" y="{_fmt(n.y + cfg.font_size / 2 - 1.5)}" '
            f'text-anchor="middle" font-family="monospace" '
            f'font-size="{cfg.font_size}">{_escape(n.id)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))

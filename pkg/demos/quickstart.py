"""Minimal tour: parse an instance, lay it out, export JSON and SVG.

Run from the repository root:

    python3 demos/quickstart.py
"""

from __future__ import annotations

from pathlib import Path

import aflayout as al

here = Path(__file__).parent
out_dir = here / "out"
out_dir.mkdir(exist_ok=True)

# Parse a small framework and pick the grounded extension.
af = al.parse_af((here.parent / "instances" / "odd_cycle.apx").read_text(), "apx")
extension = al.grounded_extension(af)
print("arguments:", ", ".join(af.arguments))
print("grounded extension:", ", ".join(sorted(extension)) or "(empty)")

# The pipeline labels every argument, orders the three layers, picks one
# highlighted incoming attack per rejected argument, and reports crossings.
drawing, report, annotations = al.run_pipeline(af, extension)
print("layers:")
print("  accepted :", ", ".join(drawing.in_order))
print("  rejected :", ", ".join(drawing.out_order))
print("  undecided:", ", ".join(drawing.undec_order))
print("crossings:", report)

# Package the result as a schema-validated document, then render it.
labeling = al.compute_labeling(af, extension)
partition = al.partition_edges(af, labeling)
doc = al.build_document(drawing, partition, annotations, report, name="odd_cycle")
(out_dir / "odd_cycle.json").write_text(al.to_json(doc))
(out_dir / "odd_cycle.svg").write_text(al.to_svg(doc))
print("wrote", out_dir / "odd_cycle.json")
print("wrote", out_dir / "odd_cycle.svg")

# The undecided 3-cycle is flagged: its arcs render in the odd-cycle color.
flagged = [e for e in doc.edges if e.display == "ODD_CYCLE"]
print("odd-cycle arcs:", [(e.source, e.target) for e in flagged])

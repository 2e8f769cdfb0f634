"""Regenerate the JSON fixtures consumed by the vitest suite.

Run from the repository root after changing the Python side:

    python3 frontend/fixtures/generate_fixtures.py

mixed-document.json is a single drawing that exercises every edge and
argument display class at once.  The penalty pair holds two full solve
payloads for the same instance, with and without the red-edge
constraint, where the unconstrained optimum is strictly smaller.
"""

from __future__ import annotations

import json
from pathlib import Path

from aflayout.af import ArgumentationFramework, compute_labeling, serialize_af
from aflayout.api import SolveRequest, execute
from aflayout.generators import rec_penalty_family
from aflayout.heuristic import run_pipeline
from aflayout.layout import partition_edges
from aflayout.render import build_document, document_to_dict

OUT = Path(__file__).parent


def mixed_document() -> dict:
    af = ArgumentationFramework(
        ("i1", "i2", "i3", "o1", "o2", "u1", "u2", "u3", "u4"),
        (("i1", "o1"), ("i2", "o1"), ("i1", "o2"), ("o1", "o2"), ("o1", "o1"),
         ("o2", "u1"), ("u1", "u2"), ("u2", "u3"), ("u3", "u1"),
         ("u1", "i1"), ("u2", "i2")),
    )
    # conflict-free but not admissible, so accepted->undecided attacks occur
    extension = frozenset({"i1", "i2", "i3"})
    drawing, report, annotations = run_pipeline(af, extension)
    labeling = compute_labeling(af, extension)
    partition = partition_edges(af, labeling)
    document = build_document(drawing, partition, annotations, report, name="mixed")
    return document_to_dict(document)


def penalty_payload(rec: bool) -> dict:
    af, extension = rec_penalty_family()
    request = SolveRequest(
        af_text=serialize_af(af, "apx"),
        extension=extension,
        mode="exact",
        rec=rec,
        seed=0,
        name="forced-witness",
    )
    payload = execute(request).payload
    payload.pop("timing")  # keep the fixture byte-stable
    return payload


def main() -> None:
    files = {
        "mixed-document.json": mixed_document(),
        "penalty-rec-on.json": penalty_payload(True),
        "penalty-rec-off.json": penalty_payload(False),
    }
    for name, data in files.items():
        (OUT / name).write_text(json.dumps(data, indent=2) + "\n")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()

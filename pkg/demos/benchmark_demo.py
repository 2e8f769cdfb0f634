"""Desk-scale benchmark over the bundled instances plus adapted random ones.

Prints the per-bucket summary table and writes the raw CSV.

    python3 demos/benchmark_demo.py
"""

from __future__ import annotations

from pathlib import Path

import aflayout as al
from aflayout.bench import BenchConfig, discover_instances, run_benchmark, summarize, to_csv
from aflayout.generators import random_af

here = Path(__file__).parent
out_dir = here / "out"
out_dir.mkdir(exist_ok=True)

instances = discover_instances(here.parent / "instances")

# Shrink one larger random framework to two target sizes, the same way
# oversized benchmark inputs get adapted to desk scale.
big = random_af(60, 200, seed=4, allow_self_attacks=False)
for nv, ne in ((25, 50), (40, 90)):
    small = al.adapt_instance(big, nv, ne, seed=nv)
    instances.append((f"adapted_{nv}_{ne}", small, None))

config = BenchConfig(exact_timeout_ms=15_000, seed=0)
records = run_benchmark(instances, config)

csv_path = out_dir / "bench.csv"
csv_path.write_text(to_csv(records))
print(summarize(records, config))
print("wrote", csv_path)

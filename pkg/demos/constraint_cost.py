"""How much does keeping the highlighted attacks crossing-free cost?

Sweeps the penalty family, where the cost is provably at least one extra
crossing, and the neutral family, where it is provably zero.

    python3 demos/constraint_cost.py
"""

from __future__ import annotations

import aflayout as al
from aflayout.generators import rec_neutral_family, rec_penalty_family

print(f"{'family':>22} {'constrained':>12} {'free':>6} {'cost':>5}")
for k_uv, k_vw in ((2, 2), (2, 3), (3, 3), (4, 2)):
    af, ext = rec_penalty_family(k_uv, k_vw, pad_u=1, pad_v=1, pad_w=1)
    labeling = al.compute_labeling(af, frozenset(ext))
    partition = al.partition_edges(af, labeling)
    layers = (labeling.in_args, labeling.out_args, labeling.undec_args)
    with_rec = al.solve_exact(partition, layers, rec=True).report.weighted_objective
    without = al.solve_exact(partition, layers, rec=False).report.weighted_objective
    print(f"{f'penalty {k_uv},{k_vw}':>22} {with_rec:>12} {without:>6} {with_rec - without:>5}")

for k in (3, 4, 5):
    af, ext = rec_neutral_family(k, pad_u=2, pad_v=2, seed=k)
    labeling = al.compute_labeling(af, frozenset(ext))
    partition = al.partition_edges(af, labeling)
    layers = (labeling.in_args, labeling.out_args, labeling.undec_args)
    with_rec = al.solve_exact(partition, layers, rec=True).report.weighted_objective
    without = al.solve_exact(partition, layers, rec=False).report.weighted_objective
    print(f"{f'neutral k={k}':>22} {with_rec:>12} {without:>6} {with_rec - without:>5}")

"""
Direct comparison or a chain of consecutive comparisons?
========================================================

The effect of changing sorting between the first and last period can be
measured by one counterfactual (first-period availability, last-period
sorting) or by adding up the sorting effects of consecutive pairs. The two
need not agree.
"""

from nmdecomp import SeriesKind, biewen_decompose, run_series
from nmdecomp.datasets import load_synthetic

tables = load_synthetic()

for method in ("nm", "ipf"):
    print(f"\n== {method.upper()} ==")
    pairs = []
    points = run_series(tables, method, pairs_out=pairs)
    for kind in SeriesKind:
        line = [p for p in points if p.series_kind is kind]
        shares = [p.counterfactual_share if p.counterfactual_share is not None else p.observed_share
                  for p in line]
        print(f"{kind.value:>22}: " + "  ".join(f"{p.period}:{100 * s:5.1f}" for p, s in zip(line, shares)))
    print("consecutive pairs (pp):")
    for r in pairs:
        print(f"  {r.base_period}->{r.end_period}  total {r.total_change:+.2f}  "
              f"availability {r.availability_effect:+.2f}  sorting {r.sorting_effect:+.2f}  "
              f"interaction {r.interaction_effect:+.2f}")
    direct = biewen_decompose(tables[0], tables[-1], method)
    chained = sum(r.sorting_effect for r in pairs)
    print(f"sorting effect 1960->2015: direct {direct.sorting_effect:+.2f} pp, chained {chained:+.2f} pp")

"""Liu-Lu sorting indicator on 2x2 aggregates and its matrix-valued generalization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DegenerateMargins, MethodError
from .tables import (
    ContingencyTable,
    Dichotomized2x2,
    FloorMode,
    as_mode,
    dichotomize,
)

# Relative slack (times the grand total) for the non-negative sorting test.
# Keeps tables that sit exactly on the random-matching benchmark on the
# non-negative branch despite rounding in Q.
SORTING_SLACK = 1e-12


def is_nonnegative_sorting(d: Dichotomized2x2) -> bool:
    """True when the H,H count is at least the benchmark ``Q-``."""
    return d.hh >= d.q_floor - SORTING_SLACK * d.total


def ll_simplified(d: Dichotomized2x2) -> float:
    """Actual minus minimum over maximum minus minimum of the H,H cell.

    The maximum is ``min(N_H., N_.H)``. Under non-negative sorting the
    minimum is ``Q-``. Below ``Q-`` (negative sorting) the minimum falls back
    to the Frechet lower bound; values from that branch are not on the same
    scale as non-negative ones and NM refuses such sources.

    Raises
    ------
    DegenerateMargins
        If the maximum equals the minimum, e.g. for a zero margin.
    """
    hi = d.hh_max
    lo = d.q_floor if is_nonnegative_sorting(d) else d.hh_min
    if hi - lo <= SORTING_SLACK * d.total:
        raise DegenerateMargins(
            f"LL indicator undefined: max H,H ({hi:g}) equals min ({lo:g}) "
            f"for aggregate {d.cells.tolist()}"
        ).with_context(split=d.split_index)
    return (d.hh - lo) / (hi - lo)


@dataclass(frozen=True, eq=False)
class SortingMatrix:
    """Generalized LL values; entry ``[i-1, j-1]`` belongs to split ``(i, j)``."""

    values: np.ndarray
    source_dims: Tuple[int, int]
    mode: FloorMode

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        n, m = self.source_dims
        if values.shape != (n - 1, m - 1):
            raise ValueError(
                f"values shape {values.shape} inconsistent with a {n}x{m} source"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, split):
        i, j = split
        return float(self.values[i - 1, j - 1])


def ll_generalized(table: ContingencyTable, mode=None) -> SortingMatrix:
    """LL indicator at every split ``(i, j)`` of ``table``."""
    mode = as_mode(mode)
    n, m = table.shape
    values = np.empty((n - 1, m - 1))
    for i in range(1, n):
        for j in range(1, m):
            d = dichotomize(table, i, j, mode)
            try:
                values[i - 1, j - 1] = ll_simplified(d)
            except MethodError as exc:
                where = None if table.period is None else f"period {table.period}"
                raise exc.with_context(split=(i, j), where=where)
    return SortingMatrix(values, (n, m), mode)

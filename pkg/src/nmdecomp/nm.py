"""NM counterfactual tables.

The H,H cell of every 2x2 split is set so that the split's LL value matches
the source table while the split's margins match the target. The resulting
grid of upper-right tail sums pins down the whole table.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    DegenerateSource,
    InfeasibleTarget,
    MethodError,
    NegativeCellError,
    NegativeSortingSource,
)
from .ll import SORTING_SLACK, is_nonnegative_sorting
from .tables import (
    ContingencyTable,
    CounterfactualTable,
    Dichotomized2x2,
    Margins,
    as_mode,
    dichotomize,
    q_floor,
)

# Cells above -NEGATIVE_CELL_RTOL * N are rounding noise and get clamped to 0.
NEGATIVE_CELL_RTOL = 1e-9


def nm_hh(source: Dichotomized2x2, row_h: float, col_h: float, total: float) -> float:
    """Counterfactual H,H count for one 2x2 problem.

    Parameters
    ----------
    source : Dichotomized2x2
        Aggregate supplying the degree of sorting. Its ``mode`` decides
        whether ``int()`` floors or passes through.
    row_h, col_h, total : float
        Target ``N_H.``, ``N_.H`` and grand total.
    """
    if not is_nonnegative_sorting(source):
        raise NegativeSortingSource(
            f"source H,H count {source.hh:g} is below the random-matching "
            f"benchmark {source.q_floor:g}"
        ).with_context(split=source.split_index)
    src_room = source.hh_max - source.q_floor
    if src_room <= SORTING_SLACK * source.total:
        raise DegenerateSource(
            f"source head-room min(N_H., N_.H) - int(Q) = {src_room:g} is not positive"
        ).with_context(split=source.split_index)
    tgt_floor = q_floor(row_h * col_h / total, source.mode)
    tgt_room = min(row_h, col_h) - tgt_floor
    if tgt_room < -SORTING_SLACK * total:
        raise InfeasibleTarget(
            f"target head-room {tgt_room:g} is negative"
        ).with_context(split=source.split_index)
    return (source.hh - source.q_floor) * tgt_room / src_room + tgt_floor


def _assemble(tails: np.ndarray, total: float, row_labels, col_labels) -> np.ndarray:
    # tails[i, j] = mass in rows > i and columns > j (0 <= i <= n, 0 <= j <= m)
    cells = tails[:-1, :-1] - tails[1:, :-1] - tails[:-1, 1:] + tails[1:, 1:]
    floor = -NEGATIVE_CELL_RTOL * total
    if np.any(cells < floor):
        k, l = np.unravel_index(np.argmin(cells), cells.shape)
        raise NegativeCellError(
            f"counterfactual cell ({row_labels[k]}, {col_labels[l]}) is "
            f"{cells[k, l]:.6g} < 0; the target margins are infeasible for this "
            f"degree of sorting",
            cell=(int(k), int(l)),
        )
    return np.maximum(cells, 0.0)


def describe_periods(sorting_period, availability_period):
    """Error context naming the periods, or None when neither is known."""
    if sorting_period is None and availability_period is None:
        return None
    return f"sorting {sorting_period}, availability {availability_period}"


def _periods(source, target):
    return describe_periods(source.period, target.period)


def nm_2x2(source: Dichotomized2x2, target: Margins) -> CounterfactualTable:
    """Closed-form NM counterfactual for a dichotomous trait."""
    if target.shape != (2, 2):
        raise ValueError(f"nm_2x2 needs 2x2 target margins, got {target.shape}")
    rows, cols = target.row_totals, target.col_totals
    total = target.grand_total
    hh = nm_hh(source, rows[1], cols[1], total)
    tails = np.array([[total, cols[1], 0.0], [rows[1], hh, 0.0], [0.0, 0.0, 0.0]])
    cells = _assemble(tails, total, ("L", "H"), ("L", "H"))
    table = ContingencyTable(cells, ("L", "H"), ("L", "H"), target.period)
    return CounterfactualTable(table, None, target.period, "NM")


def nm_transform(source: ContingencyTable, target: Margins, mode=None) -> CounterfactualTable:
    """NM counterfactual: sorting of ``source``, margins of ``target``.

    Parameters
    ----------
    source : ContingencyTable
        ``n x m`` table whose generalized LL matrix is retained.
    target : Margins
        Row totals of length ``n`` and column totals of length ``m``.
    mode : FloorMode or str, optional
        ``Q-`` policy; integer flooring by default.

    Raises
    ------
    NegativeSortingSource, DegenerateSource
        If any split of ``source`` cannot feed the closed form; the error
        carries the split.
    NegativeCellError
        If the target margins force a negative cell.
    """
    mode = as_mode(mode)
    n, m = source.shape
    if target.shape != (n, m):
        raise ValueError(
            f"target margins {target.shape} do not match a {n}x{m} source"
        )
    rows, cols = target.row_totals, target.col_totals
    total = target.grand_total
    row_tail = np.append(rows[::-1].cumsum()[::-1], 0.0)
    col_tail = np.append(cols[::-1].cumsum()[::-1], 0.0)
    tails = np.zeros((n + 1, m + 1))
    tails[0, :] = col_tail
    tails[:, 0] = row_tail
    tails[0, 0] = total
    for i in range(1, n):
        for j in range(1, m):
            d = dichotomize(source, i, j, mode)
            try:
                tails[i, j] = nm_hh(d, row_tail[i], col_tail[j], total)
            except MethodError as exc:
                raise exc.with_context(split=(i, j), where=_periods(source, target))
    try:
        cells = _assemble(tails, total, source.row_labels, source.col_labels)
    except MethodError as exc:
        raise exc.with_context(where=_periods(source, target))
    table = source.with_cells(cells, period=target.period)
    return CounterfactualTable(table, source.period, target.period, "NM")

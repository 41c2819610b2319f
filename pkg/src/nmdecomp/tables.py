"""Contingency-table data model and structural operations.

Rows index husbands and columns index wives, both in ascending order of the
assorted trait (education). Counts are real-valued so that weighted census
extracts can be used directly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DataError

MARGIN_RTOL = 1e-9


class FloorMode(str, enum.Enum):
    """How the benchmark ``Q-`` is derived from the random-matching count ``Q``.

    ``INTEGER`` floors ``Q`` (the default, faithful to integer counts);
    ``CONTINUOUS`` uses ``Q`` itself, which makes the LL indicator exactly
    scale invariant and NM exactly LL-preserving.
    """

    INTEGER = "integer"
    CONTINUOUS = "continuous"


DEFAULT_MODE = FloorMode.INTEGER


def as_mode(mode) -> FloorMode:
    if mode is None:
        return DEFAULT_MODE
    try:
        return FloorMode(mode)
    except ValueError:
        raise ValueError(
            f"unknown floor mode {mode!r}; expected 'integer' or 'continuous'"
        ) from None


def q_floor(q: float, mode=None) -> float:
    """Return ``Q-``: ``floor(q)`` in integer mode, ``q`` in continuous mode."""
    if as_mode(mode) is FloorMode.INTEGER:
        return float(math.floor(q))
    return float(q)


def _labels(labels, size, axis):
    if labels is None:
        return tuple(str(k + 1) for k in range(size))
    labels = tuple(str(lab) for lab in labels)
    if len(labels) != size:
        raise DataError(f"{axis} labels: expected {size}, got {len(labels)}")
    if len(set(labels)) != len(labels):
        dupes = sorted({lab for lab in labels if labels.count(lab) > 1})
        raise DataError(f"duplicate {axis} labels: {', '.join(dupes)}")
    return labels


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """An ``n x m`` table of couple counts.

    Parameters
    ----------
    cells : array_like
        Nonnegative counts; rows are husband categories, columns are wife
        categories.
    row_labels, col_labels : sequence of str, optional
        Ordered category names. Default to ``"1"``, ``"2"``, ...
    period : str, optional
        Time label such as a census year.
    """

    cells: np.ndarray
    row_labels: Tuple[str, ...] = None
    col_labels: Tuple[str, ...] = None
    period: Optional[str] = None

    def __post_init__(self):
        try:
            cells = _readonly(self.cells)
        except (TypeError, ValueError) as exc:
            raise DataError(f"cells are not a numeric matrix: {exc}") from None
        if cells.ndim != 2:
            raise DataError(f"cells must be a 2-d matrix, got {cells.ndim} dimension(s)")
        n, m = cells.shape
        if n < 2 or m < 2:
            raise DataError(f"table must be at least 2x2, got {n}x{m}")
        if not np.all(np.isfinite(cells)):
            raise DataError("cells must be finite")
        if np.any(cells < 0):
            k, l = np.argwhere(cells < 0)[0]
            raise DataError(f"negative cell ({k}, {l}): {cells[k, l]!r}")
        if not cells.sum() > 0:
            raise DataError("grand total must be positive")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "row_labels", _labels(self.row_labels, n, "row"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, m, "column"))
        if self.period is not None:
            object.__setattr__(self, "period", str(self.period))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    @property
    def grand_total(self) -> float:
        return float(self.cells.sum())

    @property
    def is_square(self) -> bool:
        n, m = self.shape
        return n == m

    def with_cells(self, cells, period=None) -> "ContingencyTable":
        """Same labels, new cells."""
        return ContingencyTable(cells, self.row_labels, self.col_labels, period)

    def __repr__(self):
        n, m = self.shape
        tag = f", period={self.period!r}" if self.period is not None else ""
        return f"ContingencyTable({n}x{m}, total={self.grand_total:g}{tag})"


@dataclass(frozen=True, eq=False)
class Margins:
    """Row totals ``R`` (husbands) and column totals ``C`` (wives)."""

    row_totals: np.ndarray
    col_totals: np.ndarray
    period: Optional[str] = None

    def __post_init__(self):
        rows = _readonly(self.row_totals)
        cols = _readonly(self.col_totals)
        if rows.ndim != 1 or cols.ndim != 1:
            raise DataError("margins must be 1-d vectors")
        if np.any(rows < 0) or np.any(cols < 0):
            raise DataError("margins must be nonnegative")
        r, c = rows.sum(), cols.sum()
        if not r > 0:
            raise DataError("margins must have a positive grand total")
        if abs(r - c) > MARGIN_RTOL * max(r, c):
            raise DataError(f"row and column totals disagree: {r!r} vs {c!r}")
        object.__setattr__(self, "row_totals", rows)
        object.__setattr__(self, "col_totals", cols)
        if self.period is not None:
            object.__setattr__(self, "period", str(self.period))

    @property
    def grand_total(self) -> float:
        return float(self.row_totals.sum())

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_totals), len(self.col_totals)

    def allclose(self, other: "Margins", rtol=1e-12) -> bool:
        if self.shape != other.shape:
            return False
        atol = rtol * max(self.grand_total, other.grand_total)
        return bool(
            np.allclose(self.row_totals, other.row_totals, rtol=0, atol=atol)
            and np.allclose(self.col_totals, other.col_totals, rtol=0, atol=atol)
        )


def margins(table: ContingencyTable) -> Margins:
    """Row and column totals of ``table``."""
    return Margins(table.cells.sum(axis=1), table.cells.sum(axis=0), table.period)


@dataclass(frozen=True, eq=False)
class Dichotomized2x2:
    """A 2x2 aggregate of a table split into low/high blocks on each axis.

    ``cells`` is laid out ``[[LL, LH], [HL, HH]]``. ``q`` is the expected H,H
    count under random matching, ``q_floor`` the benchmark ``Q-`` under
    ``mode``, and ``hh_min``/``hh_max`` the Frechet bounds of the H,H cell.
    """

    cells: np.ndarray
    split_index: Tuple[int, int] = (1, 1)
    mode: FloorMode = DEFAULT_MODE
    q: float = field(init=False)
    q_floor: float = field(init=False)
    hh_max: float = field(init=False)
    hh_min: float = field(init=False)

    def __post_init__(self):
        cells = _readonly(self.cells)
        if cells.shape != (2, 2):
            raise DataError(f"expected a 2x2 aggregate, got shape {cells.shape}")
        mode = as_mode(self.mode)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "mode", mode)
        row_h, col_h, total = self.row_h, self.col_h, self.total
        q = row_h * col_h / total if total > 0 else 0.0
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q_floor", q_floor(q, mode))
        object.__setattr__(self, "hh_max", min(row_h, col_h))
        object.__setattr__(self, "hh_min", max(0.0, row_h + col_h - total))

    @property
    def hh(self) -> float:
        return float(self.cells[1, 1])

    @property
    def row_h(self) -> float:
        """``N_{H,.}``: couples with an H-type husband."""
        return float(self.cells[1].sum())

    @property
    def col_h(self) -> float:
        """``N_{.,H}``: couples with an H-type wife."""
        return float(self.cells[:, 1].sum())

    @property
    def total(self) -> float:
        return float(self.cells.sum())


def dichotomize(table: ContingencyTable, i: int, j: int, mode=None) -> Dichotomized2x2:
    """Aggregate ``table`` into 2x2 blocks split after row ``i`` and column ``j``.

    Splits are 1-based: rows ``1..i`` are L-type husbands, rows ``i+1..n``
    H-type; likewise for wives with ``j``.
    """
    n, m = table.shape
    if not (1 <= i <= n - 1 and 1 <= j <= m - 1):
        raise IndexError(
            f"split ({i}, {j}) out of range for a {n}x{m} table; "
            f"need 1 <= i <= {n - 1} and 1 <= j <= {m - 1}"
        )
    z = table.cells
    cells = [
        [z[:i, :j].sum(), z[:i, j:].sum()],
        [z[i:, :j].sum(), z[i:, j:].sum()],
    ]
    return Dichotomized2x2(cells, (i, j), as_mode(mode))


def homogamy_share(table: ContingencyTable) -> float:
    """Share of couples on the diagonal (same category for both spouses)."""
    if not table.is_square:
        n, m = table.shape
        raise ValueError(f"homogamy share needs a square table, got {n}x{m}")
    z = table.cells
    return float(np.trace(z) / z.sum())


def _check_partition(groups, size, axis):
    groups = [list(g) for g in groups]
    flat = [k for g in groups for k in g]
    if any(len(g) == 0 for g in groups):
        raise ValueError(f"{axis} partition has an empty block")
    if flat != list(range(size)):
        raise ValueError(
            f"{axis} partition must cover 0..{size - 1} with contiguous blocks "
            f"in order, got {groups}"
        )
    return groups


def merge_categories(
    table: ContingencyTable,
    row_groups: Sequence[Sequence[int]],
    col_groups: Sequence[Sequence[int]],
) -> ContingencyTable:
    """Merge neighbouring categories.

    Parameters
    ----------
    table : ContingencyTable
    row_groups, col_groups : sequence of sequence of int
        Ordered partitions of the 0-based row/column indices into contiguous
        blocks, e.g. ``[[0, 1], [2, 3]]``.

    Returns
    -------
    ContingencyTable
        Block sums, with labels joined by ``"+"``.
    """
    n, m = table.shape
    rows = _check_partition(row_groups, n, "row")
    cols = _check_partition(col_groups, m, "column")
    row_starts = [g[0] for g in rows]
    col_starts = [g[0] for g in cols]
    merged = np.add.reduceat(np.add.reduceat(table.cells, row_starts, axis=0), col_starts, axis=1)
    row_labels = ["+".join(table.row_labels[k] for k in g) for g in rows]
    col_labels = ["+".join(table.col_labels[k] for k in g) for g in cols]
    return ContingencyTable(merged, row_labels, col_labels, table.period)


def split_blocks(size: int, split: int):
    """Two-block partition ``[[0..split-1], [split..size-1]]``."""
    return [list(range(split)), list(range(split, size))]


def merge_margins(m: Margins, row_groups, col_groups) -> Margins:
    """Margins of the table obtained by :func:`merge_categories`."""
    n, k = m.shape
    rows = _check_partition(row_groups, n, "row")
    cols = _check_partition(col_groups, k, "column")
    return Margins(
        [m.row_totals[g].sum() for g in rows],
        [m.col_totals[g].sum() for g in cols],
        m.period,
    )


@dataclass(frozen=True, eq=False)
class CounterfactualTable:
    """A constructed table with sorting from one period and margins from another."""

    table: ContingencyTable
    sorting_period: Optional[str]
    availability_period: Optional[str]
    method: str
    iterations: Optional[int] = None

    @property
    def cells(self) -> np.ndarray:
        return self.table.cells

"""Iterative proportional fitting (RAS).

Alternately rescales rows and columns of a source table to target margins.
The fitted table keeps every odds ratio of the source among positive cells;
zero cells stay zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleZeroPattern, NotConverged
from .tables import ContingencyTable, CounterfactualTable, Margins


@dataclass(frozen=True)
class IpfConfig:
    """Stopping rule for :func:`ipf_fit`.

    ``tolerance`` bounds the largest absolute margin deviation divided by the
    grand total.
    """

    tolerance: float = 1e-10
    max_iterations: int = 10_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations!r}")


def margin_deviation(cells: np.ndarray, target: Margins) -> float:
    """Largest absolute row/column total deviation, relative to the grand total."""
    dev = max(
        np.max(np.abs(cells.sum(axis=1) - target.row_totals)),
        np.max(np.abs(cells.sum(axis=0) - target.col_totals)),
    )
    return float(dev / target.grand_total)


def _scale(current: np.ndarray, wanted: np.ndarray) -> np.ndarray:
    factors = np.ones_like(current)
    np.divide(wanted, current, out=factors, where=current > 0)
    return factors


def _check_zero_pattern(source: ContingencyTable, target: Margins):
    for axis, totals, name, labels in (
        (1, target.row_totals, "row", source.row_labels),
        (0, target.col_totals, "column", source.col_labels),
    ):
        empty = source.cells.sum(axis=axis) == 0
        bad = np.flatnonzero(empty & (totals > 0))
        if bad.size:
            k = bad[0]
            raise InfeasibleZeroPattern(
                f"target {name} total {totals[k]:g} for {name} '{labels[k]}' "
                f"falls on an all-zero source {name}"
            )


def ipf_fit(
    source: ContingencyTable,
    target: Margins,
    config: IpfConfig = IpfConfig(),
    rows_first: bool = True,
) -> CounterfactualTable:
    """Fit ``source`` to ``target`` margins by iterative proportional fitting.

    Parameters
    ----------
    source : ContingencyTable
        Seed table whose odds ratios are kept.
    target : Margins
        Row and column totals to reach.
    config : IpfConfig, optional
    rows_first : bool, optional
        Sweep order within each iteration. Rows first by default.

    Returns
    -------
    CounterfactualTable
        ``iterations`` holds the number of full sweeps performed.

    Raises
    ------
    InfeasibleZeroPattern
        If a positive target total meets an all-zero source line.
    NotConverged
        If ``config.max_iterations`` sweeps do not reach the tolerance
        (possible when structural zeros make the target unreachable).
    """
    if target.shape != source.shape:
        raise ValueError(
            f"target margins {target.shape} do not match a {source.shape} source"
        )
    _check_zero_pattern(source, target)
    z = source.cells.copy()
    rows, cols = target.row_totals, target.col_totals
    deviation = np.inf
    for iteration in range(1, config.max_iterations + 1):
        if rows_first:
            z *= _scale(z.sum(axis=1), rows)[:, None]
            z *= _scale(z.sum(axis=0), cols)[None, :]
        else:
            z *= _scale(z.sum(axis=0), cols)[None, :]
            z *= _scale(z.sum(axis=1), rows)[:, None]
        deviation = margin_deviation(z, target)
        if deviation <= config.tolerance:
            table = source.with_cells(z, period=target.period)
            return CounterfactualTable(
                table, source.period, target.period, "IPF", iterations=iteration
            )
    raise NotConverged(
        f"IPF did not converge in {config.max_iterations} iterations; "
        f"final relative margin deviation {deviation:.3e} > {config.tolerance:g}",
        deviation=deviation,
        iterations=config.max_iterations,
    )

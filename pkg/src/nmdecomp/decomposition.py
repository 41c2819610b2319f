"""Counterfactual homogamy shares and the Biewen two-factor decomposition.

``f(A, P) = h(g(A, P))`` where ``g`` builds a table with availability
(margins) ``A`` and the sorting of table ``P``, and ``h`` is the diagonal
share. Series are assembled either from a direct endpoint comparison or by
chaining comparisons of consecutive periods.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .errors import MethodError
from .ipf import IpfConfig, ipf_fit
from .nm import describe_periods, nm_transform
from .tables import (
    ContingencyTable,
    CounterfactualTable,
    Margins,
    homogamy_share,
    margins,
    merge_categories,
    merge_margins,
)


class Method(str, enum.Enum):
    NM = "NM"
    IPF = "IPF"


def as_method(method) -> Method:
    if isinstance(method, Method):
        return method
    try:
        return Method(str(method).upper())
    except ValueError:
        raise ValueError(f"unknown method {method!r}; expected 'nm' or 'ipf'") from None


class SeriesKind(str, enum.Enum):
    OBSERVED = "Observed"
    DIRECT_ENDPOINT = "DirectEndpoint"
    WITH_INTERMEDIATES = "WithIntermediates"
    FIXED_BASE_AVAILABILITY = "FixedBaseAvailability"
    CONSECUTIVE_CHAIN = "ConsecutiveChain"
    # ConsecutiveChain with each sorting step evaluated at the later
    # period's availability; a symmetry diagnostic.
    REVERSED_CHAIN = "ReversedChain"


ALL_KINDS = tuple(SeriesKind)


def as_kind(kind) -> SeriesKind:
    if isinstance(kind, SeriesKind):
        return kind
    for k in SeriesKind:
        if str(kind).lower() in (k.value.lower(), k.name.lower()):
            return k
    raise ValueError(
        f"unknown series kind {kind!r}; expected one of "
        + ", ".join(k.value for k in SeriesKind)
    )


def counterfactual_table(
    availability: Margins,
    sorting: ContingencyTable,
    method=Method.NM,
    mode=None,
    ipf_config: Optional[IpfConfig] = None,
) -> CounterfactualTable:
    """``g(A, P)``: the table with margins ``availability`` and the sorting of ``sorting``.

    When ``availability`` already equals the margins of ``sorting`` the
    sorting table itself is returned.
    """
    method = as_method(method)
    if availability.allclose(margins(sorting)):
        return CounterfactualTable(sorting, sorting.period, sorting.period, method.value)
    try:
        if method is Method.NM:
            return nm_transform(sorting, availability, mode)
        return ipf_fit(sorting, availability, ipf_config or IpfConfig())
    except MethodError as exc:
        raise exc.with_context(where=describe_periods(sorting.period, availability.period))


def counterfactual_share(
    availability: Margins,
    sorting: ContingencyTable,
    method=Method.NM,
    mode=None,
    ipf_config: Optional[IpfConfig] = None,
) -> float:
    """``f(A, P)``: homogamy share of :func:`counterfactual_table`."""
    if not sorting.is_square:
        raise ValueError(f"sorting table must be square, got {sorting.shape}")
    table = counterfactual_table(availability, sorting, method, mode, ipf_config)
    return homogamy_share(table.table)


@dataclass(frozen=True)
class DecompositionResult:
    """Biewen decomposition of the change in homogamy share between two periods.

    Effects are in percentage points. The four ``f_*`` fields are the
    underlying shares (fractions): ``f_a0_p0 = f(A0, P0)`` and so on, so both
    orderings of the counterfactual pair are available.
    """

    total_change: float
    availability_effect: float
    sorting_effect: float
    interaction_effect: float
    base_period: Optional[str]
    end_period: Optional[str]
    method: str
    f_a0_p0: float
    f_a1_p0: float
    f_a0_p1: float
    f_a1_p1: float


def _check_pair(t0: ContingencyTable, t1: ContingencyTable):
    for t in (t0, t1):
        if not t.is_square:
            raise ValueError(f"period {t.period}: table must be square, got {t.shape}")
    if t0.shape != t1.shape:
        raise ValueError(f"dimension mismatch: {t0.shape} vs {t1.shape}")
    if t0.row_labels != t1.row_labels or t0.col_labels != t1.col_labels:
        raise ValueError(f"category labels differ between periods {t0.period} and {t1.period}")


def biewen_decompose(
    t0: ContingencyTable,
    t1: ContingencyTable,
    method=Method.NM,
    mode=None,
    ipf_config: Optional[IpfConfig] = None,
) -> DecompositionResult:
    """Split ``h(Z1) - h(Z0)`` into availability, sorting and interaction terms."""
    _check_pair(t0, t1)
    method = as_method(method)
    a0, a1 = margins(t0), margins(t1)
    f00 = homogamy_share(t0)
    f11 = homogamy_share(t1)
    f10 = counterfactual_share(a1, t0, method, mode, ipf_config)
    f01 = counterfactual_share(a0, t1, method, mode, ipf_config)
    return DecompositionResult(
        total_change=100.0 * (f11 - f00),
        availability_effect=100.0 * (f10 - f00),
        sorting_effect=100.0 * (f01 - f00),
        interaction_effect=100.0 * (f11 - f10 - f01 + f00),
        base_period=t0.period,
        end_period=t1.period,
        method=method.value,
        f_a0_p0=f00,
        f_a1_p0=f10,
        f_a0_p1=f01,
        f_a1_p1=f11,
    )


@dataclass(frozen=True)
class SeriesPoint:
    """One plotted point; shares are fractions in ``[0, 1]``."""

    period: Optional[str]
    series_kind: SeriesKind
    observed_share: Optional[float] = None
    counterfactual_share: Optional[float] = None


def _chain(pairs: Sequence[DecompositionResult], start: float, reversed_order=False):
    # Running sum of per-pair sorting effects anchored at the base observed share.
    out = [(pairs[0].base_period, start)]
    level = start
    for r in pairs:
        if reversed_order:
            step = r.f_a1_p1 - r.f_a1_p0
        else:
            step = r.f_a0_p1 - r.f_a0_p0
        level += step
        out.append((r.end_period, level))
    return out


def _default_intermediates(tables):
    k = len(tables)
    return sorted({0, k // 2, k - 1}) if k > 2 else list(range(k))


def run_series(
    tables: Sequence[ContingencyTable],
    method=Method.NM,
    kinds: Iterable = ALL_KINDS,
    mode=None,
    ipf_config: Optional[IpfConfig] = None,
    intermediates: Optional[Sequence[str]] = None,
    pairs_out: Optional[List[DecompositionResult]] = None,
) -> List[SeriesPoint]:
    """Observed and counterfactual homogamy-share series over time-ordered tables.

    Parameters
    ----------
    tables : sequence of ContingencyTable
        At least two square tables with identical labels, oldest first.
    method : {"NM", "IPF"}
    kinds : iterable of SeriesKind or str
        Which series to emit; all of them by default.
    mode : FloorMode or str, optional
        ``Q-`` policy for NM.
    ipf_config : IpfConfig, optional
    intermediates : sequence of str, optional
        Periods used by the ``WithIntermediates`` series. The first and last
        periods are always included. Defaults to the first, middle and last
        periods.
    pairs_out : list, optional
        If given, per-pair :class:`DecompositionResult` objects of the
        consecutive chain are appended to it.

    Returns
    -------
    list of SeriesPoint
        Grouped by kind in the order requested, each in period order.
    """
    tables = list(tables)
    if len(tables) < 2:
        raise ValueError("need at least two periods")
    for t in tables[1:]:
        _check_pair(tables[0], t)
    method = as_method(method)
    kinds = [as_kind(k) for k in kinds]
    opts = dict(method=method, mode=mode, ipf_config=ipf_config)
    first, last = tables[0], tables[-1]
    base_share = homogamy_share(first)
    base_margins = margins(first)

    cache: Dict[tuple, DecompositionResult] = {}

    def pair(k0, k1):
        key = (k0, k1)
        if key not in cache:
            cache[key] = biewen_decompose(tables[k0], tables[k1], **opts)
        return cache[key]

    points: List[SeriesPoint] = []
    for kind in kinds:
        if kind is SeriesKind.OBSERVED:
            points += [SeriesPoint(t.period, kind, observed_share=homogamy_share(t)) for t in tables]
        elif kind is SeriesKind.DIRECT_ENDPOINT:
            end = counterfactual_share(base_margins, last, **opts)
            points += [
                SeriesPoint(first.period, kind, base_share, base_share),
                SeriesPoint(last.period, kind, homogamy_share(last), end),
            ]
        elif kind is SeriesKind.FIXED_BASE_AVAILABILITY:
            for t in tables:
                points.append(SeriesPoint(
                    t.period, kind, homogamy_share(t),
                    counterfactual_share(base_margins, t, **opts),
                ))
        elif kind in (SeriesKind.CONSECUTIVE_CHAIN, SeriesKind.REVERSED_CHAIN,
                      SeriesKind.WITH_INTERMEDIATES):
            if kind is SeriesKind.WITH_INTERMEDIATES:
                idx = _select(tables, intermediates)
            else:
                idx = list(range(len(tables)))
            results = [pair(a, b) for a, b in zip(idx, idx[1:])]
            if kind is SeriesKind.CONSECUTIVE_CHAIN and pairs_out is not None:
                pairs_out.extend(results)
            chain = _chain(results, base_share, kind is SeriesKind.REVERSED_CHAIN)
            for k, (period, level) in zip(idx, chain):
                points.append(SeriesPoint(period, kind, homogamy_share(tables[k]), level))
    return points


def _select(tables, intermediates):
    if intermediates is None:
        return _default_intermediates(tables)
    periods = [t.period for t in tables]
    wanted = {str(p) for p in intermediates}
    unknown = wanted - set(periods)
    if unknown:
        raise ValueError(f"intermediate periods not among inputs: {sorted(unknown)}")
    return [k for k, p in enumerate(periods) if k in (0, len(tables) - 1) or p in wanted]


def merge_commutation_gap(
    source: ContingencyTable,
    target: Margins,
    row_groups,
    col_groups,
    method=Method.IPF,
    mode=None,
    ipf_config: Optional[IpfConfig] = None,
):
    """Compare fit-then-merge with merge-then-fit.

    Returns
    -------
    gap : float
        Largest absolute cell difference between the two merged tables.
    fit_then_merge, merge_then_fit : ContingencyTable
    """
    method = as_method(method)
    fine = counterfactual_table(target, source, method, mode, ipf_config).table
    fit_then_merge = merge_categories(fine, row_groups, col_groups)
    coarse_source = merge_categories(source, row_groups, col_groups)
    coarse_target = merge_margins(target, row_groups, col_groups)
    merge_then_fit = counterfactual_table(coarse_target, coarse_source, method, mode, ipf_config).table
    gap = float(np.max(np.abs(fit_then_merge.cells - merge_then_fit.cells)))
    return gap, fit_then_merge, merge_then_fit

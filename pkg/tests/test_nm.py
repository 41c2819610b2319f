import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmdecomp import (
    ContingencyTable,
    DegenerateSource,
    Margins,
    NegativeCellError,
    NegativeSortingSource,
    dichotomize,
    ll_generalized,
    ll_simplified,
    margins,
    merge_commutation_gap,
    nm_2x2,
    nm_transform,
)

from support import MERGE_GROUPS, random_sorted_table

GOLDEN = [[30, 10], [10, 50]]
HALF = Margins([50, 50], [50, 50])


def random_target(rng, n, m, total=None):
    total = total or rng.uniform(50, 5000)
    rows = rng.dirichlet(np.full(n, 3.0)) * total
    cols = rng.dirichlet(np.full(m, 3.0)) * total
    return Margins(rows, cols)


class TestTwoByTwo:
    def test_golden(self):
        src = dichotomize(ContingencyTable(GOLDEN), 1, 1)
        cf = nm_2x2(src, HALF)
        hh = 14 * 25 / 24 + 25
        assert cf.cells[1, 1] == pytest.approx(39.583333333333336, abs=1e-12)
        np.testing.assert_allclose(cf.cells, [[hh, 50 - hh], [50 - hh, hh]], rtol=1e-12)
        assert ll_simplified(dichotomize(cf.table, 1, 1)) == pytest.approx(14 / 24, rel=1e-12)
        assert cf.method == "NM"

    def test_same_margins_returns_source(self):
        src = dichotomize(ContingencyTable(GOLDEN), 1, 1)
        cf = nm_2x2(src, margins(ContingencyTable(GOLDEN)))
        np.testing.assert_allclose(cf.cells, GOLDEN, rtol=1e-12)

    @pytest.mark.parametrize("target", [HALF, Margins([20, 80], [65, 35]), Margins([3, 7], [1, 9])])
    def test_maximal_sorting_maps_to_maximum(self, target):
        src = dichotomize(ContingencyTable([[40, 0], [20, 40]]), 1, 1)
        cf = nm_2x2(src, target)
        assert cf.cells[1, 1] == pytest.approx(min(target.row_totals[1], target.col_totals[1]))

    def test_monotone_in_source_ll(self):
        # fixed source margins (40, 60)/(40, 60); H,H runs over the non-negative range
        target = Margins([30, 70], [45, 55])
        out = []
        for hh in np.linspace(36, 60, 25):
            src = dichotomize(ContingencyTable([[hh - 20, 60 - hh], [60 - hh, hh]]), 1, 1)
            out.append(nm_2x2(src, target).cells[1, 1])
        assert np.all(np.diff(out) >= 0)

    def test_negative_sorting_source(self):
        src = dichotomize(ContingencyTable([[10, 40], [40, 10]]), 1, 1)
        with pytest.raises(NegativeSortingSource, match="below the random-matching"):
            nm_2x2(src, HALF)

    def test_degenerate_source(self):
        src = dichotomize(ContingencyTable([[0, 0], [4, 6]]), 1, 1)
        with pytest.raises(DegenerateSource):
            nm_2x2(src, HALF)

    def test_shape_check(self):
        src = dichotomize(ContingencyTable(GOLDEN), 1, 1)
        with pytest.raises(ValueError):
            nm_2x2(src, Margins([1, 1, 1], [1, 2]))


class TestTransform:
    def test_2x2_matches_closed_form(self):
        t = ContingencyTable(GOLDEN)
        np.testing.assert_allclose(
            nm_transform(t, HALF).cells, nm_2x2(dichotomize(t, 1, 1), HALF).cells, rtol=1e-14
        )

    @pytest.mark.parametrize("mode", ["integer", "continuous"])
    def test_identity(self, mode):
        rng = np.random.default_rng(11)
        for _ in range(10):
            t = random_sorted_table(rng)
            np.testing.assert_allclose(nm_transform(t, margins(t), mode).cells, t.cells,
                                       rtol=1e-9, atol=1e-9 * t.grand_total)

    def test_random_3x3_contract(self):
        rng = np.random.default_rng(5)
        done = 0
        while done < 20:
            t = random_sorted_table(rng, 3, 3, high=30)
            target = random_target(rng, 3, 3)
            try:
                cf = nm_transform(t, target, "continuous")
            except NegativeCellError:
                continue
            mg = margins(cf.table)
            np.testing.assert_allclose(mg.row_totals, target.row_totals, rtol=1e-9)
            np.testing.assert_allclose(mg.col_totals, target.col_totals, rtol=1e-9)
            np.testing.assert_allclose(ll_generalized(cf.table, "continuous").values,
                                       ll_generalized(t, "continuous").values, atol=1e-9)
            done += 1

    def test_tail_sums_match_closed_form(self):
        rng = np.random.default_rng(8)
        t = random_sorted_table(rng, 4, 3)
        rows = t.cells.sum(1) * [1.1, 0.9, 1.0, 1.0]
        cols = t.cells.sum(0) * rows.sum() / t.grand_total
        target = Margins(rows, cols)
        cf = nm_transform(t, target)
        for i in range(1, 4):
            for j in range(1, 3):
                rows = [target.row_totals[:i].sum(), target.row_totals[i:].sum()]
                cols = [target.col_totals[:j].sum(), target.col_totals[j:].sum()]
                expected = nm_2x2(dichotomize(t, i, j), Margins(rows, cols)).cells[1, 1]
                assert dichotomize(cf.table, i, j).hh == pytest.approx(expected, rel=1e-12)

    def test_integer_mode_preserves_integer_ll(self):
        rng = np.random.default_rng(9)
        done = 0
        while done < 10:
            t = random_sorted_table(rng)
            target = random_target(rng, 4, 4, total=t.grand_total)
            try:
                cf = nm_transform(t, target, "integer")
            except NegativeCellError:
                continue
            done += 1
            np.testing.assert_allclose(ll_generalized(cf.table, "integer").values,
                                       ll_generalized(t, "integer").values, atol=1e-9)

    def test_negative_cell_reported(self):
        # strong sorting pushed onto very different margins
        t = ContingencyTable(np.diag([50.0, 30, 20]) + 1)
        target = Margins([5, 5, 90], [90, 5, 5])
        with pytest.raises(NegativeCellError) as info:
            nm_transform(t, target)
        assert info.value.cell is not None
        assert "< 0" in str(info.value)

    def test_negative_sorting_split_is_tagged(self):
        z = np.array([[10, 10, 30], [10, 10, 10], [30, 10, 10]], dtype=float)
        with pytest.raises(NegativeSortingSource) as info:
            nm_transform(ContingencyTable(z, period="1970"), margins(ContingencyTable(np.ones((3, 3)))))
        assert info.value.split == (1, 1)
        assert "sorting 1970" in str(info.value)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="do not match"):
            nm_transform(ContingencyTable(GOLDEN), Margins([1, 1, 1], [1, 1, 1]))

    def test_periods_recorded(self):
        t = ContingencyTable(GOLDEN, period="1960")
        cf = nm_transform(t, Margins([50, 50], [50, 50], period="2015"))
        assert (cf.sorting_period, cf.availability_period) == ("1960", "2015")
        assert cf.table.period == "2015"

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["integer", "continuous"]))
    def test_margins_ll_idempotence(self, seed, mode):
        rng = np.random.default_rng(seed)
        t = random_sorted_table(rng)
        target = random_target(rng, 4, 4)
        try:
            cf = nm_transform(t, target, mode)
        except NegativeCellError:
            return
        mg = margins(cf.table)
        np.testing.assert_allclose(mg.row_totals, target.row_totals, rtol=1e-9, atol=1e-9 * target.grand_total)
        np.testing.assert_allclose(mg.col_totals, target.col_totals, rtol=1e-9, atol=1e-9 * target.grand_total)
        if mode == "continuous":
            np.testing.assert_allclose(ll_generalized(cf.table, mode).values,
                                       ll_generalized(t, mode).values, atol=1e-9)
        again = nm_transform(cf.table, target, mode)
        np.testing.assert_allclose(again.cells, cf.cells, rtol=1e-9, atol=1e-9 * target.grand_total)


def test_merge_commutation_harness_runs_for_nm():
    # demonstration only: no expectation on whether NM commutes with merging
    src = ContingencyTable(np.diag([20.0, 15, 25]) + 4)
    target = Margins([30, 35, 43], [40, 30, 38])
    gap, fine, coarse = merge_commutation_gap(src, target, MERGE_GROUPS, MERGE_GROUPS, "nm")
    assert np.isfinite(gap)
    assert fine.shape == coarse.shape == (2, 2)


def test_nm_commutes_with_merging():
    # Coarse splits are a subset of fine splits with identical tail sums.
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 20:
        src = random_sorted_table(rng)
        target = random_target(rng, 4, 4)
        groups = [[0], [1, 2], [3]]
        try:
            gap, _, _ = merge_commutation_gap(src, target, groups, [[0, 1], [2, 3]], "nm", "continuous")
        except NegativeCellError:
            continue
        assert gap <= 1e-9 * target.grand_total
        checked += 1

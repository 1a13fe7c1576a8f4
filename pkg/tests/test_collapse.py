import math

import numpy as np
import pytest

from vecdep.collapse import (
    CollapseSpec,
    collapse_group,
    kernel_similarity,
    multivariate_rank_indicator,
    pair_indices,
    pairwise_distance,
    weighted_average,
    extreme_average,
)
from vecdep.core import GroupedData
from vecdep.errors import UsageError


def make_data(values):
    values = np.asarray(values, dtype=float)
    names = tuple(f"c{i}" for i in range(values.shape[1]))
    return GroupedData(values=values, groups=[("g", tuple(range(values.shape[1])))], column_names=names)


class TestWeightedAverage:
    def test_equal_weights(self):
        assert weighted_average(np.array([1.0, 3.0]), np.array([0.5, 0.5])) == 2

    def test_first_coordinate(self):
        assert weighted_average(np.array([7.0, -7.0]), np.array([1.0, 0.0])) == 7

    def test_uniform_three(self):
        assert weighted_average(np.array([1.0, 2.0, 3.0]), np.full(3, 1 / 3)) == pytest.approx(2)

    def test_weight_sum_enforced(self):
        with pytest.raises(UsageError):
            CollapseSpec(kind="weighted-average", weights=(0.5, 0.6))


class TestExtremeAverage:
    def test_maximum(self):
        assert extreme_average(np.array([1.0, 5.0, 2.0]), 1, "largest") == 5

    def test_two_largest(self):
        assert extreme_average(np.array([1.0, 5.0, 2.0]), 2, "largest") == 3.5

    def test_full_mean(self):
        assert extreme_average(np.array([1.0, 5.0, 2.0]), 3, "largest") == pytest.approx(8 / 3)
        assert extreme_average(np.array([1.0, 5.0, 2.0]), 3, "smallest") == pytest.approx(8 / 3)

    def test_m_out_of_range(self):
        with pytest.raises(UsageError):
            CollapseSpec(kind="extreme-average", m=0)


class TestPairwiseDistance:
    def test_euclidean(self):
        assert pairwise_distance(np.array([0.0, 0.0]), np.array([3.0, 4.0]), "euclidean") == 5

    def test_identity(self):
        x = np.array([1.0, 1.0])
        for metric in ("euclidean", "manhattan", "canberra", "minkowski"):
            assert pairwise_distance(x, x, metric) == 0

    def test_manhattan(self):
        assert pairwise_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0]), "manhattan") == 2

    def test_canberra_zero_over_zero(self):
        assert pairwise_distance(np.array([0.0, 1.0]), np.array([0.0, 3.0]), "canberra") == 0.5

    def test_minkowski_order(self):
        x, y = np.array([0.0, 0.0]), np.array([1.0, 1.0])
        assert pairwise_distance(x, y, "minkowski", order=3.0) == pytest.approx(2 ** (1 / 3))


class TestKernelSimilarity:
    def test_gaussian_same_point(self):
        spec = CollapseSpec(kind="kernel", kernel="gaussian", sigma=2.3)
        x = np.array([1.0, 2.0])
        assert kernel_similarity(x, x, spec) == 1

    def test_linear_dot_product(self):
        spec = CollapseSpec(kind="kernel", kernel="linear")
        assert kernel_similarity(np.array([1.0, 2.0]), np.array([3.0, 4.0]), spec) == 11

    def test_polynomial(self):
        spec = CollapseSpec(kind="kernel", kernel="polynomial", degree=2)
        assert kernel_similarity(np.array([1.0]), np.array([2.0]), spec) == 9

    def test_von_mises_peak(self):
        spec = CollapseSpec(kind="kernel", kernel="von-mises", kappa=(8.0,))
        x = np.array([0.3])
        assert kernel_similarity(x, x, spec) == pytest.approx(math.exp(8), rel=1e-12)

    def test_sigma_positive(self):
        with pytest.raises(UsageError):
            CollapseSpec(kind="kernel", kernel="gaussian", sigma=-1.0)


class TestMultivariateRankIndicator:
    def test_dominated(self):
        assert multivariate_rank_indicator(np.array([1.0, 2.0]), np.array([2.0, 3.0])) == 1

    def test_incomparable(self):
        assert multivariate_rank_indicator(np.array([1.0, 4.0]), np.array([2.0, 3.0])) == 0

    def test_weak_inequality(self):
        x = np.array([1.0, 4.0])
        assert multivariate_rank_indicator(x, x) == 1


class TestCollapseGroup:
    def test_p1_maximum_identity(self):
        gd = make_data([[1.0], [2.0], [3.0]])
        out = collapse_group(gd, "g", CollapseSpec(kind="maximum"))
        assert out.arity == "one-sample"
        np.testing.assert_allclose(out.values, [1, 2, 3])

    def test_p1_euclidean_pairs(self):
        gd = make_data([[1.0], [2.0], [3.0]])
        out = collapse_group(gd, "g", CollapseSpec(kind="distance", metric="euclidean"))
        assert out.arity == "pairwise"
        np.testing.assert_allclose(out.values, [1, 2, 1])

    def test_pit_totally_ordered(self):
        gd = make_data([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        out = collapse_group(gd, "g", CollapseSpec(kind="pit"))
        np.testing.assert_allclose(out.values, [0, 0.5, 1])

    def test_pairwise_length(self):
        rng = np.random.default_rng(0)
        gd = make_data(rng.standard_normal((12, 3)))
        out = collapse_group(gd, "g", CollapseSpec(kind="multivariate-rank"))
        assert out.values.size == 12 * 11 // 2

    def test_pair_order_lexicographic(self):
        i, j = pair_indices(4)
        assert list(zip(i.tolist(), j.tolist())) == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        ]

    def test_max_equals_extreme_average_m1(self):
        rng = np.random.default_rng(1)
        gd = make_data(rng.standard_normal((9, 4)))
        a = collapse_group(gd, "g", CollapseSpec(kind="maximum")).values
        b = collapse_group(gd, "g", CollapseSpec(kind="extreme-average", m=1, direction="largest")).values
        np.testing.assert_array_equal(a, b)
        c = collapse_group(gd, "g", CollapseSpec(kind="minimum")).values
        d = collapse_group(gd, "g", CollapseSpec(kind="extreme-average", m=1, direction="smallest")).values
        np.testing.assert_array_equal(c, d)

    def test_rank_on_margins_invariance(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((15, 2))
        y = np.column_stack([np.exp(x[:, 0]), np.arctan(x[:, 1])])
        spec = CollapseSpec(kind="distance", rank_on_margins=True)
        a = collapse_group(make_data(x), "g", spec).values
        b = collapse_group(make_data(y), "g", spec).values
        np.testing.assert_array_equal(a, b)

    def test_distance_matches_scalar_op(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((8, 3))
        gd = make_data(x)
        for metric in ("euclidean", "manhattan", "canberra", "minkowski"):
            spec = CollapseSpec(kind="distance", metric=metric)
            out = collapse_group(gd, "g", spec).values
            ii, jj = pair_indices(8)
            expected = [
                pairwise_distance(x[a], x[b], metric, order=spec.order)
                for a, b in zip(ii, jj)
            ]
            np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_kernel_median_heuristic_default(self):
        rng = np.random.default_rng(4)
        gd = make_data(rng.standard_normal((10, 2)))
        out = collapse_group(gd, "g", CollapseSpec(kind="kernel", kernel="gaussian"))
        assert np.all(out.values > 0) and np.all(out.values <= 1)

    def test_unknown_group(self):
        gd = make_data([[1.0], [2.0]])
        with pytest.raises(UsageError):
            collapse_group(gd, "nope", CollapseSpec(kind="maximum"))

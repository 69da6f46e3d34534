"""Tests for random streams, derangements and batches."""

import numpy as np
import pytest

from models.errors import ConfigurationError, SamplingError
from sampling import shuffles
from sampling.batches import Batch, gaussian_pair_batch, marginal_view
from sampling.distributions import draw
from sampling.rng import Rng
from sampling.shuffles import Shuffle, count_fixed_points, derange, permute_naive


def test_child_streams_are_reproducible_and_distinct():
    a = Rng(7).child(3).generator.random(4)
    b = Rng(7).child(3).generator.random(4)
    c = Rng(7).child(4).generator.random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_child_seed_matches_stream_key():
    seed = Rng(5).child(2).child_seed(0)
    assert seed.spawn_key == (2, 0)
    assert seed.entropy == 5


@pytest.mark.parametrize("mode", ["shift", "random"])
@pytest.mark.parametrize("n", [2, 3, 64])
def test_derange_has_no_fixed_points(mode, n, rng):
    shuffle = derange(n, mode, rng)
    assert shuffle.is_derangement
    assert count_fixed_points(shuffle.perm) == 0
    assert np.array_equal(np.sort(shuffle.perm), np.arange(n))


def test_shift_derangement_pairs_with_next():
    shuffle = derange(4, "shift", Rng(0))
    assert shuffle.perm.tolist() == [1, 2, 3, 0]


def test_derange_two_is_the_swap(rng):
    assert derange(2, "random", rng).perm.tolist() == [1, 0]


@pytest.mark.parametrize("n", [0, 1])
def test_derange_needs_two(n, rng):
    with pytest.raises(ConfigurationError):
        derange(n, "shift", rng)


def test_derange_unknown_mode(rng):
    with pytest.raises(ConfigurationError):
        derange(5, "rotate", rng)


def test_rejection_budget_raises_sampling_error(rng, monkeypatch):
    monkeypatch.setattr(shuffles, "MAX_REJECTION_TRIES", 0)
    with pytest.raises(SamplingError):
        derange(10, "random", rng)


def test_naive_permutation_counts_fixed_points(rng):
    counts = [permute_naive(20, rng).fixed_points for _ in range(2000)]
    # a uniform permutation has one fixed point on average
    assert np.mean(counts) == pytest.approx(1.0, abs=0.1)


def test_naive_permutation_is_uniform(rng):
    """
    Test that all 6 permutations of 3 items are drawn with probability 1/6,
    each empirical frequency within 5 sigma at 1e5 draws.
    """
    draws = 100_000
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(draws):
        key = tuple(permute_naive(3, rng).perm.tolist())
        counts[key] = counts.get(key, 0) + 1

    sigma = np.sqrt(draws * (1 / 6) * (5 / 6))
    assert len(counts) == 6
    for count in counts.values():
        assert abs(count - draws / 6) <= 5 * sigma


def test_shuffle_from_perm_validates():
    assert Shuffle.from_perm(np.array([2, 1, 0])).fixed_points == 1
    with pytest.raises(ConfigurationError):
        Shuffle.from_perm(np.array([0, 0, 1]))


def test_gaussian_pair_batch_correlation(rng):
    batch = gaussian_pair_batch(2, 0.8, 20000, rng)
    assert batch.x.shape == (2, 20000)
    corr = np.corrcoef(batch.x[0], batch.y[0])[0, 1]
    assert corr == pytest.approx(0.8, abs=0.02)


@pytest.mark.parametrize("rho", [-0.1, 1.0])
def test_gaussian_pair_batch_rejects_rho(rho, rng):
    with pytest.raises(ConfigurationError):
        gaussian_pair_batch(1, rho, 4, rng)


def test_marginal_view_permutes_y_only():
    batch = Batch(x=np.arange(4.0).reshape(1, 4), y=10 + np.arange(4.0).reshape(1, 4))
    view = marginal_view(batch, derange(4, "shift", Rng(0)))
    assert np.array_equal(view.x, batch.x)
    assert view.y.tolist() == [[11.0, 12.0, 13.0, 10.0]]


def test_marginal_view_length_mismatch():
    batch = Batch(x=np.zeros((1, 3)), y=np.zeros((1, 3)))
    with pytest.raises(ConfigurationError):
        marginal_view(batch, derange(4, "shift", Rng(0)))


def test_batch_shape_validation():
    with pytest.raises(ConfigurationError):
        Batch(x=np.zeros((1, 3)), y=np.zeros((1, 4)))


@pytest.mark.parametrize(
    "dist, params, mean",
    [
        ("normal", {"mean": 2.0, "std": 0.5}, 2.0),
        ("uniform", {"low": -1.0, "high": 3.0}, 1.0),
        ("bernoulli", {"p": 0.3}, 0.3),
        ("exponential", {"rate": 2.0}, 0.5),
    ],
)
def test_draw_means(dist, params, mean, rng):
    assert np.mean(draw(dist, 50000, rng, **params)) == pytest.approx(mean, abs=0.02)


def test_draw_cauchy_median(rng):
    samples = draw("cauchy", 50000, rng, scale=2.0)
    assert np.median(np.abs(samples)) == pytest.approx(2.0, rel=0.05)


@pytest.mark.parametrize(
    "dist, params",
    [("gamma", {}), ("bernoulli", {}), ("uniform", {"low": 1.0, "high": 1.0}), ("cauchy", {"scale": 0.0})],
)
def test_draw_rejects_bad_input(dist, params, rng):
    with pytest.raises(ConfigurationError):
        draw(dist, 3, rng, **params)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hchange.estimator import (
    empirical_cdf,
    estimate_links,
    link_at,
    link_matrix,
    sample_quantile,
    summarize_links,
)
from hchange.panel import EvaluationGrid, Panel, PanelPair


def brute_link(x_column, y_column, x):
    """Direct evaluation with exact rationals."""
    G = Fraction(sum(1 for v in y_column if v <= x), len(y_column))
    r = math.ceil(len(x_column) * G)
    r = min(max(r, 1), len(x_column))
    return sorted(x_column)[r - 1]


@pytest.mark.parametrize("x, expected", [(2, 2 / 3), (0.5, 0.0), (3, 1.0)])
def test_empirical_cdf(x, expected):
    assert empirical_cdf([1, 2, 3], x) == expected


def test_sample_quantile_examples():
    s = [10, 20, 30, 40]
    assert sample_quantile(s, 0.6) == 30
    # the [N p] + 1 convention agrees when N p is not an integer
    assert math.floor(4 * 0.6) + 1 == 3
    assert sample_quantile(s, 0.0) == 10
    assert sample_quantile(s, 1.0) == 40
    assert sample_quantile(s, 0.5) == 20
    assert sample_quantile(list(range(1, 11)), 0.7) == 7
    with pytest.raises(ValueError):
        sample_quantile([], 0.5)


def test_link_at_examples():
    assert link_at([1, 2, 3], [1, 2, 3], 2) == 2
    assert link_at([0, 10, 20, 30], [1, 2, 3, 4], 2.5) == 10
    assert link_at([5, -1, 3], [1, 2, 3], -10) == -1


def test_link_matrix_matches_brute_force(rng):
    for _ in range(30):
        Nx, Ny, n = rng.integers(2, 15, size=3)
        x = rng.integers(-5, 5, size=(Nx, n)).astype(float)
        y = rng.integers(-5, 5, size=(Ny, n)).astype(float)
        pts = np.unique(rng.integers(-7, 7, size=6)).astype(float)
        h = link_matrix(x, y, pts)
        for t in range(n):
            for i, p in enumerate(pts):
                assert h[t, i] == brute_link(list(x[:, t]), list(y[:, t]), p)
                assert h[t, i] == link_at(x[:, t], y[:, t], p)


def test_link_matrix_loop_branch(monkeypatch, rng):
    import hchange.estimator as est

    x = rng.standard_normal((40, 6))
    y = rng.standard_normal((30, 6))
    pts = np.linspace(-1, 1, 7)
    expected = link_matrix(x, y, pts)
    monkeypatch.setattr(est, "_BROADCAST_LIMIT", 0)
    np.testing.assert_array_equal(est.link_matrix(x, y, pts), expected)


def test_identical_panels_constant_columns():
    base = np.array([0.3, -1.2, 2.0, 0.7, 1.1])
    cols = np.column_stack([np.roll(base, k) for k in range(4)])
    pair = PanelPair(Panel(cols, name="x"), Panel(cols, name="y"), "paired")
    grid = EvaluationGrid([-1.2, 0.7, 2.0])
    est = estimate_links(pair, grid)
    np.testing.assert_array_equal(est.h_hat, np.tile(grid.points, (4, 1)))
    np.testing.assert_array_equal(est.sigma_hat, 0.0)
    assert est.degenerate.all()


def test_summary_two_points():
    est = summarize_links(np.array([[0.0], [2.0]]))
    assert est.h_bar[0] == 1.0
    assert est.sigma_hat[0] ** 2 == 1.0
    assert not est.degenerate[0]


def test_summary_constant_column_exactly_degenerate():
    est = summarize_links(np.full((3, 1), 0.1))
    assert est.sigma_hat[0] == 0.0 and est.h_bar[0] == 0.1 and est.degenerate[0]


def test_gaussian_identity_link(rng):
    N, n = 2000, 5
    pair = PanelPair(
        Panel(rng.standard_normal((N, n)), name="x"),
        Panel(rng.standard_normal((N, n)), name="y"),
    )
    grid = EvaluationGrid([-1.0, 0.0, 1.0])
    est = estimate_links(pair, grid)
    # sd of h_hat(0) is about sqrt(pi/2 * 2/N) = 0.028
    np.testing.assert_allclose(est.h_hat, np.tile(grid.points, (n, 1)), atol=0.15)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
columns = st.lists(finite, min_size=1, max_size=30)


@settings(max_examples=200, deadline=None)
@given(columns, columns, finite, finite)
def test_link_properties(xc, yc, a, b):
    lo, hi = min(a, b), max(a, b)
    h_lo, h_hi = link_at(xc, yc, lo), link_at(xc, yc, hi)
    assert h_lo <= h_hi
    assert min(xc) <= h_lo <= max(xc)
    assert h_lo == brute_link(xc, yc, lo)
    # strictly increasing map applied to X carries through exactly
    assert link_at(np.arctan(xc), yc, lo) == np.arctan(h_lo)


@settings(max_examples=200, deadline=None)
@given(columns, finite)
def test_identity_on_equal_samples(sample, x):
    h = link_at(sample, sample, x)
    below = [v for v in sample if v <= x]
    assert h == (max(below) if below else min(sample))

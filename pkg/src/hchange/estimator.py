"""Empirical link estimator.

At each time ``t`` the link ``h_t`` carrying Y's distribution onto X's is
estimated by composing the empirical CDF of the Y column with the sample
quantile of the X column::

    h_hat_t(x) = X_(r),t   with   r = clamp(ceil(N_x * G_hat_t(x)), 1, N_x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .panel import EvaluationGrid, PanelPair

# broadcasting budget (cells) before falling back to a per-column loop
_BROADCAST_LIMIT = 4_000_000


@dataclass(frozen=True)
class LinkEstimate:
    h_hat: np.ndarray  # (n, M)
    h_bar: np.ndarray  # (M,)
    sigma_hat: np.ndarray  # (M,)
    degenerate: np.ndarray  # (M,) bool


def empirical_cdf(sample, x: float) -> float:
    """Fraction of ``sample`` not exceeding ``x``."""
    sample = np.asarray(sample, dtype=float)
    if sample.size < 1:
        raise ValueError("empirical_cdf needs a nonempty sample")
    return np.count_nonzero(sample <= x) / sample.size


def quantile_rank(N: int, p: float) -> int:
    """1-based rank ``clamp(ceil(N p), 1, N)`` used by :func:`sample_quantile`."""
    # round away float noise such as 10 * 0.7 == 7.000000000000001
    r = math.ceil(round(N * p, 9))
    return min(max(r, 1), N)


def sample_quantile(sorted_sample, p: float) -> float:
    """Order statistic ``X_(r)`` with ``r = clamp(ceil(N p), 1, N)``.

    For non-integer ``N p`` this is the usual ``[N p] + 1``; for integer
    ``N p`` it picks ``X_(N p)``, which makes the link estimator the identity
    when both panels hold the same sample.
    """
    sorted_sample = np.asarray(sorted_sample, dtype=float)
    if sorted_sample.size < 1:
        raise ValueError("sample_quantile needs a nonempty sample")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(sorted_sample[quantile_rank(sorted_sample.size, p) - 1])


def link_at(x_column, y_column, x: float) -> float:
    """Estimate ``h_t(x)`` from one time column of each panel."""
    x_column = np.asarray(x_column, dtype=float)
    y_column = np.asarray(y_column, dtype=float)
    if x_column.size < 1 or y_column.size < 1:
        raise ValueError("link_at needs nonempty columns")
    # integer form of ceil(N_x * count / N_y): no rounding issues
    count = np.count_nonzero(y_column <= x)
    N_x, N_y = x_column.size, y_column.size
    r = min(max(-(-N_x * count // N_y), 1), N_x)
    return float(np.sort(x_column, kind="stable")[r - 1])


def _cdf_counts(y: np.ndarray, points: np.ndarray) -> np.ndarray:
    """``counts[t, i] = #{j : y[j, t] <= points[i]}``."""
    N_y, n = y.shape
    if N_y * n * points.size <= _BROADCAST_LIMIT:
        return np.count_nonzero(y[:, :, None] <= points, axis=0)
    ys = np.sort(y, axis=0)
    return np.stack([np.searchsorted(ys[:, t], points, side="right") for t in range(n)])


def link_matrix(x: np.ndarray, y: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Vectorised :func:`link_at` over all time columns and grid points.

    ``x`` is ``(N_x, n)``, ``y`` is ``(N_y, n)``; returns ``(n, M)``.
    """
    N_x, n = x.shape
    N_y = y.shape[0]
    counts = _cdf_counts(y, points)
    r = np.clip(-(-N_x * counts // N_y), 1, N_x)
    xs = np.sort(x, axis=0, kind="stable")
    return xs[r - 1, np.arange(n)[:, None]]


def summarize_links(h_hat: np.ndarray) -> LinkEstimate:
    """Time means, standard deviations and degeneracy flags of ``h_hat``."""
    h_hat = np.asarray(h_hat, dtype=float)
    h_bar = h_hat.mean(axis=0)
    degenerate = np.ptp(h_hat, axis=0) == 0
    sigma_hat = np.sqrt(np.mean((h_hat - h_bar) ** 2, axis=0))
    # constant columns: mean() can differ from the common value in the last ulp
    sigma_hat[degenerate] = 0.0
    h_bar[degenerate] = h_hat[0, degenerate]
    return LinkEstimate(h_hat, h_bar, sigma_hat, degenerate)


def estimate_links(pair: PanelPair, grid: EvaluationGrid) -> LinkEstimate:
    return summarize_links(link_matrix(pair.x.values, pair.y.values, grid.points))

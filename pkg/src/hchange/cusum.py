"""CUSUM process of the estimated link and the aggregated sup statistic."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .estimator import LinkEstimate
from .panel import EvaluationGrid


@dataclass(frozen=True)
class CusumResult:
    a_values: np.ndarray
    s_m: float
    degenerate_points: tuple


def cusum_path(h_col, h_bar: float, sigma_hat: float) -> np.ndarray:
    """Normalised partial sums ``B_n(k/n, x)`` for ``k = 1..n``.

    Entry ``k`` is ``(sum_{t<=k} h_t - k * h_bar) / (sigma_hat * sqrt(n))``.
    A zero ``sigma_hat`` yields the zero path.
    """
    h_col = np.asarray(h_col, dtype=float)
    n = h_col.size
    if n < 2:
        raise ValueError("cusum_path needs at least two time points")
    if sigma_hat < 0:
        raise ValueError("sigma_hat must be nonnegative")
    if sigma_hat == 0:
        return np.zeros(n)
    path = np.cumsum(h_col - h_bar) / (sigma_hat * np.sqrt(n))
    path[-1] = 0.0
    return path


def sup_statistic(path) -> float:
    path = np.asarray(path, dtype=float)
    if path.size < 1:
        raise ValueError("empty path")
    return float(np.max(np.abs(path)))


def sup_values(h_hat: np.ndarray, h_bar: np.ndarray, sigma_hat: np.ndarray) -> np.ndarray:
    """``A(x_i)`` for every column of ``h_hat`` at once (0 where sigma is 0)."""
    n = h_hat.shape[0]
    sums = np.cumsum(h_hat - h_bar, axis=0)[:-1]
    peak = np.max(np.abs(sums), axis=0) if n > 1 else np.zeros(h_hat.shape[1])
    out = np.zeros_like(peak)
    ok = sigma_hat > 0
    out[ok] = peak[ok] / (sigma_hat[ok] * np.sqrt(n))
    return out


def weighted_mean(a_values: np.ndarray, weights: np.ndarray) -> float:
    return float(np.dot(weights, a_values) / a_values.size)


def s_m_statistic(estimate: LinkEstimate, grid: EvaluationGrid) -> CusumResult:
    """Per-point sup statistics and their weighted average ``S_M``."""
    if estimate.h_hat.shape[1] != grid.M:
        raise ValueError("estimate and grid sizes disagree")
    a_values = sup_values(estimate.h_hat, estimate.h_bar, estimate.sigma_hat)
    degenerate = tuple(int(i) for i in np.flatnonzero(estimate.degenerate))
    if len(degenerate) == grid.M:
        warnings.warn("every grid point is degenerate; S_M is 0", stacklevel=2)
    return CusumResult(a_values, weighted_mean(a_values, grid.weights), degenerate)

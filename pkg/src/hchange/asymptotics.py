"""Limiting law of ``sup |B(tau)|`` for a Brownian bridge and related helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

ASSUMPTION4_WARN = 0.1


@dataclass(frozen=True)
class KolmogorovLaw:
    """Series ``F(z) = 1 + 2 sum_k (-1)^k exp(-2 k^2 z^2)``, truncated."""

    truncation: int = 100
    tolerance: float = 1e-12

    def cdf(self, z: float) -> float:
        """Truncated series, clamped to ``[0, 1]``.

        Values below ``tolerance`` are returned as 0: there the alternating
        sum is pure cancellation noise (true mass under 1e-12 for z < 0.27).
        """
        if z <= 0:
            return 0.0
        terms = [1.0]
        for k in range(1, self.truncation + 1):
            term = math.exp(-2.0 * k * k * z * z)
            terms.append(2.0 * term if k % 2 == 0 else -2.0 * term)
            if term < self.tolerance:
                break
        else:
            return 0.0
        value = math.fsum(terms)
        if value < self.tolerance:
            return 0.0
        return min(value, 1.0)

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        lo, hi = 1e-6, 10.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < p:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        return 0.5 * (lo + hi)


_DEFAULT_LAW = KolmogorovLaw()


def kolmogorov_cdf(z: float, law: KolmogorovLaw = _DEFAULT_LAW) -> float:
    return law.cdf(z)


def kolmogorov_quantile(p: float, law: KolmogorovLaw = _DEFAULT_LAW) -> float:
    """Inverse of :func:`kolmogorov_cdf` by bisection on ``[1e-6, 10]``."""
    return law.quantile(p)


def asymptotic_single_point_test(a_value: float, alpha: float = 0.05) -> tuple[bool, float]:
    """Compare one sup statistic to its limiting law.

    Returns ``(reject, p_value)`` with ``p_value = 1 - F(a_value)``.
    """
    if a_value < 0:
        raise ValueError("a_value must be nonnegative")
    p_value = 1.0 - kolmogorov_cdf(a_value)
    return p_value < alpha, p_value


def theoretical_sigma(G: float, f_at_h: float, N_x: int, N_y: int) -> tuple[float, float]:
    """Asymptotic variances ``(sigma_t^2, sigma_{1,t}^2)`` of the link estimator.

    ``sigma_t^2 = G (1 - G) / f(h(x))^2`` and
    ``sigma_{1,t}^2 = sigma_t^2 (N_x + N_y) / (N_x N_y)``.
    """
    if not 0.0 < G < 1.0:
        raise ValueError(f"G must lie strictly between 0 and 1, got {G}")
    if f_at_h <= 0:
        raise ValueError(f"density must be positive, got {f_at_h}")
    sigma_sq = G * (1.0 - G) / f_at_h**2
    return sigma_sq, sigma_sq * (N_x + N_y) / (N_x * N_y)


def assumption4_ratio(n: int, N_x: int, N_y: int) -> float:
    """``n (N_x + N_y) / (N_x N_y)``; should be small for the asymptotics to apply."""
    if min(n, N_x, N_y) <= 0:
        raise ValueError("n, N_x and N_y must be positive")
    return n * (N_x + N_y) / (N_x * N_y)

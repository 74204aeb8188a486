"""Subject-level bootstrap of the ``S_M`` statistic and the resulting test."""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .asymptotics import ASSUMPTION4_WARN, assumption4_ratio
from .cusum import s_m_statistic, sup_values, weighted_mean
from .estimator import link_matrix, summarize_links
from .panel import EvaluationGrid, Panel, PanelPair

RECENTERED = "recentered"
LITERAL = "literal"
BOOT_METHODS = (RECENTERED, LITERAL)


def derive_seed(seed: int, *keys: int) -> int:
    """Child 64-bit seed determined by ``(seed, *keys)`` only."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def fresh_seed() -> int:
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class BootstrapConfig:
    """Bootstrap settings.

    ``method="recentered"`` computes each replicate statistic on the
    deviation ``h*_t - h_hat_t`` of the resampled link from the original one,
    so the reference distribution reflects estimation noise only.
    ``method="literal"`` recomputes ``S_M`` on the resample as is.
    """

    B: int = 200
    alpha: float = 0.05
    seed: int = 0
    method: str = RECENTERED
    workers: int = 1

    def __post_init__(self):
        if self.B < 1:
            raise ValueError(f"B must be >= 1, got {self.B}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.method not in BOOT_METHODS:
            raise ValueError(f"unknown bootstrap method {self.method!r}")


@dataclass
class TestReport:
    s_m: float
    a_values: list
    boot_stats: list
    p_value: float
    reject: bool
    alpha: float
    diagnostics: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def resample_pair(pair: PanelPair, rng: np.random.Generator) -> PanelPair:
    """Draw whole subject trajectories with replacement, keeping panel sizes.

    Paired panels are resampled jointly (one index draw for both).
    """
    ix = rng.integers(0, pair.x.N, size=pair.x.N)
    iy = ix if pair.paired else rng.integers(0, pair.y.N, size=pair.y.N)
    # resampled rows repeat subjects, so ids become positions
    x = Panel(pair.x.values[ix], range(pair.x.N), pair.x.name)
    y = Panel(pair.y.values[iy], range(pair.y.N), pair.y.name)
    return PanelPair(x, y, pair.pairing)


def _replicate(pair, points, weights, h_hat, cfg, b) -> float:
    rng = stream(cfg.seed, b)
    ix = rng.integers(0, pair.x.N, size=pair.x.N)
    iy = ix if pair.paired else rng.integers(0, pair.y.N, size=pair.y.N)
    h_star = link_matrix(pair.x.values[ix], pair.y.values[iy], points)
    if cfg.method == RECENTERED:
        h_star = h_star - h_hat
    est = summarize_links(h_star)
    return weighted_mean(sup_values(est.h_hat, est.h_bar, est.sigma_hat), weights)


def _replicate_block(args) -> list:
    pair, points, weights, h_hat, cfg, idx = args
    return [_replicate(pair, points, weights, h_hat, cfg, b) for b in idx]


def bootstrap_distribution(
    pair: PanelPair, grid: EvaluationGrid, cfg: BootstrapConfig = BootstrapConfig()
) -> np.ndarray:
    """Bootstrap replicates ``S_M^{*b}``, ``b = 1..B``.

    Replicate ``b`` draws from a stream derived from ``(cfg.seed, b)``, so the
    result does not depend on ``cfg.workers``.
    """
    h_hat = link_matrix(pair.x.values, pair.y.values, grid.points)
    args = (pair, grid.points, grid.weights, h_hat, cfg)
    indices = range(1, cfg.B + 1)
    if cfg.workers > 1 and cfg.B > 1:
        blocks = [list(indices[i :: cfg.workers]) for i in range(cfg.workers)]
        out = np.empty(cfg.B)
        jobs = [args + (blk,) for blk in blocks]
        with ProcessPoolExecutor(cfg.workers) as pool:
            for idx, vals in zip(blocks, pool.map(_replicate_block, jobs)):
                out[np.asarray(idx) - 1] = vals
        return out
    return np.array([_replicate(*args, b) for b in indices])


def bootstrap_critical_value(boot_stats, alpha: float) -> float:
    """Empirical ``(1 - alpha)`` quantile: order statistic ``ceil((1 - alpha) B)``."""
    ordered = np.sort(np.asarray(boot_stats, dtype=float))
    k = math.ceil(round((1.0 - alpha) * ordered.size, 9))
    return float(ordered[min(max(k, 1), ordered.size) - 1])


def bootstrap_p_value(s_m: float, boot_stats) -> float:
    boot_stats = np.asarray(boot_stats, dtype=float)
    return (1 + int(np.count_nonzero(boot_stats >= s_m))) / (boot_stats.size + 1)


def run_test(
    pair: PanelPair, grid: EvaluationGrid, cfg: BootstrapConfig = BootstrapConfig()
) -> TestReport:
    """Bootstrap test of a time-constant link between the two panels."""
    notes = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        h_hat = link_matrix(pair.x.values, pair.y.values, grid.points)
        res = s_m_statistic(summarize_links(h_hat), grid)
    all_degenerate = len(res.degenerate_points) == grid.M
    boot = bootstrap_distribution(pair, grid, cfg)
    p_value = bootstrap_p_value(res.s_m, boot)
    if all_degenerate:
        notes.append("all grid points degenerate: estimated link is constant in time")
        reject = False
    else:
        reject = bool(res.s_m > bootstrap_critical_value(boot, cfg.alpha))
    ratio = assumption4_ratio(pair.n, pair.x.N, pair.y.N)
    if ratio > ASSUMPTION4_WARN:
        notes.append(
            f"n(N_x+N_y)/(N_x N_y) = {ratio:.4g} exceeds {ASSUMPTION4_WARN}; "
            "asymptotics may be unreliable"
        )
    if grid.degenerate:
        notes.append("pooled Y values are identical; grid reduced to one point")
    diagnostics = {
        "assumption4_ratio": ratio,
        "degenerate_points": list(res.degenerate_points),
        "pairing": pair.pairing.value,
        "N_x": pair.x.N,
        "N_y": pair.y.N,
        "n": pair.n,
        "M": grid.M,
        "B": cfg.B,
        "seed": int(cfg.seed),
        "bootstrap_method": cfg.method,
        "grid_points": [float(v) for v in grid.points],
        "warnings": notes,
    }
    return TestReport(
        s_m=float(res.s_m),
        a_values=[float(a) for a in res.a_values],
        boot_stats=[float(v) for v in boot],
        p_value=float(p_value),
        reject=reject,
        alpha=float(cfg.alpha),
        diagnostics=diagnostics,
    )

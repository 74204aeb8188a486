"""Generative models, time-varying link alternatives and power studies."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bootstrap import BootstrapConfig, derive_seed, run_test, stream
from .panel import DEFAULT_GRID_SIZE, Pairing, Panel, PanelPair, default_grid

MODELS = ("iid_gaussian", "ar1", "paired_gaussian")
ALTERNATIVES = ("null", "A1", "A2", "A3", "A4", "A5")
POWER_COLUMNS = [
    "model", "alternative", "N", "n", "B", "alpha", "replications", "power", "stderr", "seed",
]


@dataclass(frozen=True)
class ScenarioConfig:
    model: str = "iid_gaussian"
    alternative: str = "null"
    N: int = 50
    n: int = 20
    rho: float = 0.5
    a4_rate: float = 0.01
    a5_rate: float = 0.05
    squared_logistic: bool = False
    replications: int = 500
    cfg: BootstrapConfig = field(default_factory=BootstrapConfig)
    M: int = DEFAULT_GRID_SIZE
    workers: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.alternative not in ALTERNATIVES:
            raise ValueError(
                f"unknown alternative {self.alternative!r}; choose from {ALTERNATIVES}"
            )
        if self.N < 2 or self.n < 2:
            raise ValueError("N and n must both be >= 2")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.M < 1:
            raise ValueError("M must be >= 1")


@dataclass(frozen=True)
class PowerResult:
    scenario: ScenarioConfig
    power: float
    mc_stderr: float
    runtime_seconds: float
    rejections: int = 0

    def row(self) -> dict:
        sc = self.scenario
        return {
            "model": sc.model,
            "alternative": sc.alternative,
            "N": sc.N,
            "n": sc.n,
            "B": sc.cfg.B,
            "alpha": sc.cfg.alpha,
            "replications": sc.replications,
            "power": self.power,
            "stderr": self.mc_stderr,
            "seed": sc.cfg.seed,
        }


def gen_iid_gaussian(N: int, n: int, rng: np.random.Generator, name: str = "y") -> Panel:
    return Panel(rng.standard_normal((N, n)), name=name)


def gen_ar1(N: int, n: int, rho: float, rng: np.random.Generator, name: str = "y") -> Panel:
    """Stationary AR(1) trajectories with unit-variance innovations.

    The first value is drawn from the stationary law ``N(0, 1 / (1 - rho^2))``
    so every column has the same marginal distribution.
    """
    if not -1.0 < rho < 1.0:
        raise ValueError(f"|rho| must be < 1, got {rho}")
    eps = rng.standard_normal((N, n))
    out = np.empty((N, n))
    out[:, 0] = eps[:, 0] / math.sqrt(1.0 - rho * rho)
    for t in range(1, n):
        out[:, t] = rho * out[:, t - 1] + eps[:, t]
    return Panel(out, name=name)


def apply_alternative(
    alt: str,
    t,
    n: int,
    x,
    a4_rate: float = 0.01,
    a5_rate: float = 0.05,
    squared_logistic: bool = False,
):
    """Evaluate the link ``h_t(x)`` of an alternative at (1-based) time ``t``.

    ``t`` and ``x`` broadcast against each other.  ``squared_logistic``
    switches A4/A5 to ``1 / (1 + exp(-r (t-1)^2))``.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(t < 1) or np.any(t > n):
        raise ValueError(f"time index must lie in 1..{n}")
    if alt == "null":
        out = x + 0.0 * t
    elif alt in ("A1", "A2"):
        factor = 2.0 * t**2 / (1.0 + t**2)
        out = factor + x if alt == "A1" else factor * x
    elif alt == "A3":
        out = x + np.where(t < n / 2, 0.05 * t, 0.005 * (n - t))
    elif alt in ("A4", "A5"):
        rate = a4_rate if alt == "A4" else a5_rate
        lag = (t - 1) ** 2 if squared_logistic else t - 1
        out = x + 1.0 / (1.0 + np.exp(-rate * lag))
    else:
        raise ValueError(f"unknown alternative {alt!r}")
    return float(out) if out.ndim == 0 else out


def _draw(sc: ScenarioConfig, rng, name):
    if sc.model == "ar1":
        return gen_ar1(sc.N, sc.n, sc.rho, rng, name)
    return gen_iid_gaussian(sc.N, sc.n, rng, name)


def make_scenario_pair(sc: ScenarioConfig, rng: np.random.Generator) -> PanelPair:
    """One simulated data set.

    For ``iid_gaussian`` and ``ar1`` the X panel is ``h_t(Z)`` for an
    independent draw ``Z`` from the same model; for ``paired_gaussian`` it is
    ``h_t(Y)`` on the same subjects.
    """
    t = np.arange(1, sc.n + 1)
    kw = dict(a4_rate=sc.a4_rate, a5_rate=sc.a5_rate, squared_logistic=sc.squared_logistic)
    y = _draw(sc, rng, "y")
    if sc.model == "paired_gaussian":
        x = Panel(apply_alternative(sc.alternative, t, sc.n, y.values, **kw), name="x")
        return PanelPair(x, y, Pairing.PAIRED)
    z = _draw(sc, rng, "x")
    x = Panel(apply_alternative(sc.alternative, t, sc.n, z.values, **kw), name="x")
    return PanelPair(x, y, Pairing.INDEPENDENT)


def run_replication(sc: ScenarioConfig, r: int) -> bool:
    """Replication ``r`` of a scenario; its randomness depends on ``(seed, r)`` only."""
    pair = make_scenario_pair(sc, stream(sc.cfg.seed, r, 0))
    grid = default_grid(pair, sc.M)
    cfg = replace(sc.cfg, seed=derive_seed(sc.cfg.seed, r, 1), workers=1)
    return run_test(pair, grid, cfg).reject


def _replication_block(args):
    sc, idx = args
    return [run_replication(sc, r) for r in idx]


def power_study(sc: ScenarioConfig) -> PowerResult:
    """Rejection rate of the bootstrap test over ``sc.replications`` draws."""
    start = time.perf_counter()
    reps = range(sc.replications)
    if sc.workers > 1 and sc.replications > 1:
        blocks = [list(reps[i :: sc.workers]) for i in range(sc.workers)]
        with ProcessPoolExecutor(sc.workers) as pool:
            hits = sum(sum(v) for v in pool.map(_replication_block, [(sc, b) for b in blocks]))
    else:
        hits = sum(run_replication(sc, r) for r in reps)
    power = hits / sc.replications
    return PowerResult(
        scenario=sc,
        power=power,
        mc_stderr=math.sqrt(power * (1.0 - power) / sc.replications),
        runtime_seconds=time.perf_counter() - start,
        rejections=hits,
    )


def power_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=POWER_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for res in results:
        writer.writerow(res.row())
    return buf.getvalue()

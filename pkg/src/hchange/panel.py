"""Panel data model and CSV ingestion.

A panel holds ``N`` subjects observed at ``n`` common time points.  Two
panels (``x`` and ``y``) form a :class:`PanelPair`, either independent or
paired subject by subject.
"""

from __future__ import annotations

import enum
import os
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

LONG_COLUMNS = ["panel", "subject", "t", "value"]
DEFAULT_GRID_SIZE = 25
GRID_LEVELS = (0.05, 0.95)


class PanelError(ValueError):
    """Raised when panel data violate the data model."""


class Pairing(str, enum.Enum):
    INDEPENDENT = "independent"
    PAIRED = "paired"


@dataclass(frozen=True)
class Panel:
    """An ``N x n`` matrix of observations (subjects x time points)."""

    values: np.ndarray
    subject_ids: tuple = ()
    name: str = "x"

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise PanelError(f"panel {self.name!r}: values must be a 2-D matrix")
        N, n = values.shape
        if N < 2 or n < 2:
            raise PanelError(
                f"panel {self.name!r}: need at least 2 subjects and 2 time points, got {N}x{n}"
            )
        if not np.all(np.isfinite(values)):
            raise PanelError(f"panel {self.name!r}: all cells must be finite")
        ids = tuple(self.subject_ids) if len(self.subject_ids) else tuple(range(1, N + 1))
        if len(ids) != N:
            raise PanelError(f"panel {self.name!r}: {len(ids)} subject ids for {N} rows")
        if len(set(ids)) != N:
            raise PanelError(f"panel {self.name!r}: subject ids are not unique")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "subject_ids", ids)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PanelPair:
    x: Panel
    y: Panel
    pairing: Pairing = Pairing.INDEPENDENT

    def __post_init__(self):
        pairing = Pairing(self.pairing)
        object.__setattr__(self, "pairing", pairing)
        if self.x.n != self.y.n:
            raise PanelError(
                f"time lengths differ: x has n={self.x.n}, y has n={self.y.n}"
            )
        if pairing is Pairing.PAIRED:
            if self.x.N != self.y.N:
                raise PanelError(
                    f"paired panels need equal sizes, got N_x={self.x.N}, N_y={self.y.N}"
                )
            if set(self.x.subject_ids) != set(self.y.subject_ids):
                raise PanelError("paired panels must share the same subject ids")
            if self.x.subject_ids != self.y.subject_ids:
                # align y rows on x's subject order
                order = {s: i for i, s in enumerate(self.y.subject_ids)}
                idx = [order[s] for s in self.x.subject_ids]
                object.__setattr__(
                    self,
                    "y",
                    Panel(self.y.values[idx], self.x.subject_ids, self.y.name),
                )

    @property
    def paired(self) -> bool:
        return self.pairing is Pairing.PAIRED

    @property
    def n(self) -> int:
        return self.x.n


@dataclass(frozen=True)
class EvaluationGrid:
    """Evaluation points ``x_1 < ... < x_M`` with weights ``w_i``."""

    points: np.ndarray
    weights: np.ndarray = None
    degenerate: bool = False

    def __post_init__(self):
        points = np.atleast_1d(np.asarray(self.points, dtype=float))
        if points.ndim != 1 or points.size < 1:
            raise ValueError("grid needs at least one point")
        if not np.all(np.isfinite(points)):
            raise ValueError("grid points must be finite")
        if np.any(np.diff(points) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if self.weights is None:
            weights = np.ones_like(points)
        else:
            weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if weights.shape != points.shape:
            raise ValueError("one weight per grid point is required")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("weights must be finite and nonnegative")
        if not np.any(weights > 0):
            raise ValueError("weights must not all be zero")
        points.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def M(self) -> int:
        return self.points.size


def default_grid(pair: PanelPair, M: int = DEFAULT_GRID_SIZE) -> EvaluationGrid:
    """Quantile-spaced grid on the pooled Y values.

    Points sit at ``M`` equally spaced levels between 0.05 and 0.95 of the
    pooled Y panel (the median when ``M == 1``); duplicates are dropped and
    all weights are 1.  If every Y value is identical the grid collapses to
    that value and ``degenerate`` is set.
    """
    if M < 1:
        raise ValueError(f"grid size must be >= 1, got {M}")
    pooled = pair.y.values.ravel()
    lo, hi = pooled.min(), pooled.max()
    if lo == hi:
        warnings.warn("all Y values are identical; using a single grid point", stacklevel=2)
        return EvaluationGrid([lo], degenerate=True)
    levels = [0.5] if M == 1 else np.linspace(*GRID_LEVELS, M)
    points = np.unique(np.quantile(pooled, levels))
    return EvaluationGrid(np.clip(points, lo, hi))


# ---------------------------------------------------------------- CSV I/O


def _frame_to_panel(df: pd.DataFrame, name: str) -> tuple[Panel, list]:
    dup = df.duplicated(["subject", "t"], keep=False)
    if dup.any():
        row = df[dup].iloc[0]
        raise PanelError(
            f"duplicate row for (panel={name}, subject={row['subject']}, t={row['t']})"
        )
    subjects = list(dict.fromkeys(df["subject"]))
    times = sorted(set(df["t"]))
    wide = df.pivot(index="subject", columns="t", values="value").reindex(
        index=subjects, columns=times
    )
    missing = np.argwhere(wide.isna().to_numpy())
    if len(missing):
        i, j = missing[0]
        raise PanelError(
            f"missing cell (panel={name}, subject={subjects[i]}, t={times[j]})"
        )
    return Panel(wide.to_numpy(dtype=float), subjects, name), times


def _read_long(path) -> pd.DataFrame:
    try:
        df = pd.read_csv(
            path,
            dtype={"panel": str, "subject": str},
            encoding="utf-8",
            float_precision="round_trip",
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise PanelError(f"{path}: cannot parse CSV ({exc})") from None
    if list(df.columns) != LONG_COLUMNS:
        raise PanelError(f"{path}: expected header {','.join(LONG_COLUMNS)}")
    if df.isna().any().any():
        raise PanelError(f"{path}: empty fields are not allowed")
    bad = set(df["panel"]) - {"x", "y"}
    if bad:
        raise PanelError(f"{path}: unknown panel label(s) {sorted(bad)}")
    t = pd.to_numeric(df["t"], errors="coerce")
    if t.isna().any() or (t % 1 != 0).any() or (t < 1).any():
        raise PanelError(f"{path}: t must be a positive integer")
    value = pd.to_numeric(df["value"], errors="coerce")
    if value.isna().any():
        raise PanelError(f"{path}: non-numeric value")
    return df.assign(t=t.astype(int), value=value.astype(float))


def _read_wide(path, name: str) -> pd.DataFrame:
    try:
        df = pd.read_csv(
            path, dtype={"subject": str}, encoding="utf-8", float_precision="round_trip"
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise PanelError(f"{path}: cannot parse CSV ({exc})") from None
    cols = list(df.columns)
    if not cols or cols[0] != "subject" or len(cols) < 2:
        raise PanelError(f"{path}: expected header subject,t1,...,tn")
    times = []
    for c in cols[1:]:
        if not (c.startswith("t") and c[1:].isdigit() and int(c[1:]) >= 1):
            raise PanelError(f"{path}: bad time column {c!r}")
        times.append(int(c[1:]))
    long = df.melt(id_vars="subject", var_name="t", value_name="value")
    long["t"] = long["t"].str[1:].astype(int)
    missing = long["value"].isna()
    if missing.any():
        row = long[missing].iloc[0]
        raise PanelError(
            f"missing cell (panel={name}, subject={row['subject']}, t={row['t']})"
        )
    value = pd.to_numeric(long["value"], errors="coerce")
    if value.isna().any():
        raise PanelError(f"{path}: non-numeric value")
    return long.assign(value=value.astype(float))


def _wide_paths(path) -> tuple[Path, Path]:
    if isinstance(path, (list, tuple)):
        x_path, y_path = path
        return Path(x_path), Path(y_path)
    path = Path(path)
    if path.is_dir():
        return path / "x.csv", path / "y.csv"
    text = os.fspath(path)
    if "," in text:
        x_path, y_path = text.split(",", 1)
        return Path(x_path), Path(y_path)
    raise PanelError(
        f"{path}: wide format needs a directory holding x.csv and y.csv, or 'x.csv,y.csv'"
    )


def load_panels(path, format: str = "long", paired: bool = False) -> PanelPair:
    """Read and validate a pair of panels.

    ``format="long"`` reads one CSV with header ``panel,subject,t,value``.
    ``format="wide"`` reads one CSV per panel with header
    ``subject,t1,...,tn``; ``path`` is then a directory containing ``x.csv``
    and ``y.csv``, a ``"x.csv,y.csv"`` string, or a 2-sequence of paths.
    Time labels are replaced by their ordinal rank ``1..n``.
    """
    if format == "long":
        if not Path(path).is_file():
            raise PanelError(f"{path}: no such file")
        df = _read_long(path)
        frames = {name: df[df["panel"] == name] for name in ("x", "y")}
        for name, part in frames.items():
            if part.empty:
                raise PanelError(f"{path}: panel {name!r} has no rows")
    elif format == "wide":
        x_path, y_path = _wide_paths(path)
        for p in (x_path, y_path):
            if not p.is_file():
                raise PanelError(f"{p}: no such file")
        frames = {"x": _read_wide(x_path, "x"), "y": _read_wide(y_path, "y")}
    else:
        raise PanelError(f"unknown format {format!r}; expected 'long' or 'wide'")

    x, tx = _frame_to_panel(frames["x"], "x")
    y, ty = _frame_to_panel(frames["y"], "y")
    if len(tx) != len(ty):
        raise PanelError(f"time lengths differ: x has n={len(tx)}, y has n={len(ty)}")
    return PanelPair(x, y, Pairing.PAIRED if paired else Pairing.INDEPENDENT)


def _long_frame(pair: PanelPair) -> pd.DataFrame:
    parts = []
    for panel in (pair.x, pair.y):
        N, n = panel.values.shape
        parts.append(
            pd.DataFrame(
                {
                    "panel": panel.name,
                    "subject": np.repeat(np.array(panel.subject_ids, dtype=object), n),
                    "t": np.tile(np.arange(1, n + 1), N),
                    "value": panel.values.ravel(),
                }
            )
        )
    return pd.concat(parts, ignore_index=True)


def write_panels(pair: PanelPair, path, format: str = "long") -> None:
    """Write a pair in either CSV layout (inverse of :func:`load_panels`)."""
    if format == "long":
        _long_frame(pair).to_csv(path, index=False, float_format="%.17g")
    elif format == "wide":
        for panel, target in zip((pair.x, pair.y), _wide_or_dir(path)):
            cols = [f"t{t}" for t in range(1, panel.n + 1)]
            df = pd.DataFrame(panel.values, columns=cols)
            df.insert(0, "subject", list(panel.subject_ids))
            df.to_csv(target, index=False, float_format="%.17g")
    else:
        raise PanelError(f"unknown format {format!r}; expected 'long' or 'wide'")


def _wide_or_dir(path) -> Sequence[Path]:
    if isinstance(path, (list, tuple)) or "," in os.fspath(path):
        return _wide_paths(path)
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path / "x.csv", path / "y.csv"

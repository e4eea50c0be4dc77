"""Post-hoc statistics on optimization archives: Pearson correlation,
kNN permutation importance, and stealth-efficiency ratio tables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class AnalysisError(ValueError):
    pass


@dataclass
class SampleTable:
    columns: list
    rows: np.ndarray  # (n, len(columns))

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.shape[1] != len(self.columns):
            raise AnalysisError("column count mismatch")
        if self.rows.shape[0] < 2:
            raise AnalysisError("need at least two rows")

    def col(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def select(self, names) -> np.ndarray:
        idx = [self.columns.index(n) for n in names]
        return self.rows[:, idx]


def pearson_matrix(table: SampleTable, columns) -> np.ndarray:
    """Pairwise Pearson r with unit diagonal; constant columns yield NaN."""
    data = table.select(columns)
    finite = np.all(np.isfinite(data), axis=1)
    data = data[finite]
    if data.shape[0] < 2:
        raise AnalysisError("fewer than two finite rows")
    n = data.shape[1]
    out = np.eye(n)
    std = data.std(axis=0)
    centered = data - data.mean(axis=0)
    for i in range(n):
        for j in range(i + 1, n):
            if std[i] == 0.0 or std[j] == 0.0:
                out[i, j] = out[j, i] = math.nan
            else:
                r = float(np.mean(centered[:, i] * centered[:, j])
                          / (std[i] * std[j]))
                out[i, j] = out[j, i] = r
    return out


def _knn_predict(features: np.ndarray, target: np.ndarray, k: int) -> np.ndarray:
    """Leave-one-out k-nearest-neighbor regression on standardized inputs."""
    d2 = np.sum((features[:, None, :] - features[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(d2, np.inf)
    nearest = np.argpartition(d2, k, axis=1)[:, :k]
    return target[nearest].mean(axis=1)


def permutation_importance(table: SampleTable, feature_columns, target_column,
                           k: int = 10, n_shuffles: int = 10,
                           seed: int = 0) -> dict:
    """kNN-based permutation importance, normalized to sum to one.

    Fits a leave-one-out kNN regressor on standardized inputs and measures
    the mean-squared-error increase when each feature column is shuffled.
    """
    if table.rows.shape[0] < 50:
        raise AnalysisError("need at least 50 rows for importance analysis")
    feats = table.select(feature_columns)
    target = table.col(target_column)
    finite = np.all(np.isfinite(feats), axis=1) & np.isfinite(target)
    feats, target = feats[finite], target[finite]
    if len(target) < 50:
        raise AnalysisError("fewer than 50 finite rows")
    if float(np.std(target)) == 0.0:
        raise AnalysisError("degenerate (constant) target")
    std = feats.std(axis=0)
    std[std == 0.0] = 1.0
    z = (feats - feats.mean(axis=0)) / std
    base_mse = float(np.mean((_knn_predict(z, target, k) - target) ** 2))
    rng = np.random.default_rng(seed)
    raw = {}
    for ci, name in enumerate(feature_columns):
        bumps = []
        for _ in range(n_shuffles):
            zp = z.copy()
            zp[:, ci] = rng.permutation(zp[:, ci])
            mse = float(np.mean((_knn_predict(zp, target, k) - target) ** 2))
            bumps.append(mse - base_mse)
        raw[name] = max(float(np.mean(bumps)), 0.0)
    total = sum(raw.values())
    if total <= 0.0:
        return {name: 1.0 / len(raw) for name in raw}
    return {name: v / total for name, v in raw.items()}


def ratio_study(table: SampleTable, kind: str, n_bins: int = 10) -> dict:
    """Per-sample stealth-efficiency ratios plus binned means against MBSD.

    kind "e_lhd" appends LHD/MBSD; "e_miffs" appends MBSD/MIFFS. Rows with a
    zero denominator are excluded from bins and counted separately.
    """
    mbsd = table.col("mbsd")
    if kind == "e_lhd":
        num, den = table.col("lhd"), mbsd
    elif kind == "e_miffs":
        num, den = mbsd, table.col("miffs")
    else:
        raise AnalysisError(f"unknown ratio kind {kind!r}")
    valid = np.isfinite(num) & np.isfinite(den) & (den > 0.0)
    ratio = np.full(len(mbsd), np.nan)
    ratio[valid] = num[valid] / den[valid]
    m = mbsd[valid]
    r = ratio[valid]
    if len(m) == 0:
        return {"ratio": ratio, "bins": [], "excluded": int((~valid).sum())}
    edges = np.linspace(m.min(), m.max() + 1e-12, n_bins + 1)
    bins = []
    for b in range(n_bins):
        sel = (m >= edges[b]) & (m < edges[b + 1])
        if sel.any():
            bins.append({"mbsd_lo": float(edges[b]),
                         "mbsd_hi": float(edges[b + 1]),
                         "count": int(sel.sum()),
                         "mean_ratio": float(r[sel].mean())})
    return {"ratio": ratio, "bins": bins, "excluded": int((~valid).sum())}

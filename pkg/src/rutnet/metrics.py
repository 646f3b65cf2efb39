"""Accuracy indices for rut-depth predictions and the per-split report.

`r2` here is the squared Pearson correlation between observed and predicted
values. That form is invariant to positive affine maps of the predictions,
so a biased-but-correlated predictor still scores 1; the 1 - SSE/SST variant
is exposed separately as a diagnostic that does penalize such bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Split, feature_matrix
from .errors import DegenerateVariance, EmptyInput, LengthMismatch


def _paired(observed, predicted, minimum: int = 1) -> tuple[np.ndarray, np.ndarray]:
    o = np.asarray(observed, dtype=np.float64)
    t = np.asarray(predicted, dtype=np.float64)
    if o.shape != t.shape or o.ndim != 1:
        raise LengthMismatch(f"observed {o.shape} vs predicted {t.shape}")
    if o.size < minimum:
        raise EmptyInput(f"need at least {minimum} samples, got {o.size}")
    return o, t


def r2(observed, predicted) -> float:
    """Squared Pearson correlation between observed and predicted."""
    o, t = _paired(observed, predicted, minimum=2)
    do = o - o.mean()
    dt = t - t.mean()
    denom = np.sum(do * do) * np.sum(dt * dt)
    if denom == 0.0:
        raise DegenerateVariance("r2 undefined when either series is constant")
    return float(np.sum(do * dt) ** 2 / denom)


def rmse(observed, predicted) -> float:
    o, t = _paired(observed, predicted)
    return float(np.sqrt(np.mean((o - t) ** 2)))


def mae(observed, predicted) -> float:
    o, t = _paired(observed, predicted)
    return float(np.mean(np.abs(o - t)))


def coefficient_of_determination(observed, predicted) -> float:
    """Diagnostic 1 - SSE/SST; penalizes affine bias, unlike r2 above."""
    o, t = _paired(observed, predicted, minimum=2)
    sst = float(np.sum((o - o.mean()) ** 2))
    if sst == 0.0:
        raise DegenerateVariance("determination undefined for constant observations")
    return 1.0 - float(np.sum((o - t) ** 2)) / sst


@dataclass(frozen=True)
class PartitionMetrics:
    n: int
    rmse_mm: float
    mae_mm: float
    r2: float | None  # None when prediction variance degenerates


@dataclass(frozen=True)
class EvalReport:
    train: PartitionMetrics
    validation: PartitionMetrics
    test: PartitionMetrics

    def as_dict(self) -> dict:
        out = {}
        for name in ("train", "validation", "test"):
            m: PartitionMetrics = getattr(self, name)
            out[name] = {"n": m.n, "rmse_mm": m.rmse_mm, "mae_mm": m.mae_mm, "r2": m.r2}
        return out


def _partition_metrics(predict_batch, rows) -> PartitionMetrics:
    X, y = feature_matrix(rows)
    preds = np.asarray(predict_batch(X), dtype=np.float64)
    try:
        r2_value = r2(y, preds)
    except DegenerateVariance:
        r2_value = None
    return PartitionMetrics(n=len(rows), rmse_mm=rmse(y, preds), mae_mm=mae(y, preds), r2=r2_value)


def evaluate(predict_batch, split: Split) -> EvalReport:
    """Metrics per partition on raw (un-normalized, unclamped) predictions.

    `predict_batch` maps an (n, 13) feature matrix to n rut depths in mm.
    """
    return EvalReport(
        train=_partition_metrics(predict_batch, split.train),
        validation=_partition_metrics(predict_batch, split.validation),
        test=_partition_metrics(predict_batch, split.test),
    )

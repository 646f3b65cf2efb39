"""End-to-end training: CSV text in, trained artifact + report out."""

from __future__ import annotations

from dataclasses import asdict

import numpy as np

from .artifact import ModelArtifact, dataset_fingerprint
from .data import (
    Split,
    apply_zscore,
    expand_rows,
    feature_matrix,
    fit_normalizer,
    parse_hwtt_csv,
    split_rows,
)
from .metrics import EvalReport, evaluate
from .nn import TrainConfig, TrainHistory, fit, forward_batch, init_network

DEFAULT_HIDDEN = (64, 64)


def train_from_csv(
    csv_text: str,
    cfg: TrainConfig,
    split_mode: str = "row",
    split_seed: int = 0,
    hidden_dims: tuple[int, ...] = DEFAULT_HIDDEN,
) -> tuple[ModelArtifact, TrainHistory, EvalReport, Split]:
    curves = parse_hwtt_csv(csv_text)
    rows = expand_rows(curves)
    split = split_rows(rows, seed=split_seed, mode=split_mode)

    stats = fit_normalizer(split.train)
    X_train, y_train = feature_matrix(split.train)
    X_val, y_val = feature_matrix(split.validation)

    net = init_network([X_train.shape[1], *hidden_dims, 1], cfg.init_seed)
    net, history = fit(
        net,
        (apply_zscore(X_train, stats), y_train),
        (apply_zscore(X_val, stats), y_val),
        cfg,
    )

    def predict_batch(X_raw: np.ndarray) -> np.ndarray:
        preds, _ = forward_batch(net, apply_zscore(X_raw, stats))
        return preds

    report = evaluate(predict_batch, split)
    provenance = {
        "train_config": asdict(cfg),
        "hidden_dims": list(hidden_dims),
        "split": {"mode": split_mode, "seed": split_seed},
        "dataset": {
            "sha256": dataset_fingerprint(csv_text),
            "curves": len(curves),
            "rows": len(rows),
        },
        "history": {
            "best_epoch": history.best_epoch,
            "stopped_epoch": history.stopped_epoch,
            "best_val_loss": history.best_val_loss,
            "final_train_loss": history.train_loss[-1],
        },
        "eval": report.as_dict(),
    }
    art = ModelArtifact(network=net, norm=stats, provenance=provenance)
    return art, history, report, split

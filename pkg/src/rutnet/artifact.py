"""Versioned on-disk format for trained models.

The artifact is a JSON document with stable key order. Weights, biases, and
normalization statistics are written as decimal strings with 17 significant
digits, which round-trip float64 exactly: save -> load -> save is
byte-identical, and a loaded model predicts exactly what the saved one did.
Nothing time- or host-dependent goes into the file, so retraining with the
same seeds reproduces it byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .data import NormStats
from .errors import SchemaError, VersionMismatch
from .mixture import CATEGORY_CODES, DEFAULT_RANGES, FEATURE_NAMES
from .nn import Network

FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _row_text(values: np.ndarray) -> str:
    return " ".join(_fmt(v) for v in values)


def _parse_row(text: str, what: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split()], dtype=np.float64)
    except (ValueError, AttributeError):
        raise SchemaError(f"unparsable numeric row in {what}") from None


@dataclass
class ModelArtifact:
    """A trained network plus everything needed to reproduce its predictions."""

    network: Network
    norm: NormStats
    provenance: dict = field(default_factory=dict)
    feature_names: tuple[str, ...] = tuple(FEATURE_NAMES)
    format_version: int = FORMAT_VERSION

    def to_document(self) -> dict:
        return {
            "format_version": self.format_version,
            "layer_dims": list(self.network.layer_dims),
            "activations": list(self.network.activations),
            "weights": [[_row_text(row) for row in w] for w in self.network.weights],
            "biases": [_row_text(b) for b in self.network.biases],
            "normalization": {
                "mean": _row_text(self.norm.mean),
                "std": _row_text(self.norm.std),
                "constant": [bool(c) for c in self.norm.constant],
            },
            "features": {
                "names": list(self.feature_names),
                "categories": CATEGORY_CODES,
                "ranges": {k: list(v) for k, v in DEFAULT_RANGES.bounds.items()},
            },
            "provenance": self.provenance,
        }


def save_artifact(artifact: ModelArtifact, path) -> None:
    text = json.dumps(artifact.to_document(), indent=1, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(f"artifact missing field {key!r}")
    return doc[key]


def load_artifact(path) -> ModelArtifact:
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not a parsable artifact: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("artifact root must be an object")

    version = _require(doc, "format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"found format_version {version}, expected {FORMAT_VERSION}")

    layer_dims = _require(doc, "layer_dims")
    activations = _require(doc, "activations")
    weight_rows = _require(doc, "weights")
    bias_rows = _require(doc, "biases")
    norm_doc = _require(doc, "normalization")
    features = _require(doc, "features")
    provenance = _require(doc, "provenance")

    try:
        weights = [
            np.stack([_parse_row(row, "weights") for row in layer]) for layer in weight_rows
        ]
        biases = [_parse_row(row, "biases") for row in bias_rows]
        network = Network(
            layer_dims=list(layer_dims),
            weights=weights,
            biases=biases,
            activations=list(activations),
        )
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"inconsistent network block: {exc}") from None

    norm = NormStats(
        mean=_parse_row(_require(norm_doc, "mean"), "normalization.mean"),
        std=_parse_row(_require(norm_doc, "std"), "normalization.std"),
        constant=np.array(_require(norm_doc, "constant"), dtype=bool),
    )
    if norm.mean.shape != (network.layer_dims[0],):
        raise SchemaError("normalization stats do not match the input width")

    return ModelArtifact(
        network=network,
        norm=norm,
        provenance=provenance,
        feature_names=tuple(_require(features, "names")),
        format_version=version,
    )


def dataset_fingerprint(csv_text: str) -> str:
    return hashlib.sha256(csv_text.encode("utf-8")).hexdigest()

"""rutnet: train and query a from-scratch rut-depth model for Hamburg wheel tracking."""

from .artifact import ModelArtifact, load_artifact, save_artifact
from .data import HwttCurve, NormStats, SampleRow, Split
from .metrics import EvalReport, evaluate, mae, r2, rmse
from .mixture import FeatureRanges, MixtureDesign, compute_uti, encode, validate
from .nn import Network, RmsPropState, TrainConfig, TrainHistory, fit, init_network
from .predict import (
    PredictedCurve,
    PsdPoint,
    SweepResult,
    predict_curve,
    predict_point,
    psd_point,
    sensitivity_sweep,
)
from .synth import SynthConfig, generate_dataset

__all__ = [
    "EvalReport",
    "FeatureRanges",
    "HwttCurve",
    "MixtureDesign",
    "ModelArtifact",
    "Network",
    "NormStats",
    "PredictedCurve",
    "PsdPoint",
    "RmsPropState",
    "SampleRow",
    "Split",
    "SweepResult",
    "SynthConfig",
    "TrainConfig",
    "TrainHistory",
    "compute_uti",
    "encode",
    "evaluate",
    "fit",
    "generate_dataset",
    "init_network",
    "load_artifact",
    "mae",
    "predict_curve",
    "predict_point",
    "psd_point",
    "r2",
    "rmse",
    "save_artifact",
    "sensitivity_sweep",
    "validate",
]

__version__ = "0.1.0"

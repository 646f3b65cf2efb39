"""Prediction surfaces: points, full curves, one-at-a-time sweeps, PSD points.

Raw model outputs are kept for evaluation; the display contract is the
clamped value max(0, raw), because a negative rut depth is unphysical. All
operations read an immutable artifact and are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .artifact import ModelArtifact
from .data import apply_zscore
from .errors import BadGrid, MissingThreshold, UnknownFactor
from .mixture import MAX_PASS, MixtureDesign, encode
from .nn import forward

# 200 model-evaluated points ending at 20,000 passes. The physical origin
# (0, 0) is a display concern, prepended by front-ends, never predicted.
DEFAULT_GRID = tuple(100.0 * k for k in range(1, 201))

DEFAULT_RUT_THRESHOLD_MM = 12.5


def predict_raw_batch(art: ModelArtifact, X: np.ndarray) -> np.ndarray:
    """Un-normalized feature rows -> raw rut depths in mm.

    Rows are evaluated one at a time so a prediction is bit-identical no
    matter how it was batched (grid consistency is exact, not approximate).
    """
    Z = apply_zscore(np.atleast_2d(X), art.norm)
    preds = np.empty(Z.shape[0], dtype=np.float64)
    for i in range(Z.shape[0]):
        preds[i], _ = forward(art.network, Z[i])
    return preds


def predict_point(
    art: ModelArtifact, mix: MixtureDesign, temp_c: float, wheel_pass: float
) -> tuple[float, float]:
    """(raw_mm, clamped_mm) at one pass count."""
    raw = float(predict_raw_batch(art, encode(mix, temp_c, wheel_pass))[0])
    return raw, max(0.0, raw)


@dataclass(frozen=True)
class PredictedCurve:
    grid: tuple[float, ...]
    raw_mm: tuple[float, ...]
    clamped_mm: tuple[float, ...]
    mix: MixtureDesign
    temp_c: float
    model_version: int

    def as_dict(self) -> dict:
        from dataclasses import asdict

        return {
            "grid": list(self.grid),
            "raw_mm": list(self.raw_mm),
            "clamped_mm": list(self.clamped_mm),
            "metadata": {
                "mix": asdict(self.mix),
                "temp_c": self.temp_c,
                "model_version": self.model_version,
            },
        }


def predict_curve(
    art: ModelArtifact, mix: MixtureDesign, temp_c: float, grid=DEFAULT_GRID
) -> PredictedCurve:
    grid = tuple(float(p) for p in grid)
    if not grid:
        raise BadGrid("grid must be nonempty")
    if any(not math.isfinite(p) for p in grid):
        raise BadGrid("grid entries must be finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadGrid("grid must be strictly ascending")
    if grid[0] < 0 or grid[-1] > MAX_PASS:
        raise BadGrid(f"grid must stay within [0, {MAX_PASS}]")
    X = np.stack([encode(mix, temp_c, p) for p in grid])
    raw = predict_raw_batch(art, X)
    return PredictedCurve(
        grid=grid,
        raw_mm=tuple(float(v) for v in raw),
        clamped_mm=tuple(max(0.0, float(v)) for v in raw),
        mix=mix,
        temp_c=temp_c,
        model_version=art.format_version,
    )


@dataclass(frozen=True)
class SweepResult:
    factor: str
    base_value: object
    base_curve: PredictedCurve
    entries: tuple[tuple[object, PredictedCurve], ...]


SWEEPABLE = (
    "grade",
    "ac_pct",
    "rap_pct",
    "ras_pct",
    "crc_pct",
    "nmas_mm",
    "gradation",
    "agg_type",
    "mix_type",
    "temp_c",
)


def _apply_factor(
    base: MixtureDesign, temp_c: float, factor: str, value
) -> tuple[MixtureDesign, float]:
    if factor == "temp_c":
        return base, float(value)
    if factor == "grade":
        high, low = value
        return replace(base, htpg_c=float(high), ltpg_c=float(low)), temp_c
    if factor in ("ac_pct", "rap_pct", "ras_pct", "crc_pct", "nmas_mm"):
        return replace(base, **{factor: float(value)}), temp_c
    if factor in ("gradation", "agg_type", "mix_type"):
        return replace(base, **{factor: str(value)}), temp_c
    raise UnknownFactor(f"cannot sweep {factor!r}; choose one of {SWEEPABLE}")


def _base_value(base: MixtureDesign, temp_c: float, factor: str):
    if factor == "temp_c":
        return temp_c
    if factor == "grade":
        return (base.htpg_c, base.ltpg_c)
    return getattr(base, factor)


def sensitivity_sweep(
    art: ModelArtifact,
    base: MixtureDesign,
    temp_c: float,
    factor: str,
    values,
    grid=DEFAULT_GRID,
) -> SweepResult:
    """One curve per factor value, everything else held at the base mixture.

    Derived features move with the factor: the temperature interval follows
    a grade change, the recycled-binder total follows rap/ras changes.
    """
    if factor not in SWEEPABLE:
        raise UnknownFactor(f"cannot sweep {factor!r}; choose one of {SWEEPABLE}")
    values = list(values)
    if not values:
        raise ValueError(f"sweep over {factor!r} needs at least one value")
    base_curve = predict_curve(art, base, temp_c, grid)
    entries = []
    for value in values:
        mix, temp = _apply_factor(base, temp_c, factor, value)
        entries.append((value, predict_curve(art, mix, temp, grid)))
    return SweepResult(
        factor=factor,
        base_value=_base_value(base, temp_c, factor),
        base_curve=base_curve,
        entries=tuple(entries),
    )


@dataclass(frozen=True)
class PsdPoint:
    """One mixture's spot on the rutting-vs-cracking performance space.

    Rut passes at or below its threshold; fracture energy passes at or above
    its threshold (ties pass on both axes). The quadrant string is
    "<rut result>-<fracture result>".
    """

    rut_at_20000_mm: float
    fracture_energy_j_per_m2: float
    rut_threshold_mm: float
    fe_threshold: float
    quadrant: str


def psd_point(
    art: ModelArtifact,
    mix: MixtureDesign,
    temp_c: float,
    fracture_energy: float,
    rut_threshold_mm: float = DEFAULT_RUT_THRESHOLD_MM,
    fe_threshold: float | None = None,
) -> PsdPoint:
    if fracture_energy < 0:
        raise ValueError(f"fracture_energy must be >= 0, got {fracture_energy:g}")
    if fe_threshold is None:
        raise MissingThreshold("no fracture-energy threshold supplied or configured")
    _, rut = predict_point(art, mix, temp_c, MAX_PASS)
    rut_ok = rut <= rut_threshold_mm
    fe_ok = fracture_energy >= fe_threshold
    quadrant = f"{'pass' if rut_ok else 'fail'}-{'pass' if fe_ok else 'fail'}"
    return PsdPoint(
        rut_at_20000_mm=rut,
        fracture_energy_j_per_m2=float(fracture_energy),
        rut_threshold_mm=float(rut_threshold_mm),
        fe_threshold=float(fe_threshold),
        quadrant=quadrant,
    )

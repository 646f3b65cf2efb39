"""HWTT curve ingestion, row expansion, splitting, and z-score normalization.

CSV contract (exact header, one curve point per row):

    mix_id,mix_type,htpg_c,ltpg_c,ac_pct,nmas_mm,abr_pct,rap_pct,ras_pct,gradation,agg_type,crc_pct,temp_c,pass,rut_mm

``abr_pct`` may be left empty, in which case it is rap + ras. Categorical
strings are decoded case-insensitively. Rows group into curves keyed by
(mix_id, temp_c) and are sorted by pass within a curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import (
    EmptyDataset,
    HeaderMismatch,
    InsufficientData,
    MalformedRow,
    NonmonotonicCurve,
    RutnetError,
)
from .mixture import FEATURE_NAMES, MixtureDesign, encode

CSV_HEADER = (
    "mix_id,mix_type,htpg_c,ltpg_c,ac_pct,nmas_mm,abr_pct,rap_pct,ras_pct,"
    "gradation,agg_type,crc_pct,temp_c,pass,rut_mm"
)

MAX_RUT_MM = 20.0

ABR_SLOT = FEATURE_NAMES.index("abr")


@dataclass(frozen=True)
class HwttCurve:
    """One wheel-tracking test: a mixture, a temperature, and its rut trace."""

    mix_id: str
    design: MixtureDesign
    temp_c: float
    points: tuple[tuple[float, float], ...]  # (pass, rut_mm), strictly increasing pass
    abr_pct: float | None = None  # explicit override from the CSV, else rap + ras

    @property
    def curve_id(self) -> str:
        return f"{self.mix_id}@{self.temp_c:g}"


@dataclass(frozen=True)
class SampleRow:
    features: np.ndarray
    target_rut_mm: float
    curve_id: str


@dataclass(frozen=True)
class Split:
    train: list[SampleRow]
    validation: list[SampleRow]
    test: list[SampleRow]
    seed: int
    mode: str


def _parse_float(text: str, line_no: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(line_no, f"column {column}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedRow(line_no, f"column {column}: {text!r} is not finite")
    return value


def parse_hwtt_csv(text: str) -> list[HwttCurve]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        found = lines[0].strip() if lines else "<empty file>"
        raise HeaderMismatch(f"expected header {CSV_HEADER!r}, found {found!r}")

    # accumulate per (mix_id, temp) preserving first-seen order
    groups: dict[tuple[str, float], dict] = {}
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.split(",")
        if len(fields) != 15:
            raise MalformedRow(line_no, f"expected 15 columns, found {len(fields)}")
        mix_id = fields[0].strip()
        if not mix_id:
            raise MalformedRow(line_no, "empty mix_id")
        try:
            design = MixtureDesign(
                mix_type=fields[1],
                htpg_c=_parse_float(fields[2], line_no, "htpg_c"),
                ltpg_c=_parse_float(fields[3], line_no, "ltpg_c"),
                ac_pct=_parse_float(fields[4], line_no, "ac_pct"),
                nmas_mm=_parse_float(fields[5], line_no, "nmas_mm"),
                rap_pct=_parse_float(fields[7], line_no, "rap_pct"),
                ras_pct=_parse_float(fields[8], line_no, "ras_pct"),
                gradation=fields[9],
                agg_type=fields[10],
                crc_pct=_parse_float(fields[11], line_no, "crc_pct"),
            )
        except RutnetError as exc:
            raise MalformedRow(line_no, str(exc)) from None
        abr = fields[6].strip()
        abr_pct = _parse_float(abr, line_no, "abr_pct") if abr else None
        temp_c = _parse_float(fields[12], line_no, "temp_c")
        wheel_pass = _parse_float(fields[13], line_no, "pass")
        rut_mm = _parse_float(fields[14], line_no, "rut_mm")
        if wheel_pass < 0 or wheel_pass > 20000:
            raise MalformedRow(line_no, f"pass {wheel_pass:g} outside [0, 20000]")
        if rut_mm < 0 or rut_mm > MAX_RUT_MM:
            raise MalformedRow(line_no, f"rut_mm {rut_mm:g} outside [0, {MAX_RUT_MM:g}]")

        key = (mix_id, temp_c)
        group = groups.setdefault(
            key, {"design": design, "abr": abr_pct, "points": []}
        )
        group["points"].append((wheel_pass, rut_mm))

    curves = []
    for (mix_id, temp_c), group in groups.items():
        points = sorted(group["points"])
        passes = [p for p, _ in points]
        if len(set(passes)) != len(passes):
            raise NonmonotonicCurve(
                f"curve {mix_id}@{temp_c:g} has duplicate pass values"
            )
        curves.append(
            HwttCurve(
                mix_id=mix_id,
                design=group["design"],
                temp_c=temp_c,
                points=tuple(points),
                abr_pct=group["abr"],
            )
        )
    return curves


def serialize_hwtt_csv(curves: list[HwttCurve]) -> str:
    """Inverse of parse: emits the exact header and round-trip float text."""
    lines = [CSV_HEADER]
    for curve in curves:
        d = curve.design
        abr = "" if curve.abr_pct is None else repr(float(curve.abr_pct))
        for wheel_pass, rut_mm in curve.points:
            lines.append(
                ",".join(
                    [
                        curve.mix_id,
                        d.mix_type,
                        repr(float(d.htpg_c)),
                        repr(float(d.ltpg_c)),
                        repr(float(d.ac_pct)),
                        repr(float(d.nmas_mm)),
                        abr,
                        repr(float(d.rap_pct)),
                        repr(float(d.ras_pct)),
                        d.gradation,
                        d.agg_type,
                        repr(float(d.crc_pct)),
                        repr(float(curve.temp_c)),
                        repr(float(wheel_pass)),
                        repr(float(rut_mm)),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def expand_rows(curves: list[HwttCurve]) -> list[SampleRow]:
    """One training row per curve point; ABR honors the curve's explicit value."""
    rows = []
    for curve in curves:
        for wheel_pass, rut_mm in curve.points:
            features = encode(curve.design, curve.temp_c, wheel_pass)
            if curve.abr_pct is not None:
                features[ABR_SLOT] = curve.abr_pct
            rows.append(SampleRow(features, rut_mm, curve.curve_id))
    return rows


def _partition_sizes(n: int, fractions: tuple[float, float, float]) -> tuple[int, int, int]:
    n_train = int(round(fractions[0] * n))
    n_val = int(round(fractions[1] * n))
    n_val = min(n_val, n - n_train)
    return n_train, n_val, n - n_train - n_val


def split_rows(
    rows: list[SampleRow],
    seed: int,
    fractions: tuple[float, float, float] = (0.70, 0.15, 0.15),
    mode: str = "row",
) -> Split:
    """Deterministic 70/15/15 partition.

    Row mode shuffles individual sample rows. Curve mode shuffles curve ids
    and assigns whole curves, so near-duplicate points from one curve can
    never straddle partitions.
    """
    if not rows:
        raise EmptyDataset("cannot split zero rows")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    if mode not in ("row", "curve"):
        raise ValueError(f"mode must be 'row' or 'curve', got {mode!r}")

    shuffler = rng.stream(seed, f"split-{mode}")
    if mode == "row":
        order = list(range(len(rows)))
        shuffler.shuffle(order)
        n_train, n_val, _ = _partition_sizes(len(rows), fractions)
        train = [rows[i] for i in order[:n_train]]
        val = [rows[i] for i in order[n_train : n_train + n_val]]
        test = [rows[i] for i in order[n_train + n_val :]]
    else:
        curve_ids = []
        for row in rows:
            if row.curve_id not in curve_ids:
                curve_ids.append(row.curve_id)
        shuffler.shuffle(curve_ids)
        n_train, n_val, _ = _partition_sizes(len(curve_ids), fractions)
        assignment = {}
        for rank, cid in enumerate(curve_ids):
            if rank < n_train:
                assignment[cid] = "train"
            elif rank < n_train + n_val:
                assignment[cid] = "validation"
            else:
                assignment[cid] = "test"
        train = [r for r in rows if assignment[r.curve_id] == "train"]
        val = [r for r in rows if assignment[r.curve_id] == "validation"]
        test = [r for r in rows if assignment[r.curve_id] == "test"]
    return Split(train=train, validation=val, test=test, seed=seed, mode=mode)


CONSTANT_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class NormStats:
    """Per-feature mean and sample (n-1) standard deviation from training data.

    Features whose sample std collapses below the floor are flagged constant
    and map to 0 under apply, so single-temperature datasets stay trainable.
    """

    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray
    feature_names: tuple[str, ...] = field(default=tuple(FEATURE_NAMES))


def fit_normalizer(train: list[SampleRow]) -> NormStats:
    if len(train) < 2:
        raise InsufficientData(
            f"need at least 2 training rows to fit a normalizer, got {len(train)}"
        )
    matrix = np.stack([row.features for row in train])
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0, ddof=1)
    constant = std < CONSTANT_STD_FLOOR
    # constant features divide by 1 (then zero out) to avoid 0/0 warnings
    safe_std = np.where(constant, 1.0, std)
    return NormStats(mean=mean, std=safe_std, constant=constant)


def apply_zscore(vec: np.ndarray, stats: NormStats) -> np.ndarray:
    """(v - mean) / std per feature; constant features become 0.

    Accepts a single 13-vector or an (n, 13) matrix.
    """
    z = (vec - stats.mean) / stats.std
    if z.ndim == 1:
        return np.where(stats.constant, 0.0, z)
    return np.where(stats.constant[None, :], 0.0, z)


def invert_zscore(z: np.ndarray, stats: NormStats) -> np.ndarray:
    """Inverse transform; constant features recover their training mean."""
    v = z * stats.std + stats.mean
    if v.ndim == 1:
        return np.where(stats.constant, stats.mean, v)
    return np.where(stats.constant[None, :], stats.mean[None, :], v)


def feature_matrix(rows: list[SampleRow]) -> tuple[np.ndarray, np.ndarray]:
    """Stack rows into (X, y) arrays for the numeric engine."""
    X = np.stack([row.features for row in rows])
    y = np.array([row.target_rut_mm for row in rows], dtype=np.float64)
    return X, y

"""Asphalt-mixture input schema, categorical encodings, and range checks.

A mixture plus the two test parameters (temperature, wheel pass) encodes to a
fixed 13-slot numeric row:

    [mix_type, uti, htpg, ac, nmas, abr, rap, ras, gradation, agg_type,
     crc, temp, pass]

The binder grade is entered as its (high, low) pair and the useful
temperature interval is always derived from it, so the two can never
disagree. ABR is likewise derived as rap + ras (an explicit override exists
at the dataset layer for files that carry their own ABR column).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGrade, InvalidMixture, OutOfBoundsPass

FEATURE_NAMES = [
    "mix_type",
    "uti",
    "htpg",
    "ac",
    "nmas",
    "abr",
    "rap",
    "ras",
    "gradation",
    "agg_type",
    "crc",
    "temp",
    "pass",
]

MIX_TYPE_CODES = {"Plant": 1, "Lab": 2}
GRADATION_CODES = {"Dense": 1, "SMA": 2}
AGG_TYPE_CODES = {"Limestone": 1, "Granite": 2}

CATEGORY_CODES = {
    "mix_type": MIX_TYPE_CODES,
    "gradation": GRADATION_CODES,
    "agg_type": AGG_TYPE_CODES,
}

MAX_PASS = 20000

# A feature row is a plain float64 vector of length 13, ordered as
# FEATURE_NAMES. Kept as an alias so signatures stay readable.
FeatureVector = np.ndarray


def _decode_category(kind: str, value: str) -> str:
    """Case-insensitive lookup returning the canonical label."""
    table = CATEGORY_CODES[kind]
    for label in table:
        if label.lower() == value.strip().lower():
            return label
    raise InvalidMixture(f"unknown {kind} {value!r}; expected one of {sorted(table)}")


@dataclass(frozen=True)
class MixtureDesign:
    """The eleven mixture-level model inputs.

    Percentages are by the conventions of the feature model: ac by mixture
    mass, rap/ras as binder-replacement percentages, crc by virgin binder.
    """

    mix_type: str = "Plant"
    htpg_c: float = 58.0
    ltpg_c: float = -28.0
    ac_pct: float = 5.5
    nmas_mm: float = 12.5
    rap_pct: float = 0.0
    ras_pct: float = 0.0
    gradation: str = "Dense"
    agg_type: str = "Limestone"
    crc_pct: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mix_type", _decode_category("mix_type", self.mix_type))
        object.__setattr__(self, "gradation", _decode_category("gradation", self.gradation))
        object.__setattr__(self, "agg_type", _decode_category("agg_type", self.agg_type))
        if not self.htpg_c > self.ltpg_c:
            raise InvalidGrade(
                f"high grade ({self.htpg_c:g}) must exceed low grade ({self.ltpg_c:g})"
            )
        for name in ("ac_pct", "rap_pct", "ras_pct", "crc_pct"):
            if getattr(self, name) < 0:
                raise InvalidMixture(f"{name} must be >= 0, got {getattr(self, name):g}")
        if not self.nmas_mm > 0:
            raise InvalidMixture(f"nmas_mm must be > 0, got {self.nmas_mm:g}")

    @property
    def abr_pct(self) -> float:
        return self.rap_pct + self.ras_pct


def parse_grade(text: str) -> tuple[float, float]:
    """Binder grade pair from text: '70-22' reads as (70, -22), '70/-22' is explicit."""
    text = text.strip()
    if "/" in text:
        high, _, low = text.partition("/")
        try:
            return float(high), float(low)
        except ValueError:
            raise InvalidGrade(f"grade {text!r} is not of the form HIGH/LOW") from None
    head, _, tail = text.partition("-")
    try:
        if not head or not tail:
            raise ValueError
        return float(head), -float(tail)
    except ValueError:
        raise InvalidGrade(f"grade {text!r} is not of the form HIGH-LOW") from None


def compute_uti(htpg_c: float, ltpg_c: float) -> float:
    """Useful temperature interval of a binder grade, high minus low."""
    if not htpg_c > ltpg_c:
        raise InvalidGrade(
            f"high grade ({htpg_c:g}) must exceed low grade ({ltpg_c:g})"
        )
    return htpg_c - ltpg_c


def encode(mix: MixtureDesign, temp_c: float, wheel_pass: float) -> FeatureVector:
    """Build the 13-slot numeric feature row for one (mixture, temp, pass)."""
    if not 0 <= wheel_pass <= MAX_PASS:  # also rejects NaN
        raise OutOfBoundsPass(f"pass must be in [0, {MAX_PASS}], got {wheel_pass:g}")
    return np.array(
        [
            MIX_TYPE_CODES[mix.mix_type],
            compute_uti(mix.htpg_c, mix.ltpg_c),
            mix.htpg_c,
            mix.ac_pct,
            mix.nmas_mm,
            mix.rap_pct + mix.ras_pct,
            mix.rap_pct,
            mix.ras_pct,
            GRADATION_CODES[mix.gradation],
            AGG_TYPE_CODES[mix.agg_type],
            mix.crc_pct,
            temp_c,
            wheel_pass,
        ],
        dtype=np.float64,
    )


def _default_bounds() -> dict[str, tuple[float, float]]:
    # Training envelope of the source database. NMAS keeps its true smallest
    # sieve (4.75) and ABR its full span including virgin mixes.
    return {
        "mix_type": (1, 2),
        "uti": (80, 98),
        "htpg": (46, 70),
        "ac": (5.1, 7.9),
        "nmas": (4.75, 19),
        "abr": (0, 48.4),
        "rap": (0, 35.3),
        "ras": (0, 33),
        "gradation": (1, 2),
        "agg_type": (1, 2),
        "crc": (0, 20),
        "temp": (40, 64),
        "pass": (0, MAX_PASS),
    }


@dataclass(frozen=True)
class FeatureRanges:
    """Per-feature (min, max) bounds; defaults cover the training envelope."""

    bounds: dict[str, tuple[float, float]] = field(default_factory=_default_bounds)

    def __post_init__(self):
        missing = [n for n in FEATURE_NAMES if n not in self.bounds]
        if missing:
            raise InvalidMixture(f"ranges missing features: {missing}")
        for name, (lo, hi) in self.bounds.items():
            if lo > hi:
                raise InvalidMixture(f"range for {name} has min {lo:g} > max {hi:g}")


DEFAULT_RANGES = FeatureRanges()


@dataclass(frozen=True)
class RangeViolation:
    feature: str
    value: float
    low: float
    high: float

    def describe(self) -> str:
        return f"{self.feature}={self.value:g} outside training envelope [{self.low:g}, {self.high:g}]"


def validate(
    mix: MixtureDesign, temp_c: float, ranges: FeatureRanges = DEFAULT_RANGES
) -> list[RangeViolation]:
    """Report which encoded features fall outside the training envelope.

    Violations are advisory: predicting outside the envelope is allowed, it
    is just extrapolation and gets flagged as such. Bounds are inclusive.
    """
    vec = encode(mix, temp_c, 0)
    violations = []
    for i, name in enumerate(FEATURE_NAMES):
        lo, hi = ranges.bounds[name]
        value = float(vec[i])
        if value < lo or value > hi:
            violations.append(RangeViolation(name, value, lo, hi))
    return violations

"""Deterministic synthetic HWTT curve generator with closed-form ground truth.

Real wheel-tracking databases are proprietary, so end-to-end verification
runs against curves produced here. The generator is a fixture contract: all
coefficients below are stated exactly and the PRNG (rng.SplitMix64) and draw
order are documented, so regeneration is byte-stable at the CSV level.

Shape: a severity scalar sets how aggressively a mixture ruts; the curve is
a saturating exponential plus a slow linear creep, with a quadratic
stripping-like acceleration past 10,000 passes for severe mixes only.
Directional behavior is built in: hotter tests rut more, stiffer binder,
more recycled binder, and crumb rubber rut less, larger aggregate slightly
more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import rng
from .data import HwttCurve
from .mixture import MixtureDesign

# Grade pairs and test temperatures offered by the generator. Grades whose
# high temperature exceeds the training envelope are deliberately absent.
GRADE_CHOICES = [(70, -22), (70, -28), (64, -22), (64, -34), (58, -28), (46, -34)]
TEMP_CHOICES = [40.0, 46.0, 50.0, 58.0, 64.0]
NMAS_CHOICES = [4.75, 9.5, 12.5, 19.0]

SEVERITY_FLOOR = 0.3


@dataclass(frozen=True)
class SynthConfig:
    n_mixes: int = 50
    points_per_curve: int = 200
    noise_std_mm: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n_mixes < 1:
            raise ValueError(f"n_mixes must be >= 1, got {self.n_mixes}")
        if self.points_per_curve < 2:
            raise ValueError(f"points_per_curve must be >= 2, got {self.points_per_curve}")
        if self.noise_std_mm < 0:
            raise ValueError(f"noise_std_mm must be >= 0, got {self.noise_std_mm}")


def severity(mix: MixtureDesign, temp_c: float) -> float:
    """Rutting severity scalar; floored so every curve stays physical."""
    a = (
        2.0
        + 0.12 * (temp_c - 50.0)
        - 0.10 * (mix.htpg_c - 58.0)
        - 0.04 * (mix.rap_pct + mix.ras_pct)
        - 0.06 * mix.crc_pct
        + 0.03 * (mix.nmas_mm - 12.5)
        + 0.30 * (mix.ac_pct - 5.5)
        + (0.20 if mix.mix_type == "Lab" else 0.0)
        - (0.50 if mix.gradation == "SMA" else 0.0)
        - (0.30 if mix.agg_type == "Granite" else 0.0)
    )
    return max(SEVERITY_FLOOR, a)


def noiseless_curve(a: float, grid) -> list[float]:
    """Ground-truth rut depth at each pass count, capped at the 20 mm ceiling.

    rut(p) = a*(1 - exp(-p/3000)) + (a/40000)*p
             + 0.0005*max(0, a-4)*(max(0, p-10000)/1000)^2
    """
    out = []
    for p in grid:
        rut = a * (1.0 - math.exp(-p / 3000.0)) + (a / 40000.0) * p
        rut += 0.0005 * max(0.0, a - 4.0) * (max(0.0, p - 10000.0) / 1000.0) ** 2
        out.append(min(rut, 20.0))
    return out


def pass_grid(n_points: int) -> list[float]:
    """n equally spaced pass counts ending at 20,000 (origin excluded)."""
    return [20000.0 * k / n_points for k in range(1, n_points + 1)]


def _sample_design(gen: rng.SplitMix64) -> tuple[MixtureDesign, float]:
    """One mixture + test temperature from the training envelope.

    Draw order (part of the determinism contract): mix_type, grade, ac,
    nmas, gradation, agg_type, rap gate[, rap], ras gate[, ras],
    crc gate[, crc], temp.
    """
    mix_type = "Plant" if gen.uniform() < 0.6 else "Lab"
    htpg, ltpg = gen.choice(GRADE_CHOICES)
    ac = gen.uniform(5.1, 7.9)
    nmas = gen.choice(NMAS_CHOICES)
    gradation = "SMA" if gen.uniform() < 0.2 else "Dense"
    agg_type = "Granite" if gen.uniform() < 0.2 else "Limestone"
    rap = 0.0 if gen.uniform() < 0.2 else gen.uniform(0.0, 35.3)
    ras = 0.0 if gen.uniform() < 0.5 else gen.uniform(0.0, min(33.0, 48.4 - rap))
    crc = 0.0 if gen.uniform() < 0.6 else gen.uniform(0.0, 20.0)
    temp = gen.choice(TEMP_CHOICES)
    design = MixtureDesign(
        mix_type=mix_type,
        htpg_c=float(htpg),
        ltpg_c=float(ltpg),
        ac_pct=ac,
        nmas_mm=nmas,
        rap_pct=rap,
        ras_pct=ras,
        gradation=gradation,
        agg_type=agg_type,
        crc_pct=crc,
    )
    return design, temp


def generate_dataset(cfg: SynthConfig) -> list[HwttCurve]:
    """n_mixes curves on the uniform grid, noisy but monotone and in [0, 20].

    Two named streams: "mix" drives mixture sampling, "noise" the per-point
    Gaussian perturbations (applied curve by curve, then repaired to be
    non-decreasing via running max and clamped).
    """
    mix_gen = rng.stream(cfg.seed, "mix")
    noise_gen = rng.stream(cfg.seed, "noise")
    grid = pass_grid(cfg.points_per_curve)

    curves = []
    for i in range(cfg.n_mixes):
        design, temp = _sample_design(mix_gen)
        truth = noiseless_curve(severity(design, temp), grid)
        points = []
        running = 0.0
        for p, rut in zip(grid, truth):
            noisy = rut + (noise_gen.normal(0.0, cfg.noise_std_mm) if cfg.noise_std_mm else 0.0)
            running = max(running, noisy)
            points.append((p, min(max(running, 0.0), 20.0)))
        curves.append(
            HwttCurve(
                mix_id=f"syn{i + 1:03d}",
                design=design,
                temp_c=temp,
                points=tuple(points),
            )
        )
    return curves

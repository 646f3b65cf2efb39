#!/usr/bin/env python3
"""Compare row-wise and curve-wise splitting on the same synthetic dataset.

Row splitting scatters points of one curve across partitions, so validation
rows sit interleaved with training rows of the same test; curve splitting
holds out whole tests. This script quantifies the difference, which is the
honest generalization question for a new mixture.

    python3 scripts/split_mode_study.py --seeds 3
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rutnet.data import serialize_hwtt_csv  # noqa: E402
from rutnet.nn import TrainConfig  # noqa: E402
from rutnet.pipeline import train_from_csv  # noqa: E402
from rutnet.synth import SynthConfig, generate_dataset  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mixes", type=int, default=30)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--epochs", type=int, default=150)
    args = ap.parse_args()

    print(f"{'seed':>4} {'mode':>6} {'test rmse (mm)':>15} {'test r2':>9}")
    for seed in range(args.seeds):
        csv_text = serialize_hwtt_csv(
            generate_dataset(SynthConfig(n_mixes=args.mixes, seed=seed))
        )
        for mode in ("row", "curve"):
            cfg = TrainConfig(max_epochs=args.epochs, shuffle_seed=seed, init_seed=seed)
            _, _, report, _ = train_from_csv(csv_text, cfg, split_mode=mode, split_seed=seed)
            t = report.test
            r2 = "n/a" if t.r2 is None else f"{t.r2:9.4f}"
            print(f"{seed:>4} {mode:>6} {t.rmse_mm:>15.4f} {r2:>9}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

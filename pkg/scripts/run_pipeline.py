#!/usr/bin/env python3
"""End-to-end experiment: synthesize curves, train, evaluate, sweep.

Writes everything under --outdir (default runs/<seed>/): the dataset CSV,
the trained model artifact, the training summary, and a sensitivity table.

    python3 scripts/run_pipeline.py --mixes 50 --seed 7
    python3 scripts/run_pipeline.py --seed 3 --epochs 200 --plot
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rutnet.artifact import load_artifact, save_artifact  # noqa: E402
from rutnet.data import serialize_hwtt_csv  # noqa: E402
from rutnet.mixture import MixtureDesign  # noqa: E402
from rutnet.nn import TrainConfig  # noqa: E402
from rutnet.pipeline import train_from_csv  # noqa: E402
from rutnet.predict import sensitivity_sweep  # noqa: E402
from rutnet.synth import SynthConfig, generate_dataset  # noqa: E402

SWEEPS = [
    ("temp_c", [40, 46, 50, 58, 64]),
    ("grade", [(46, -34), (58, -28), (64, -22), (70, -22)]),
    ("rap_pct", [0, 10, 20, 30]),
    ("ras_pct", [0, 10, 20, 30]),
    ("crc_pct", [0, 5, 10, 20]),
    ("ac_pct", [5.1, 5.9, 6.7, 7.5]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mixes", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--epochs", type=int, default=1000)
    ap.add_argument("--outdir", default=None)
    ap.add_argument("--plot", action="store_true", help="also write sweep PNGs (matplotlib)")
    args = ap.parse_args()

    outdir = Path(args.outdir or f"runs/seed{args.seed}")
    outdir.mkdir(parents=True, exist_ok=True)

    print(f"== generating {args.mixes} synthetic curves (seed {args.seed})")
    csv_text = serialize_hwtt_csv(generate_dataset(SynthConfig(n_mixes=args.mixes, seed=args.seed)))
    (outdir / "hwtt.csv").write_text(csv_text)

    print("== training (dense 64-64, batch 10, lr 0.001, early stopping)")
    t0 = time.perf_counter()
    cfg = TrainConfig(max_epochs=args.epochs, shuffle_seed=args.seed, init_seed=args.seed)
    art, history, report, _ = train_from_csv(csv_text, cfg, split_seed=args.seed)
    elapsed = time.perf_counter() - t0
    save_artifact(art, outdir / "model.json")
    (outdir / "summary.json").write_text(
        json.dumps(
            {
                "eval": report.as_dict(),
                "best_epoch": history.best_epoch,
                "stopped_epoch": history.stopped_epoch,
                "train_seconds": elapsed,
            },
            indent=1,
            sort_keys=True,
        )
        + "\n"
    )
    print(
        f"   stopped at epoch {history.stopped_epoch} (best {history.best_epoch}), "
        f"{elapsed:.0f} s"
    )
    for name, part in report.as_dict().items():
        print(
            f"   {name:<11} n={part['n']:<6} rmse={part['rmse_mm']:.4f} mm  "
            f"mae={part['mae_mm']:.4f} mm  r2={part['r2']:.4f}"
        )

    art = load_artifact(outdir / "model.json")
    base = MixtureDesign()
    print("== sensitivity of rut depth at 20,000 passes (base mix, 50 C)")
    table_lines = ["factor,value,rut_at_20000_mm"]
    sweep_results = []
    for factor, values in SWEEPS:
        result = sensitivity_sweep(art, base, 50.0, factor, values)
        sweep_results.append(result)
        finals = [(v, c.clamped_mm[-1]) for v, c in result.entries]
        rendered = ", ".join(f"{v} -> {r:.2f}" for v, r in finals)
        print(f"   {factor:<9} {rendered}")
        for v, r in finals:
            table_lines.append(f"{factor},{v},{r:.6f}")
    (outdir / "sensitivity.csv").write_text("\n".join(table_lines) + "\n")

    if args.plot:
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("   matplotlib not installed; skipping plots")
            return 0
        for result in sweep_results:
            fig, ax = plt.subplots(figsize=(7, 4.5))
            for value, curve in result.entries:
                ax.plot(
                    (0,) + curve.grid,
                    (0,) + curve.clamped_mm,
                    label=f"{result.factor}={value}",
                )
            ax.set_xlabel("wheel passes")
            ax.set_ylabel("rut depth (mm)")
            ax.legend(fontsize=8)
            ax.set_title(f"Sensitivity to {result.factor}")
            fig.tight_layout()
            fig.savefig(outdir / f"sweep_{result.factor}.png", dpi=120)
            plt.close(fig)
        print(f"   wrote sweep PNGs to {outdir}")

    print(f"== artifacts in {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

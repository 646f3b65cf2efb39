"""Command-line interface.

Subcommands: gen, train, eval, predict, sweep, serve. Exit codes: 0 success,
1 runtime/domain error (single machine-parsable line on stderr), 2 usage.

A mixture SPEC is a comma-separated key=value list mirroring the CSV
columns, e.g.

    mix_type=Plant,htpg_c=46,ltpg_c=-34,ac_pct=5.9,nmas_mm=12.5,rap_pct=25,ras_pct=16.1,crc_pct=10

Omitted keys fall back to the base mixture (Plant, PG 58-28, 5.5% AC,
12.5 mm NMAS, dense-graded limestone, no recycling, no rubber).
"""

from __future__ import annotations

import argparse
import json
import sys

from .artifact import load_artifact, save_artifact
from .data import expand_rows, parse_hwtt_csv, serialize_hwtt_csv, split_rows
from .errors import InvalidMixture, RutnetError
from .metrics import evaluate
from .mixture import MixtureDesign, parse_grade, validate
from .nn import TrainConfig
from .pipeline import DEFAULT_HIDDEN, train_from_csv
from .predict import DEFAULT_GRID, predict_curve, predict_raw_batch, sensitivity_sweep
from .synth import SynthConfig, generate_dataset

SPEC_KEYS = {
    "mix_type": str,
    "htpg_c": float,
    "ltpg_c": float,
    "ac_pct": float,
    "nmas_mm": float,
    "rap_pct": float,
    "ras_pct": float,
    "gradation": str,
    "agg_type": str,
    "crc_pct": float,
}


def parse_mix_spec(spec: str) -> MixtureDesign:
    kwargs = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InvalidMixture(f"mix SPEC entry {item!r} is not key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in SPEC_KEYS:
            raise InvalidMixture(f"unknown mix SPEC key {key!r}; valid: {sorted(SPEC_KEYS)}")
        caster = SPEC_KEYS[key]
        try:
            kwargs[key] = caster(value.strip())
        except ValueError:
            raise InvalidMixture(f"mix SPEC key {key}: {value!r} is not a number") from None
    return MixtureDesign(**kwargs)


def _split_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_gen(args) -> int:
    cfg = SynthConfig(
        n_mixes=args.mixes, points_per_curve=args.points, noise_std_mm=args.noise, seed=args.seed
    )
    csv_text = serialize_hwtt_csv(generate_dataset(cfg))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    print(f"wrote {args.out}: {args.mixes} curves x {args.points} points")
    return 0


def _cmd_train(args) -> int:
    with open(args.data, "r", encoding="utf-8") as fh:
        csv_text = fh.read()
    hidden = tuple(int(d) for d in args.hidden.split(",") if d.strip())
    cfg = TrainConfig(
        batch_size=args.batch,
        max_epochs=args.epochs,
        learning_rate=args.lr,
        patience=args.patience,
        shuffle_seed=args.seed,
        init_seed=args.seed,
    )
    art, history, report, _ = train_from_csv(
        csv_text, cfg, split_mode=args.split, split_seed=args.seed, hidden_dims=hidden
    )
    save_artifact(art, args.out)
    summary = {
        "model": args.out,
        "history": {
            "best_epoch": history.best_epoch,
            "stopped_epoch": history.stopped_epoch,
            "train_loss": history.train_loss,
            "val_loss": history.val_loss,
        },
        "eval": report.as_dict(),
    }
    summary_path = args.out + ".summary.json"
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    test = report.test
    print(
        f"trained {len(history.val_loss)} epochs (best {history.best_epoch}); "
        f"test rmse {test.rmse_mm:.4f} mm, mae {test.mae_mm:.4f} mm, "
        f"r2 {test.r2 if test.r2 is not None else 'n/a'}"
    )
    print(f"wrote {args.out} and {summary_path}")
    return 0


def _cmd_eval(args) -> int:
    art = load_artifact(args.model)
    with open(args.data, "r", encoding="utf-8") as fh:
        csv_text = fh.read()
    rows = expand_rows(parse_hwtt_csv(csv_text))
    stored = art.provenance.get("split", {})
    mode = args.split or stored.get("mode", "row")
    seed = args.seed if args.seed is not None else stored.get("seed", 0)
    split = split_rows(rows, seed=seed, mode=mode)
    report = evaluate(lambda X: predict_raw_batch(art, X), split)
    print(json.dumps(report.as_dict(), indent=1, sort_keys=True))
    return 0


def _warn_extrapolation(mix: MixtureDesign, temp_c: float) -> None:
    for violation in validate(mix, temp_c):
        print(f"warning: {violation.describe()}", file=sys.stderr)


def _cmd_predict(args) -> int:
    art = load_artifact(args.model)
    mix = parse_mix_spec(args.mix)
    grid = _split_floats(args.grid) if args.grid else DEFAULT_GRID
    _warn_extrapolation(mix, args.temp)
    curve = predict_curve(art, mix, args.temp, grid)
    print("pass,raw_mm,clamped_mm")
    for p, raw, clamped in zip(curve.grid, curve.raw_mm, curve.clamped_mm):
        print(f"{p:g},{raw:.6f},{clamped:.6f}")
    return 0


def _cmd_sweep(args) -> int:
    art = load_artifact(args.model)
    mix = parse_mix_spec(args.mix)
    if args.factor == "grade":
        values = [parse_grade(tok) for tok in args.values.split(",") if tok.strip()]
    elif args.factor in ("gradation", "agg_type", "mix_type"):
        values = [tok.strip() for tok in args.values.split(",") if tok.strip()]
    else:
        values = _split_floats(args.values)
    _warn_extrapolation(mix, args.temp)
    result = sensitivity_sweep(art, mix, args.temp, args.factor, values)
    print("factor,value,pass,raw_mm,clamped_mm")
    for value, curve in result.entries:
        label = f"{value[0]:g}/{value[1]:g}" if args.factor == "grade" else f"{value}"
        for p, raw, clamped in zip(curve.grid, curve.raw_mm, curve.clamped_mm):
            print(f"{args.factor},{label},{p:g},{raw:.6f},{clamped:.6f}")
    return 0


def _cmd_serve(args) -> int:
    from .server import run_server

    art = load_artifact(args.model)
    run_server(
        art,
        host=args.host,
        port=args.port,
        ui_dir=args.ui,
        fe_threshold=args.fe_threshold,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rutnet",
        description="Train and query a rut-depth model for Hamburg wheel tracking.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic HWTT dataset CSV")
    gen.add_argument("--mixes", type=int, default=50)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--points", type=int, default=200)
    gen.add_argument("--noise", type=float, default=0.05)
    gen.set_defaults(func=_cmd_gen)

    train = sub.add_parser("train", help="train a model from a dataset CSV")
    train.add_argument("--data", required=True)
    train.add_argument("--out", required=True)
    train.add_argument("--split", choices=("row", "curve"), default="row")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--epochs", type=int, default=1000)
    train.add_argument("--batch", type=int, default=10)
    train.add_argument("--lr", type=float, default=0.001)
    train.add_argument("--patience", type=int, default=50)
    train.add_argument("--hidden", default=",".join(str(d) for d in DEFAULT_HIDDEN))
    train.set_defaults(func=_cmd_train)

    ev = sub.add_parser("eval", help="evaluate a model against a dataset CSV")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data", required=True)
    ev.add_argument("--split", choices=("row", "curve"), default=None)
    ev.add_argument("--seed", type=int, default=None)
    ev.set_defaults(func=_cmd_eval)

    pred = sub.add_parser("predict", help="predict a full rut-depth curve")
    pred.add_argument("--model", required=True)
    pred.add_argument("--mix", required=True, help="mixture SPEC (see top-level help)")
    pred.add_argument("--temp", type=float, required=True)
    pred.add_argument("--grid", default=None, help="comma-separated pass counts")
    pred.set_defaults(func=_cmd_predict)

    sweep = sub.add_parser("sweep", help="one-factor-at-a-time sensitivity sweep")
    sweep.add_argument("--model", required=True)
    sweep.add_argument("--mix", required=True)
    sweep.add_argument("--temp", type=float, required=True)
    sweep.add_argument(
        "--factor",
        required=True,
        choices=(
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
        ),
    )
    sweep.add_argument("--values", required=True, help="comma-separated factor values")
    sweep.set_defaults(func=_cmd_sweep)

    serve = sub.add_parser("serve", help="serve the HTTP prediction API")
    serve.add_argument("--model", required=True)
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui", default=None, help="directory of static UI files to serve")
    serve.add_argument(
        "--fe-threshold",
        type=float,
        default=None,
        help="default fracture-energy threshold for the performance-space diagram",
    )
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RutnetError as exc:
        print(f"error:{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error:Io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

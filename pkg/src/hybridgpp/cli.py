"""Command-line front end: simulate, gsa, train, predict, baseline, evaluate.

Exit status is 0 on success, 1 on a runtime error and 2 on a usage error.
Every subcommand accepts ``--config file.json`` whose keys (flag names with
dashes replaced by underscores) supply defaults; explicit flags win.
"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import baselines, gsa, metrics, pipeline, sampling
from .errors import HybridGppError
from .ml import features, io
from .ml.forest import forest_predict, forest_train, low_gpp_weights
from .ml.mlp import mlp_train, r2_score
from .ml.split import split_dataset
from .spectral import load_sensor

log = logging.getLogger("hybridgpp")


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v)


def _names(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def parse_subrange(text):
    """``"lo:hi"`` with either end optional (open ends are infinite)."""
    try:
        lo, hi = text.split(":")
        lo = float(lo) if lo.strip() else -np.inf
        hi = float(hi) if hi.strip() else np.inf
    except ValueError:
        raise argparse.ArgumentTypeError(f"sub-range must look like lo:hi, got {text!r}")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"sub-range {text!r} is empty")
    return lo, hi


def _space(path):
    return sampling.ParameterSpace.from_json(path) if path else None


def cmd_simulate(a):
    space = _space(a.space) or sampling.default_space()
    sensor = load_sensor(a.sensor)
    ts = sampling.generate_training_set(space, a.n, a.lowlai, a.seed, sensor, a.vcmax_mode, a.threads)
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sampling.write_training_csv(ts, out / "training.csv")
    sampling.write_diagnostics_csv(ts, out / "diagnostics.csv")
    log.info("wrote %d rows (%d failed) to %s", len(ts), ts.n_failed, out)


def cmd_gsa(a):
    space = _space(a.space) or sampling.vegetation_space()
    cfg = gsa.PawnConfig(nu=a.nu, nc=a.nc, n_cond=a.ncond, seed=a.seed)
    model = gsa.gpp_model(space, vcmax_mode=a.vcmax_mode)
    full, (y_u, y_c) = gsa.pawn_indices(model, space, cfg, threads=a.threads, return_outputs=True)
    x_u, x_c, cond = gsa.pawn_design(space, cfg)
    subs = {}
    for lo, hi in a.subrange or []:
        sub_cfg = replace(cfg, subrange=(lo, hi))
        subs[f"{lo:g}:{hi:g}"] = gsa.pawn_from_outputs(space.names, y_u, y_c, cond, sub_cfg, full.n_failed)
    gsa.write_report(a.out, full, subs)
    for name in full.ranking()[:3]:
        log.info("%s %.3f", name, full.index_of(name))


def _load_training(a):
    diag = a.diagnostics
    if diag is None:
        guess = Path(a.data).with_name("diagnostics.csv")
        diag = guess if guess.exists() else None
    sensor = load_sensor(a.sensor)
    ts = sampling.read_training_csv(a.data, diag, sensor.name)
    if ts.band_ids != sensor.band_ids:
        cols = [ts.band_ids.index(b) for b in sensor.band_ids]
        ts.bands = ts.bands[:, cols]
        ts.band_ids = sensor.band_ids
    return ts


def cmd_train(a):
    ts = _load_training(a)
    tr, te = split_dataset(len(ts), a.split, a.seed)
    x = features.raw_features(ts, a.layout)
    y = features.targets(ts, a.targets)
    kw = dict(n_bands=len(ts.band_ids), sensor_name=ts.sensor_name, band_ids=ts.band_ids, layout=a.layout)
    if a.model == "mlp":
        hyper = {"seed": a.seed, "epochs": a.epochs, "batch": a.batch, "lr": a.lr, "patience": a.patience}
        model, report = mlp_train((x[tr], y[tr]), (x[te], y[te]), a.arch, hyper, targets=a.targets, **kw)
        summary = report.to_json()
    else:
        if len(a.targets) != 1:
            raise ValueError("the forest predicts a single target")
        hyper = {"trees": a.trees, "max_depth": a.max_depth, "min_leaf": a.min_leaf, "seed": a.seed}
        if a.low_gpp_weight:
            hyper["sample_weights"] = low_gpp_weights(ts.gpp[tr], a.low_gpp_weight)
        model = forest_train((x[tr], y[tr, 0]), hyper, target=a.targets[0], threads=a.threads, **kw)
        summary = {"n_train": len(tr), "n_test": len(te), "seed": a.seed,
                   "r2_train": {a.targets[0]: r2_score(y[tr, 0], forest_predict(model, x[tr]))}}
        if len(te):
            summary["r2_test"] = {a.targets[0]: r2_score(y[te, 0], forest_predict(model, x[te]))}
    io.save_model(model, a.out)
    summary.pop("wall_time_s", None)
    report_path = a.report or str(Path(a.out).with_suffix(".report.json"))
    with open(report_path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    log.info("test r2 %s", summary.get("r2_test"))


def cmd_predict(a):
    model = io.load_model(a.model)
    sensor = load_sensor(a.sensor) if a.sensor else load_sensor(model.sensor_name)
    if model.sensor_name and sensor.name != model.sensor_name:
        raise pipeline.SensorMismatchError(f"model trained for {model.sensor_name!r}, pixels are {sensor.name!r}")
    obs = pipeline.read_pixels_csv(a.pixels, sensor)
    meteo = pipeline.read_meteo_csv(a.meteo)
    records = pipeline.predict_all(obs, meteo, model, a.threads)
    pipeline.write_daily_csv(records, a.out)
    if a.fields_out:
        pipeline.write_field_csv(pipeline.aggregate_fields(records), a.fields_out)


def cmd_baseline(a):
    sensor = load_sensor(a.sensor)
    obs = pipeline.read_pixels_csv(a.pixels, sensor)
    meteo = pipeline.read_meteo_csv(a.meteo)
    import csv
    with open(a.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pixel_id", "field_id", "date", "vi", "par_in_mj_m2_d", "gpp_raw", "gpp_gc_m2_d"])
        for o in sorted(obs, key=lambda o: (o.field_id, o.pixel_id, o.date)):
            steps = meteo.for_date(o.date)
            rin_mj = sum(m["rin"] for _, m in steps) * pipeline.STEP_SECONDS * 1e-6
            par = float(baselines.par_in(rin_mj))
            vi = float(baselines.compute_vi(o.bands, a.vi))
            raw = float(baselines.vi_gpp_raw(vi, par, a.vi))
            w.writerow([o.pixel_id, o.field_id, o.date.isoformat(), sampling.fmt(vi), sampling.fmt(par),
                        sampling.fmt(raw), sampling.fmt(max(raw, 0.0))])


def cmd_evaluate(a):
    report = metrics.evaluate_files(a.pred, a.ref)
    metrics.write_report(report, a.out)
    print(report.table())


def build_parser():
    p = argparse.ArgumentParser(prog="hybridgpp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--config", help="JSON file of default flag values")
        sp.add_argument("--threads", type=int, default=1)
        if seed:
            sp.add_argument("--seed", type=int, default=1)

    s = sub.add_parser("simulate", help="generate the synthetic training corpus")
    common(s)
    s.add_argument("--n", type=int, default=50000)
    s.add_argument("--lowlai", type=int, default=3000)
    s.add_argument("--sensor", default="sentinel2")
    s.add_argument("--space", help="parameter-space JSON")
    s.add_argument("--vcmax-mode", default="cab-coupled", choices=("cab-coupled", "constant-100"))
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("gsa", help="PAWN sensitivity of simulated GPP")
    common(s)
    s.add_argument("--nu", type=int, default=500)
    s.add_argument("--nc", type=int, default=100)
    s.add_argument("--ncond", type=int, default=10)
    s.add_argument("--space", help="parameter-space JSON")
    s.add_argument("--vcmax-mode", default="cab-coupled", choices=("cab-coupled", "constant-100"))
    s.add_argument("--subrange", type=parse_subrange, action="append", help="output sub-range lo:hi")
    s.add_argument("--out", default="pawn.csv")
    s.set_defaults(func=cmd_gsa)

    s = sub.add_parser("train", help="fit an MLP or forest on a training CSV")
    common(s)
    s.add_argument("--data", required=True)
    s.add_argument("--diagnostics")
    s.add_argument("--sensor", default="sentinel2")
    s.add_argument("--model", default="mlp", choices=("mlp", "forest"))
    s.add_argument("--arch", type=_ints, default=(20, 12))
    s.add_argument("--targets", type=_names, default=("gpp",))
    s.add_argument("--layout", default="case2", choices=features.LAYOUTS)
    s.add_argument("--split", type=float, default=0.85)
    s.add_argument("--epochs", type=int, default=200)
    s.add_argument("--batch", type=int, default=32)
    s.add_argument("--lr", type=float, default=1e-3)
    s.add_argument("--patience", type=int, default=10)
    s.add_argument("--trees", type=int, default=100)
    s.add_argument("--max-depth", type=int)
    s.add_argument("--min-leaf", type=int, default=1)
    s.add_argument("--low-gpp-weight", type=float)
    s.add_argument("--out", default="model.json")
    s.add_argument("--report")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("predict", help="daily GPP for pixel observations")
    common(s, seed=False)
    s.add_argument("--model", required=True)
    s.add_argument("--pixels", required=True)
    s.add_argument("--meteo", required=True)
    s.add_argument("--sensor")
    s.add_argument("--out", default="daily_gpp.csv")
    s.add_argument("--fields-out")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("baseline", help="vegetation-index GPP")
    common(s, seed=False)
    s.add_argument("--vi", required=True, choices=[k.value for k in baselines.ViKind])
    s.add_argument("--pixels", required=True)
    s.add_argument("--meteo", required=True)
    s.add_argument("--sensor", default="sentinel2")
    s.add_argument("--out", default="vi_gpp.csv")
    s.set_defaults(func=cmd_baseline)

    s = sub.add_parser("evaluate", help="compare field-level daily GPP with a reference")
    common(s, seed=False)
    s.add_argument("--pred", required=True)
    s.add_argument("--ref", required=True)
    s.add_argument("--out", default="eval.json")
    s.set_defaults(func=cmd_evaluate)
    return p


def _apply_config(parser, argv):
    """Re-parse with defaults taken from --config when given."""
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        with open(args.config) as f:
            cfg = json.load(f)
        sp = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sp._actions}
        unknown = set(cfg) - known
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        sp.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def run(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except (HybridGppError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())

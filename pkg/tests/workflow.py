"""Run every CLI subcommand into a directory; shared by the CLI and acceptance tests."""
import csv
from datetime import date

from hybridgpp import pipeline, sampling, synthetic
from hybridgpp.cli import run
from hybridgpp.spectral import load_sensor

DAY = date(2021, 7, 1)
LAT, LON = 51.0, 10.0


def write_inputs(d, n_pixels=6, seed=3):
    """Synthetic pixels, 3-hourly meteorology and a simulator-truth reference table."""
    s2 = load_sensor("sentinel2")
    space = sampling.vegetation_space()
    batch, _, _ = sampling.design_to_batch(space, sampling.lhs_sample(space, n_pixels, seed))
    fields = [f"f{i // 2}" for i in range(n_pixels)]
    obs = synthetic.synthetic_pixels(batch, s2, LAT, LON, synthetic.noon_utc(DAY, LON), field_ids=fields)
    met = pipeline.synthetic_meteo(DAY, lon=LON)
    pipeline.write_pixels_csv(obs, d / "pixels.csv", s2.band_ids)
    pipeline.write_meteo_csv(met, d / "meteo.csv")
    ref = synthetic.reference_daily(batch, met, LAT, LON, DAY)
    with open(d / "ref.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["field_id", "date", "gpp_gc_m2_d"])
        for fid in sorted(set(fields)):
            vals = [r for r, g in zip(ref, fields) if g == fid]
            w.writerow([fid, DAY.isoformat(), sampling.fmt(sum(vals) / len(vals))])


def run_all(d, threads, seed=1, n=2500, lowlai=150):
    """Every subcommand once; returns {name: exit code}."""
    d.mkdir(parents=True, exist_ok=True)
    write_inputs(d)
    t = ["--threads", str(threads)]
    codes = {
        "simulate": run(["simulate", "--n", str(n), "--lowlai", str(lowlai), "--seed", str(seed),
                         "--out-dir", str(d / "sim"), *t]),
        "gsa": run(["gsa", "--nu", "300", "--nc", "60", "--ncond", "5", "--seed", str(seed), "--subrange", "5:",
                    "--out", str(d / "pawn.csv"), *t]),
    }
    codes["train"] = run(["train", "--data", str(d / "sim" / "training.csv"), "--arch", "12,12", "--targets",
                          "gpp,lai", "--epochs", "15", "--seed", str(seed), "--out", str(d / "model.json"), *t])
    codes["train_forest"] = run(["train", "--model", "forest", "--trees", "4", "--data",
                                 str(d / "sim" / "training.csv"), "--seed", str(seed),
                                 "--out", str(d / "forest.json"), *t])
    codes["predict"] = run(["predict", "--model", str(d / "model.json"), "--pixels", str(d / "pixels.csv"),
                            "--meteo", str(d / "meteo.csv"), "--out", str(d / "daily_gpp.csv"),
                            "--fields-out", str(d / "fields.csv"), *t])
    codes["baseline"] = run(["baseline", "--vi", "re_ndvi", "--pixels", str(d / "pixels.csv"), "--meteo",
                             str(d / "meteo.csv"), "--out", str(d / "vi.csv"), *t])
    codes["evaluate"] = run(["evaluate", "--pred", str(d / "fields.csv"), "--ref", str(d / "ref.csv"),
                             "--out", str(d / "eval.json"), *t])
    return codes


OUTPUTS = ("sim/training.csv", "sim/diagnostics.csv", "pawn.csv", "model.json", "model.report.json",
           "forest.json", "forest.report.json", "daily_gpp.csv", "fields.csv", "vi.csv", "eval.json")

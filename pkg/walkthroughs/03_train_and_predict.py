# coding: utf-8

# # From simulations to daily GPP
#
# Simulate a training corpus, fit a small network that maps reflectance,
# sun angles and weather to GPP, then apply it to a few synthetic fields.
# The corpus here is small so the script runs in about a minute; expect a
# rougher fit than a full 50 000-row corpus gives.

from datetime import date

from hybridgpp import pipeline, sampling, synthetic
from hybridgpp.ml import mlp_train, split_dataset
from hybridgpp.ml.features import raw_features, targets
from hybridgpp.spectral import load_sensor

s2 = load_sensor("sentinel2")
ts = sampling.generate_training_set(sampling.default_space(), 8000, 500, 1, s2)
print(len(ts), "rows,", int(ts.aug_flag.sum()), "of them low-LAI augmentation")

x, y = raw_features(ts), targets(ts, ["gpp", "lai"])
tr, te = split_dataset(len(ts), 0.85, 1)
model, rep = mlp_train((x[tr], y[tr]), (x[te], y[te]), (20, 12), {"epochs": 60}, targets=("gpp", "lai"),
                       n_bands=len(s2.band_ids), sensor_name=s2.name, band_ids=s2.band_ids)
print(f"epochs {rep.epochs_run}, test r2 gpp {rep.r2_test['gpp']:.3f}, lai {rep.r2_test['lai']:.3f}")

# ## Applying the model
#
# One clear-sky observation per pixel, 3-hourly weather for the day. The
# model is evaluated at every daylight step and the steps are summed.

day, lat, lon = date(2021, 7, 1), 51.0, 10.0
space = sampling.vegetation_space()
batch, _, _ = sampling.design_to_batch(space, sampling.lhs_sample(space, 9, 5))
fields = ["north", "north", "north", "mid", "mid", "mid", "south", "south", "south"]
obs = synthetic.synthetic_pixels(batch, s2, lat, lon, synthetic.noon_utc(day, lon), field_ids=fields)
meteo = pipeline.synthetic_meteo(day, lon=lon)

records = pipeline.predict_all(obs, meteo, model)
truth = synthetic.reference_daily(batch, meteo, lat, lon, day)
for rec, o, t in zip(records, obs, truth):
    print(f"{o.pixel_id} {o.field_id:5s} predicted {rec.gpp_daily:5.2f}  simulated {t:5.2f}  gC m-2 d-1")

for (fid, when), (mean, n) in pipeline.aggregate_fields(records).items():
    print(f"field {fid} on {when}: {mean:.2f} gC m-2 d-1 over {n} pixels")

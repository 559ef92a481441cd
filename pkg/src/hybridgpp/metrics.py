"""Agreement statistics between predicted and reference daily GPP."""
import csv
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateInputError
from .sampling import fmt


@dataclass
class EvalReport:
    n: int
    r2: float | None
    r2_one_to_one: float | None
    rmse: float
    bias: float
    slope: float | None
    intercept: float | None
    per_field: dict = field(default_factory=dict)

    def to_json(self):
        return asdict(self)

    def table(self):
        def f(v):
            return "n/a" if v is None else f"{v:.4f}"
        lines = [f"{'group':<16}{'n':>6}{'r2':>10}{'rmse':>10}{'bias':>10}",
                 f"{'all':<16}{self.n:>6}{f(self.r2):>10}{f(self.rmse):>10}{f(self.bias):>10}"]
        for k, d in self.per_field.items():
            lines.append(f"{k:<16}{d['n']:>6}{f(d['r2']):>10}{f(d['rmse']):>10}{f(d['bias']):>10}")
        return "\n".join(lines)


def _stats(pred, ref):
    pred = np.asarray(pred, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if pred.shape != ref.shape or pred.ndim != 1:
        raise ValueError("pred and ref must be vectors of equal length")
    if pred.size < 2:
        raise ValueError("metrics need at least two pairs")
    diff = pred - ref
    rmse = float(np.sqrt(np.mean(diff ** 2)))
    bias = float(np.mean(diff))
    return pred, ref, rmse, bias


def metrics(pred, ref, strict=True):
    """Squared Pearson r2 (headline), 1:1-line r2, RMSE, bias, regression slope and intercept.

    A constant reference leaves r2 undefined: with ``strict`` a
    DegenerateInputError is raised (it carries the rmse and bias), otherwise
    the r2 fields are None.
    """
    pred, ref, rmse, bias = _stats(pred, ref)
    rc = ref - ref.mean()
    sst = float(np.sum(rc ** 2))
    if sst == 0:
        if strict:
            err = DegenerateInputError(f"reference is constant; r2 undefined (rmse={rmse:.6g}, bias={bias:.6g})")
            err.rmse, err.bias = rmse, bias
            raise err
        return EvalReport(int(pred.size), None, None, rmse, bias, None, None)
    pc = pred - pred.mean()
    spp = float(np.sum(pc ** 2))
    r2 = 0.0 if spp == 0 else float(np.sum(pc * rc) ** 2 / (spp * sst))
    r2_11 = float(1.0 - np.sum((pred - ref) ** 2) / sst)
    slope = float(np.sum(pc * rc) / sst)
    intercept = float(pred.mean() - slope * ref.mean())
    return EvalReport(int(pred.size), min(r2, 1.0), r2_11, rmse, bias, slope, intercept)


def metrics_by_field(field_ids, pred, ref):
    """Overall report plus a per-field breakdown (fields with < 2 pairs get rmse/bias only)."""
    report = metrics(pred, ref)
    field_ids = np.asarray(field_ids)
    pred = np.asarray(pred, dtype=float)
    ref = np.asarray(ref, dtype=float)
    for fid in sorted(set(field_ids.tolist())):
        m = field_ids == fid
        if m.sum() >= 2:
            sub = metrics(pred[m], ref[m], strict=False)
            report.per_field[fid] = {"n": sub.n, "r2": sub.r2, "rmse": sub.rmse, "bias": sub.bias}
        else:
            d = float(pred[m][0] - ref[m][0])
            report.per_field[fid] = {"n": 1, "r2": None, "rmse": abs(d), "bias": d}
    return report


def read_daily_table(path, value_col="gpp_gc_m2_d"):
    """{(field_id, date_str): value} from a reference or field-aggregate CSV."""
    with open(path, newline="") as f:
        return {(r["field_id"], r["date"]): float(r[value_col]) for r in csv.DictReader(f)}


def evaluate_files(pred_path, ref_path):
    """Join field-level predictions and references on (field_id, date)."""
    pred = read_daily_table(pred_path)
    ref = read_daily_table(ref_path)
    keys = sorted(set(pred) & set(ref))
    if len(keys) < 2:
        raise ValueError("fewer than two (field, date) pairs in common")
    return metrics_by_field([k[0] for k in keys], [pred[k] for k in keys], [ref[k] for k in keys])


def write_report(report, json_path):
    with open(json_path, "w") as f:
        json.dump(report.to_json(), f, indent=2, sort_keys=True)
        f.write("\n")


def write_pairs_csv(path, keys, pred, ref):
    """Plot-ready scatter pairs."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["field_id", "date", "pred", "ref"])
        for k, p, r in zip(keys, pred, ref):
            w.writerow([k[0], k[1], fmt(p), fmt(r)])

"""CSV and JSON serialization of simulation reports.

Every table goes to its own CSV file (header row, comma separated, floats
in shortest round-trip form, empty cell for an unavailable value). The
whole report also goes to report.json, versioned by `schema_version`, with
unavailable values as null so that parsing and re-serializing it gives the
same bytes.

Files written by `write_report`:

* error_table.csv: parameter, ME, MAE, RMSE, SD
* ratio_table.csv: row, ratio, script_ratio
* pvalues.csv: method, a, b (marginal rejection frequencies at 5%)
* omnibus.csv: method, rejection_rate, mean_p_value
* qq_<param>_<method>.csv: theoretical, empirical
* parzen_<param>_<method>.csv: x, density
* report.json
"""
import csv
import json
import logging
import math
import numbers
import os

from .misc_helpers import MomentUtilitiesError
from .montecarlo import parzen_density, qq_plot_data, silverman_bandwidth, \
    standardized_statistics

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
PARZEN_POINTS = 201


def clean_number(value):
    """float(value), or None for None, NaN and infinities"""
    if value is None:
        return None
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return None
    return value


def _cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(int(value))
    value = clean_number(value)
    return "" if value is None else repr(value)


def write_csv(path, header, rows):
    """Write one table; returns the path"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    log.debug("wrote %s", path)
    return path


def dumps_json(document):
    """Canonical JSON text of a document (sorted keys, indent 2)"""
    return json.dumps(document, sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def write_json(path, document):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_json(document))
    log.debug("wrote %s", path)
    return path


def covariance_dict(sigma):
    return {"method": sigma.method,
            "s11": clean_number(sigma.s11),
            "s22": clean_number(sigma.s22),
            "s12": clean_number(sigma.s12),
            "det": clean_number(sigma.det),
            "correlation": clean_number(sigma.correlation)}


def influence_dict(influence):
    return {"c1": clean_number(influence.c1),
            "c2": clean_number(influence.c2),
            "center": clean_number(influence.center)}


def report_to_dict(report):
    """JSON-ready summary of a SimulationReport"""
    cfg = report.config
    H, L = report.influences
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {"law": cfg.law.kind, "a": cfg.law.a, "b": cfg.law.b,
                   "n": cfg.n, "B": cfg.B, "master_seed": cfg.master_seed,
                   "coefficient_mode": cfg.coefficient_mode,
                   "sigma_methods": list(cfg.sigma_methods)},
        "influences": {"H": influence_dict(H), "L": influence_dict(L)},
        "feasible_count": report.feasible_count,
        "infeasible_count": report.infeasible_count,
        "sigmas": {m: covariance_dict(s) for m, s in report.sigmas.items()},
        "error_table": {
            name: {"ME": clean_number(row.me), "MAE": clean_number(row.mae),
                   "RMSE": clean_number(row.rmse),
                   "SD": clean_number(row.sd)}
            for name, row in report.error_table.items()},
        "ratio_table": [
            {"row": r.name, "ratio": clean_number(r.ratio),
             "script_ratio": clean_number(r.script_ratio)}
            for r in report.ratio_table or []],
        "pvalues": [
            {"method": r.method, "a": clean_number(r.a),
             "b": clean_number(r.b)} for r in report.pvalue_table],
        "omnibus": [
            {"method": r.method,
             "rejection_rate": clean_number(r.rejection_rate),
             "mean_p_value": clean_number(r.mean_p_value)}
            for r in report.omnibus_table],
    }


def _write_figures(report, output_dir):
    paths = []
    for (param, method), values in sorted(
            standardized_statistics(report).items()):
        stem = "%s_%s" % (param, method)
        paths.append(write_csv(os.path.join(output_dir, "qq_%s.csv" % stem),
                               ["theoretical", "empirical"],
                               qq_plot_data(values)))
        try:
            bandwidth = silverman_bandwidth(values)
        except MomentUtilitiesError as err:
            log.warning("no Parzen curve for %s: %s", stem, err)
            continue
        lo = float(values.min()) - 3.0 * bandwidth
        hi = float(values.max()) + 3.0 * bandwidth
        paths.append(write_csv(
            os.path.join(output_dir, "parzen_%s.csv" % stem),
            ["x", "density"],
            parzen_density(values, lo, hi, PARZEN_POINTS, bandwidth)))
    return paths


def write_report(report, output_dir):
    """Write all tables, figure data and report.json of one run

    Parameters
    ----------
    report : SimulationReport
        The run to serialize.
    output_dir : str
        Directory, created if missing.

    Returns
    -------
    list
        Paths written, in writing order

    Raises
    ------
    OSError
        If the directory cannot be created or written

    """
    os.makedirs(output_dir, exist_ok=True)
    paths = [write_csv(
        os.path.join(output_dir, "error_table.csv"),
        ["parameter", "ME", "MAE", "RMSE", "SD"],
        [(name, row.me, row.mae, row.rmse, row.sd)
         for name, row in sorted(report.error_table.items())])]
    paths.append(write_csv(
        os.path.join(output_dir, "ratio_table.csv"),
        ["row", "ratio", "script_ratio"],
        [tuple(r) for r in report.ratio_table or []]))
    paths.append(write_csv(
        os.path.join(output_dir, "pvalues.csv"), ["method", "a", "b"],
        [tuple(r) for r in report.pvalue_table]))
    paths.append(write_csv(
        os.path.join(output_dir, "omnibus.csv"),
        ["method", "rejection_rate", "mean_p_value"],
        [tuple(r) for r in report.omnibus_table]))
    paths.extend(_write_figures(report, output_dir))
    paths.append(write_json(os.path.join(output_dir, "report.json"),
                            report_to_dict(report)))
    log.info("wrote %d files to %s", len(paths), output_dir)
    return paths


def write_sweep(reports, output_dir):
    """Write each report of a sweep to n<size>/ plus a sweep.csv summary

    sweep.csv has one row per sample size with the error table of both
    parameters and the omnibus rejection rate of every Sigma method.
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    for report in reports:
        paths.extend(write_report(
            report, os.path.join(output_dir, "n%d" % report.config.n)))
    methods = [r.method for r in reports[0].omnibus_table] if reports else []
    header = ["n", "infeasible"]
    for name in ("a", "b"):
        header += ["ME_%s" % name, "MAE_%s" % name, "RMSE_%s" % name]
    header += ["omnibus_%s" % m for m in methods]
    rows = []
    for report in reports:
        row = [report.config.n, report.infeasible_count]
        for name in ("a", "b"):
            err = report.error_table[name]
            row += [err.me, err.mae, err.rmse]
        row += [r.rejection_rate for r in report.omnibus_table]
        rows.append(row)
    paths.append(write_csv(os.path.join(output_dir, "sweep.csv"), header,
                           rows))
    return paths

"""Command-line front end: ``moment-utilities <command> ...``

Commands:

* coeffs LAW A B: influence coefficients and exact Sigma of a law
* estimate LAW [FILE]: moment estimates of a sample
* test LAW A0 B0 [FILE]: marginal and omnibus tests of H0: (a, b) = (A0, B0)
* simulate LAW A B --seed S: Monte-Carlo run, tables written to disk

Exit codes: 0 success (H0 not rejected for ``test``), 2 invalid input or
domain error, 3 H0 rejected by the omnibus test, 4 singular Sigma.

Sample files hold one number per line; text after ``#`` is ignored. With
``--column NAME`` the file is read as CSV with a header row instead.
The default output directory of ``simulate`` is taken from the
MOMENT_UTILITIES_OUTPUT_DIR environment variable.
"""
import argparse
import csv
import io
import logging
import os
import sys

import numpy as np

from .asymptotics import CANONICAL, COEFFICIENT_MODES, EXACT_MOMENTS, \
    EXACT_QUADRATURE, PAPER, PLUGIN, REPLICATION, SIGMA_METHODS, \
    covariance_exact_moments, covariance_exact_quadrature, \
    covariance_plugin, influence_pair
from .distributions import LAW_KINDS, LawSpec
from .estimation import empirical_moments, estimate
from .hypothesis_tests import marginal_test, omnibus_test
from .misc_helpers import ConfigError, MomentUtilitiesError, \
    SampleParseError, SingularCovarianceError, make_list
from .montecarlo import SimulationConfig, run_simulation, run_sweep
from .report_writers import covariance_dict, dumps_json, influence_dict, \
    report_to_dict, write_report, write_sweep
from .special import SCRIPT_QUADRATURE, QuadratureConfig

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_REJECT = 3
EXIT_SINGULAR = 4

OUTPUT_DIR_ENV = "MOMENT_UTILITIES_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "simulation_output"

# correlations of the published exact-coefficient table (Gamma laws)
PUBLISHED_CORRELATIONS = {(2.0, 3.0): 0.6976, (3.0, 10.0): 0.9811,
                          (10.0, 3.0): 0.9395}

# covariance cells of that table printed unreadably, by (a, b)
GARBLED_COVARIANCES = {(3.0, 10.0): "7.985.01"}


def read_sample(handle, column=None):
    """Read a sample from an open text file

    Parameters
    ----------
    handle : file
        Text stream.
    column : str, optional
        Read the file as CSV with a header row and take this column.

    Returns
    -------
    numpy.ndarray
        The values in file order

    Raises
    ------
    SampleParseError
        On an unparsable entry (with its line number), a missing column or
        an empty sample

    """
    values = []
    if column is None:
        for line_no, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            values.append(_parse_number(text, line_no))
    else:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise SampleParseError("column %r not found in header %r" %
                                   (column, reader.fieldnames), line=1)
        for row in reader:
            text = (row[column] or "").strip()
            if text:
                values.append(_parse_number(text, reader.line_num))
    if not values:
        raise SampleParseError("sample is empty")
    return np.array(values, dtype=float)


def _parse_number(text, line_no):
    try:
        value = float(text)
    except ValueError:
        raise SampleParseError("cannot parse %r as a number" % text,
                               line=line_no)
    if not np.isfinite(value):
        raise SampleParseError("value %r is not finite" % text, line=line_no)
    return value


def _load_sample(args):
    if args.values is not None:
        try:
            return read_sample(io.StringIO("\n".join(make_list(args.values))))
        except SampleParseError as err:
            raise SampleParseError("--values: %s" % err)
    if args.path is None or args.path == "-":
        return read_sample(sys.stdin, args.column)
    try:
        with open(args.path, encoding="utf-8") as handle:
            return read_sample(handle, args.column)
    except OSError as err:
        raise SampleParseError("cannot read %s: %s" % (args.path, err))


def _fmt(value):
    return "n/a" if value is None else "%.10g" % value


def _sigma_line(sigma):
    return "%-17s s11=%s s22=%s s12=%s det=%s correlation=%s" % (
        sigma.method + ":", _fmt(sigma.s11), _fmt(sigma.s22),
        _fmt(sigma.s12), _fmt(sigma.det), _fmt(sigma.correlation))


def _quadrature(args):
    if args.script_quadrature:
        return SCRIPT_QUADRATURE
    return QuadratureConfig(tol=args.tol)


def cmd_coeffs(args):
    law = LawSpec(args.law, args.a, args.b)
    cfg = _quadrature(args)
    modes = COEFFICIENT_MODES if args.mode == "both" else (args.mode,)
    document = {"law": str(law), "modes": {}}
    lines = []
    for mode in modes:
        H, L = influence_pair(law, mode)
        sigmas = [covariance_exact_quadrature(law, H, L, cfg),
                  covariance_exact_moments(law, H, L)]
        document["modes"][mode] = {
            "H": influence_dict(H), "L": influence_dict(L),
            "sigmas": {s.method: covariance_dict(s) for s in sigmas}}
        lines.append("%s, %s coefficients" % (law, mode))
        for name, f in (("H", H), ("L", L)):
            lines.append("  %s: c1=%s c2=%s center=%s" % (
                name, _fmt(f.c1), _fmt(f.c2), _fmt(f.center)))
        lines.extend("  " + _sigma_line(s) for s in sigmas)
    published = PUBLISHED_CORRELATIONS.get((law.a, law.b))
    if law.kind == "gamma" and published is not None:
        document["published_correlation"] = published
        lines.append("published correlation for %s: %s" %
                     (law, _fmt(published)))
    garbled = GARBLED_COVARIANCES.get((law.a, law.b))
    if law.kind == "gamma" and garbled is not None:
        computed = covariance_exact_moments(law, *influence_pair(law, PAPER))
        document["flagged_cell"] = {"entry": "s12", "published": garbled,
                                    "computed": computed.s12}
        lines.append("published s12 for %s is unreadable (%s), computed "
                     "%s coefficients give %s" % (law, garbled, PAPER,
                                                    _fmt(computed.s12)))
    _emit(args, document, lines)
    return EXIT_OK


def cmd_estimate(args):
    x = _load_sample(args)
    em = empirical_moments(x)
    est = estimate(args.law, em)
    document = {"law": est.kind, "a_hat": est.a_hat, "b_hat": est.b_hat,
                "moments": dict(em._asdict())}
    lines = ["%s moment estimates from n=%d" % (est.kind, em.n),
             "  a_hat=%s" % _fmt(est.a_hat),
             "  b_hat=%s" % _fmt(est.b_hat),
             "  mean=%s mean_sq=%s var_unbiased=%s var_biased=%s" % (
                 _fmt(em.mean), _fmt(em.mean_sq), _fmt(em.var_unbiased),
                 _fmt(em.var_biased))]
    _emit(args, document, lines)
    return EXIT_OK


def _test_sigma(args, law, x, H, L):
    if args.sigma == EXACT_MOMENTS:
        return covariance_exact_moments(law, H, L)
    if args.sigma == EXACT_QUADRATURE:
        return covariance_exact_quadrature(law, H, L, _quadrature(args))
    if args.sigma == PLUGIN:
        return covariance_plugin(x, H, L)
    if args.seed is None:
        raise ConfigError("--sigma replication requires --seed")
    cfg = SimulationConfig(law, n=x.size, B=args.replications,
                           master_seed=args.seed,
                           coefficient_mode=args.mode,
                           sigma_methods=(REPLICATION,),
                           workers=args.workers)
    return run_simulation(cfg).sigmas[REPLICATION]


def cmd_test(args):
    law = LawSpec(args.law, args.a0, args.b0)
    x = _load_sample(args)
    est = estimate(law.kind, empirical_moments(x))
    H, L = influence_pair(law, args.mode)
    sigma = _test_sigma(args, law, x, H, L)
    n = x.size
    omnibus = omnibus_test(est.a_hat, est.b_hat, law.a, law.b, n, sigma)
    reports = {
        "a": marginal_test(est.a_hat, law.a, sigma.s11, n, sigma.method),
        "b": marginal_test(est.b_hat, law.b, sigma.s22, n, sigma.method),
        "omnibus": omnibus}
    document = {"law": str(law), "a_hat": est.a_hat, "b_hat": est.b_hat,
                "n": n, "sigma": covariance_dict(sigma),
                "tests": {k: dict(r._asdict()) for k, r in reports.items()}}
    lines = ["H0: %s, n=%d, a_hat=%s, b_hat=%s" % (
        law, n, _fmt(est.a_hat), _fmt(est.b_hat)), "  " + _sigma_line(sigma)]
    for name, r in sorted(reports.items()):
        lines.append("  %-8s statistic=%s df=%d p=%s %s" % (
            name, _fmt(r.statistic), r.df, _fmt(r.p_value),
            "REJECT" if r.reject_at_5pct else "accept"))
    _emit(args, document, lines)
    return EXIT_REJECT if omnibus.reject_at_5pct else EXIT_OK


def cmd_simulate(args):
    if args.seed is None:
        raise ConfigError("simulate requires --seed")
    law = LawSpec(args.law, args.a, args.b)
    try:
        sizes = make_list(args.n, integer=True)
    except ValueError:
        raise ConfigError("--n must be an integer or comma-separated "
                          "integers, got %r" % args.n)
    methods = tuple(make_list(args.sigma)) if args.sigma else None
    cfg = SimulationConfig(law, n=sizes[0] if sizes else 0, B=args.B,
                           master_seed=args.seed, coefficient_mode=args.mode,
                           sigma_methods=methods, workers=args.workers,
                           quadrature=_quadrature(args))
    output_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV,
                                                   DEFAULT_OUTPUT_DIR)
    if len(sizes) == 1:
        reports = [run_simulation(cfg)]
        write_report(reports[0], output_dir)
    else:
        reports = run_sweep(cfg, sizes)
        write_sweep(reports, output_dir)

    lines = []
    for report in reports:
        lines.append("%s n=%d B=%d infeasible=%d" % (
            law, report.config.n, cfg.B, report.infeasible_count))
        for name, row in sorted(report.error_table.items()):
            lines.append("  %s: ME=%s MAE=%s RMSE=%s" % (
                name, _fmt(row.me), _fmt(row.mae), _fmt(row.rmse)))
        for row in report.pvalue_table:
            lines.append("  marginal %-17s a=%s b=%s" % (
                row.method, _fmt(row.a), _fmt(row.b)))
        for row in report.omnibus_table:
            lines.append("  omnibus  %-17s rejection=%s mean p=%s" % (
                row.method, _fmt(row.rejection_rate),
                _fmt(row.mean_p_value)))
    lines.append("tables written to %s" % output_dir)
    _emit(args, {"reports": [report_to_dict(r) for r in reports],
                 "output_dir": output_dir}, lines)
    return EXIT_OK


def _emit(args, document, lines):
    if args.format == "json":
        sys.stdout.write(dumps_json(document))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _add_sample_source(parser):
    parser.add_argument("path", nargs="?", default=None,
                        help="sample file, one value per line ('-' or "
                             "omitted: standard input)")
    parser.add_argument("--values", default=None,
                        help="inline comma-separated sample, e.g. 0,2")
    parser.add_argument("--column", default=None,
                        help="read the file as CSV and use this column")


def _add_common(parser, quadrature=True):
    parser.add_argument("--format", choices=("text", "json"),
                        default="text")
    if not quadrature:
        return
    parser.add_argument("--tol", type=float, default=1e-8,
                        help="quadrature tolerance (default 1e-8)")
    parser.add_argument("--script-quadrature", action="store_true",
                        help="100 panels, tolerance 1e-4, cut 1e-9")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="moment-utilities",
        description="Moment estimators, their asymptotic covariance and "
                    "tests for the Gamma, Beta, Uniform and Fisher laws.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("coeffs", help="influence coefficients and exact "
                                      "Sigma")
    p.add_argument("law", choices=LAW_KINDS)
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("--mode", choices=COEFFICIENT_MODES + ("both",),
                   default="both")
    _add_common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("estimate", help="moment estimates of a sample")
    p.add_argument("law", choices=LAW_KINDS)
    _add_sample_source(p)
    _add_common(p, quadrature=False)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("test", help="marginal and omnibus tests")
    p.add_argument("law", choices=LAW_KINDS)
    p.add_argument("a0", type=float)
    p.add_argument("b0", type=float)
    _add_sample_source(p)
    p.add_argument("--sigma", choices=SIGMA_METHODS, default=EXACT_MOMENTS)
    p.add_argument("--mode", choices=COEFFICIENT_MODES, default=CANONICAL)
    p.add_argument("--seed", type=int, default=None,
                   help="master seed of the replication Sigma")
    p.add_argument("--replications", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="Monte-Carlo run")
    p.add_argument("law", choices=LAW_KINDS)
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("--n", required=True,
                   help="sample size or comma-separated sizes")
    p.add_argument("--B", type=int, default=1000, help="replications")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=COEFFICIENT_MODES, default=CANONICAL)
    p.add_argument("--sigma", default=None,
                   help="comma-separated subset of %s" %
                        ", ".join(SIGMA_METHODS))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output-dir", default=None,
                   help="default: $%s or ./%s" % (OUTPUT_DIR_ENV,
                                                  DEFAULT_OUTPUT_DIR))
    _add_common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    """Run the command line; returns the exit code"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else
                        logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SingularCovarianceError as err:
        sys.stderr.write("error: %s\n" % err)
        return EXIT_SINGULAR
    except (MomentUtilitiesError, OSError) as err:
        sys.stderr.write("error: %s\n" % err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

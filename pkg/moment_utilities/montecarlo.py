"""Monte-Carlo harness for the moment estimators and their tests.

One run draws B samples of size n from a law, estimates (a, b) on each and
records

* DA = sqrt(n)(a_hat - a), DB = sqrt(n)(b_hat - b)
* VH, VL: standard deviations of H(X_i), L(X_i) within the sample
* VHL: covariance of H(X_i), L(X_i) within the sample

From these it derives the averaged plug-in ("EMP") and replication
("SAMP") estimates of Sigma, compares them with the exact Sigma, and
reports error tables, marginal and omnibus rejection frequencies and the
data of QQ-plots and Parzen density curves.

Replication j (1-based) draws its sample with `replication_seed(seed, j)`,
so results do not depend on how replications are split across workers.
"""
import dataclasses
import logging
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .asymptotics import CANONICAL, COEFFICIENT_MODES, EXACT_MOMENTS, \
    EXACT_QUADRATURE, PLUGIN, REPLICATION, SIGMA_METHODS, Covariance2, \
    covariance_exact_moments, covariance_exact_quadrature, \
    covariance_plugin, covariance_replication, empirical_process, \
    influence_pair
from .distributions import FISHER, MAX_SEED, LawSpec, sample, \
    theoretical_moments
from .estimation import empirical_moments, estimate
from .hypothesis_tests import marginal_test, omnibus_test
from .misc_helpers import DomainError, EstimationError, \
    InsufficientDataError, SimulationError, SingularCovarianceError, \
    user_errors_group
from .special import QuadratureConfig, normal_quantile

log = logging.getLogger(__name__)

ErrorRow = namedtuple('ErrorRow', 'me mae rmse sd')
RatioRow = namedtuple('RatioRow', 'name ratio script_ratio')
RejectionRow = namedtuple('RejectionRow', 'method a b')
OmnibusRow = namedtuple('OmnibusRow', 'method rejection_rate mean_p_value')


def replication_seed(master_seed, j):
    """Seed of replication j, an unsigned 64-bit integer

    Derived as the first 64-bit word of numpy's SeedSequence keyed by
    `master_seed` with spawn key (j,).
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=(j,))
    return int(seq.generate_state(1, np.uint64)[0])


def default_sigma_methods(law):
    """Exact moments (when they exist), plug-in and replication"""
    methods = [PLUGIN, REPLICATION]
    if law.kind != FISHER or theoretical_moments(law).m4 is not None:
        methods.insert(0, EXACT_MOMENTS)
    return tuple(methods)


@dataclasses.dataclass
class SimulationConfig:
    """Settings of one Monte-Carlo run

    Attributes
    ----------
    law : LawSpec
        Law the samples are drawn from (and tested against).
    n : int
        Sample size, n >= 2.
    B : int
        Number of replications, B >= 2.
    master_seed : int
        Unsigned 64-bit seed of the whole run.
    coefficient_mode : str
        "canonical" or "paper" influence coefficients.
    sigma_methods : tuple of str, optional
        Covariance estimates to compare; defaults to
        `default_sigma_methods(law)`.
    workers : int
        Number of worker processes; 1 runs in-process.
    quadrature : QuadratureConfig
        Settings of the exact-quadrature covariance.

    Raises
    ------
    ConfigError
        Listing every invalid setting

    """
    law: LawSpec
    n: int
    B: int
    master_seed: int
    coefficient_mode: str = CANONICAL
    sigma_methods: tuple = None
    workers: int = 1
    quadrature: QuadratureConfig = dataclasses.field(
        default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.sigma_methods is None and isinstance(self.law, LawSpec):
            self.sigma_methods = default_sigma_methods(self.law)
        self.sigma_methods = tuple(self.sigma_methods or ())
        errors = []
        if not isinstance(self.law, LawSpec):
            errors.append("law must be a LawSpec, got %r" % (self.law,))
        if not _is_int(self.n) or self.n < 2:
            errors.append("n must be an integer >= 2, got %r" % (self.n,))
        if not _is_int(self.B) or self.B < 2:
            errors.append("B must be an integer >= 2, got %r" % (self.B,))
        if not _is_int(self.master_seed) or \
                not 0 <= self.master_seed <= MAX_SEED:
            errors.append("master_seed must be an unsigned 64-bit integer, "
                          "got %r" % (self.master_seed,))
        if self.coefficient_mode not in COEFFICIENT_MODES:
            errors.append("coefficient_mode must be one of %s, got %r" %
                          (", ".join(COEFFICIENT_MODES),
                           self.coefficient_mode))
        unknown = [m for m in self.sigma_methods if m not in SIGMA_METHODS]
        if unknown or not self.sigma_methods:
            errors.append("sigma_methods must be a non-empty subset of %s, "
                          "got %r" % (", ".join(SIGMA_METHODS),
                                      self.sigma_methods))
        if not _is_int(self.workers) or self.workers < 1:
            errors.append("workers must be an integer >= 1, got %r" %
                          (self.workers,))
        user_errors_group(errors, subject="simulation configuration")


def _is_int(value):
    return isinstance(value, (int, np.integer)) and not isinstance(value,
                                                                   bool)


@dataclasses.dataclass
class SimulationReport:
    """Outcome of `run_simulation`

    Per-replication arrays hold the feasible replications only, in
    replication order; `infeasible_count` counts the others.
    """
    config: SimulationConfig
    influences: tuple
    da: np.ndarray
    db: np.ndarray
    a_hat: np.ndarray
    b_hat: np.ndarray
    vh: np.ndarray
    vl: np.ndarray
    vhl: np.ndarray
    infeasible_count: int
    sigmas: dict
    error_table: dict
    ratio_table: list
    pvalue_table: list
    omnibus_table: list

    @property
    def feasible_count(self):
        return int(self.da.size)

    @property
    def exact_sigma(self):
        """The exact Sigma used as reference, or None"""
        for method in (EXACT_MOMENTS, EXACT_QUADRATURE):
            if method in self.sigmas:
                return self.sigmas[method]
        return None


def _run_chunk(args):
    """Replications of one chunk of indices; module level for pickling"""
    law, n, master_seed, H, L, indices = args
    rows = []
    for j in indices:
        x = sample(law, n, replication_seed(master_seed, j))
        try:
            est = estimate(law.kind, empirical_moments(x))
        except EstimationError as err:
            log.debug("replication %d infeasible: %s", j, err)
            rows.append(None)
            continue
        plug = covariance_plugin(x, H, L)
        rows.append((est.a_hat, est.b_hat, math.sqrt(plug.s11),
                     math.sqrt(plug.s22), plug.s12))
    return rows


def _replicate(cfg, H, L):
    indices = list(range(1, cfg.B + 1))
    if cfg.workers == 1:
        return _run_chunk((cfg.law, cfg.n, cfg.master_seed, H, L, indices))

    n_chunks = min(cfg.workers * 4, cfg.B)
    chunks = [[int(j) for j in c] for c in np.array_split(indices, n_chunks)]
    args = [(cfg.law, cfg.n, cfg.master_seed, H, L, c) for c in chunks]
    rows = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
        # map yields in submission order
        for done, chunk_rows in enumerate(executor.map(_run_chunk, args)):
            rows.extend(chunk_rows)
            log.debug("chunk %d/%d done", done + 1, n_chunks)
    return rows


def plugin_average(vh, vl, vhl, mode=CANONICAL):
    """Sigma estimated from the per-replication plug-in statistics

    Canonical mode averages the variances (mean of VH^2); paper mode squares
    the average standard deviation ((mean VH)^2), as the published tables
    do. The covariance entry is the mean of VHL in both modes.
    """
    vh = np.asarray(vh, dtype=float)
    vl = np.asarray(vl, dtype=float)
    if mode == CANONICAL:
        s11, s22 = np.mean(vh * vh), np.mean(vl * vl)
    else:
        s11, s22 = np.mean(vh) ** 2, np.mean(vl) ** 2
    return Covariance2(float(s11), float(s22), float(np.mean(vhl)), PLUGIN)


def error_table(achap, bchap, a, b):
    """Mean error, mean absolute error and root mean square error

    The `sd` column is the standard deviation of the errors (divisor
    m - 1), which omits the bias term of the RMSE.

    Example Usage:

    .. code-block:: python

        from moment_utilities.montecarlo import error_table

        error_table([1.0, 3.0], [2.0, 2.0], 2.0, 2.0)["a"]

    Returns:

    .. code-block:: python

        ErrorRow(me=0.0, mae=1.0, rmse=1.0, sd=1.4142135623730951)

    Returns
    -------
    dict
        {"a": ErrorRow, "b": ErrorRow}

    Raises
    ------
    InsufficientDataError
        If the arrays are empty

    """
    table = {}
    for name, values, truth in (("a", achap, a), ("b", bchap, b)):
        err = np.asarray(values, dtype=float) - truth
        if err.size == 0:
            raise InsufficientDataError("error table of an empty array")
        sd = float(np.std(err, ddof=1)) if err.size > 1 else 0.0
        table[name] = ErrorRow(float(np.mean(err)),
                               float(np.mean(np.abs(err))),
                               float(np.sqrt(np.mean(err * err))), sd)
    return table


def ratio_table(plugin, replication, exact):
    """Estimated over exact Sigma entries, six rows

    `ratio` is on the variance scale (estimate / exact). `script_ratio`
    divides standard deviations for the diagonal rows (sqrt of `ratio`)
    and equals `ratio` for the covariance rows, the scale of the published
    over/under-estimation tables.

    Raises
    ------
    DomainError
        If an exact entry is zero

    """
    if 0 in (exact.s11, exact.s22, exact.s12):
        raise DomainError("ratio table needs non-zero exact entries, got %r"
                          % (exact,))
    rows = []
    for suffix, est in (("emp", plugin), ("samp", replication)):
        for name, num, den, diagonal in (("1", est.s11, exact.s11, True),
                                         ("2", est.s22, exact.s22, True),
                                         ("12", est.s12, exact.s12, False)):
            ratio = num / den
            if diagonal:
                script = math.sqrt(max(ratio, 0.0))
            else:
                script = ratio
            rows.append(RatioRow("Qsig-%s%s" % (name, suffix), ratio, script))
    return rows


def qq_plot_data(values):
    """Normal QQ-plot points of a sample

    Example Usage:

    .. code-block:: python

        from moment_utilities.montecarlo import qq_plot_data

        qq_plot_data([1.0, -1.0])

    Returns:

    .. code-block:: python

        [(-0.6744897501960817, -1.0), (0.6744897501960817, 1.0)]

    Returns
    -------
    list
        (normal_quantile((i - 0.5) / n), i-th smallest value), i = 1..n

    Raises
    ------
    InsufficientDataError
        If fewer than 2 values are given

    """
    ordered = np.sort(np.asarray(values, dtype=float).ravel())
    n = ordered.size
    if n < 2:
        raise InsufficientDataError("QQ-plot needs at least 2 values")
    return [(normal_quantile((i - 0.5) / n), float(v))
            for i, v in enumerate(ordered, start=1)]


def qq_correlation(values):
    """Correlation of the QQ-plot points, 1 for an exactly normal shape"""
    points = np.array(qq_plot_data(values))
    return float(np.corrcoef(points[:, 0], points[:, 1])[0, 1])


def silverman_bandwidth(values):
    """0.9 min(sd, IQR / 1.34) n^(-1/5); a zero spread measure is skipped

    Raises
    ------
    DomainError
        If both sd and IQR are zero

    """
    x = np.asarray(values, dtype=float).ravel()
    sd = np.std(x)
    q75, q25 = np.percentile(x, [75, 25])
    spreads = [s for s in (sd, (q75 - q25) / 1.34) if s > 0]
    if not spreads:
        raise DomainError("zero spread sample, give a bandwidth explicitly")
    return 0.9 * min(spreads) * x.size ** (-0.2)


def parzen_density(values, grid_lo, grid_hi, grid_points=201,
                   bandwidth=None):
    """Gaussian-kernel (Parzen) density estimate on a regular grid

    Example Usage:

    .. code-block:: python

        from moment_utilities.montecarlo import parzen_density

        parzen_density([0.0, 0.0], -1.0, 1.0, 3, bandwidth=1.0)

    Returns:

    .. code-block:: python

        [(-1.0, 0.24197072451914337), (0.0, 0.3989422804014327),
         (1.0, 0.24197072451914337)]

    Parameters
    ----------
    values : sequence of float
        The sample, at least 2 values.
    grid_lo, grid_hi : float
        Grid limits, grid_lo < grid_hi.
    grid_points : int, optional
        Number of grid points, at least 2. Default: 201.
    bandwidth : float, optional
        Kernel standard deviation; Silverman's rule when omitted.

    Returns
    -------
    list
        (x, density) pairs

    Raises
    ------
    DomainError
        On a bad grid, a non-positive bandwidth or a zero spread sample
        without bandwidth

    """
    x = np.asarray(values, dtype=float).ravel()
    errors = []
    if x.size < 2:
        errors.append("at least 2 values are needed, got %d" % x.size)
    if not grid_lo < grid_hi:
        errors.append("grid_lo must be < grid_hi")
    if grid_points < 2:
        errors.append("grid_points must be >= 2")
    if bandwidth is not None and not bandwidth > 0:
        errors.append("bandwidth must be > 0, got %r" % bandwidth)
    user_errors_group(errors, error_class=DomainError,
                      subject="density request")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(x)
    grid = np.linspace(grid_lo, grid_hi, grid_points)
    z = (grid[:, None] - x[None, :]) / bandwidth
    density = np.exp(-0.5 * z * z).mean(axis=1) / (
        bandwidth * math.sqrt(2.0 * math.pi))
    return [(float(g), float(d)) for g, d in zip(grid, density)]


def standardized_statistics(report):
    """z statistics of every replication, per parameter and Sigma method

    Returns
    -------
    dict
        {(param, method): numpy array of DA / sqrt(s11) or DB / sqrt(s22)}

    """
    stats = {}
    for method, sigma in report.sigmas.items():
        if sigma.s11 > 0:
            stats[("a", method)] = report.da / math.sqrt(sigma.s11)
        if sigma.s22 > 0:
            stats[("b", method)] = report.db / math.sqrt(sigma.s22)
    return stats


def _rejections(cfg, a_hat, b_hat, sigmas):
    law, n = cfg.law, cfg.n
    marginal_rows = []
    omnibus_rows = []
    for method in cfg.sigma_methods:
        sigma = sigmas[method]
        rates = []
        for est, truth, var in ((a_hat, law.a, sigma.s11),
                                (b_hat, law.b, sigma.s22)):
            if var > 0:
                rejected = [marginal_test(t, truth, var, n, method)
                            .reject_at_5pct for t in est]
                rates.append(float(np.mean(rejected)))
            else:
                rates.append(None)
        marginal_rows.append(RejectionRow(method, *rates))
        try:
            reports = [omnibus_test(a, b, law.a, law.b, n, sigma)
                       for a, b in zip(a_hat, b_hat)]
        except SingularCovarianceError as err:
            log.warning("no omnibus test with %s sigma: %s", method, err)
            omnibus_rows.append(OmnibusRow(method, None, None))
            continue
        omnibus_rows.append(OmnibusRow(
            method, float(np.mean([r.reject_at_5pct for r in reports])),
            float(np.mean([r.p_value for r in reports]))))
    return marginal_rows, omnibus_rows


def run_simulation(cfg):
    """Run the replications of one configuration and aggregate them

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec
        from moment_utilities.montecarlo import SimulationConfig, \\
            run_simulation

        cfg = SimulationConfig(LawSpec("gamma", 10, 3), n=200, B=1000,
                               master_seed=2021)
        report = run_simulation(cfg)
        report.pvalue_table

    Parameters
    ----------
    cfg : SimulationConfig
        The run settings.

    Returns
    -------
    SimulationReport

    Raises
    ------
    MomentDomainError
        If an exact Sigma method is requested for a law lacking the moments
    SimulationError
        If fewer than 2 replications are feasible

    """
    law = cfg.law
    H, L = influence_pair(law, cfg.coefficient_mode)
    sigmas = {}
    if EXACT_MOMENTS in cfg.sigma_methods:
        sigmas[EXACT_MOMENTS] = covariance_exact_moments(law, H, L)
    if EXACT_QUADRATURE in cfg.sigma_methods:
        sigmas[EXACT_QUADRATURE] = covariance_exact_quadrature(
            law, H, L, cfg.quadrature)

    log.info("simulating %s: n=%d, B=%d, seed=%d, %s coefficients", law,
             cfg.n, cfg.B, cfg.master_seed, cfg.coefficient_mode)
    rows = _replicate(cfg, H, L)
    feasible = np.array([r for r in rows if r is not None], dtype=float)
    infeasible_count = len(rows) - len(feasible)
    if infeasible_count:
        log.warning("%d of %d replications infeasible", infeasible_count,
                    cfg.B)
    if len(feasible) < 2:
        raise SimulationError(
            "only %d of %d replications were feasible" %
            (len(feasible), cfg.B))
    a_hat, b_hat, vh, vl, vhl = feasible.T
    da = math.sqrt(cfg.n) * (a_hat - law.a)
    db = math.sqrt(cfg.n) * (b_hat - law.b)

    if PLUGIN in cfg.sigma_methods:
        sigmas[PLUGIN] = plugin_average(vh, vl, vhl, cfg.coefficient_mode)
    if REPLICATION in cfg.sigma_methods:
        sigmas[REPLICATION] = covariance_replication(da, db)

    report = SimulationReport(
        config=cfg, influences=(H, L), da=da, db=db, a_hat=a_hat,
        b_hat=b_hat, vh=vh, vl=vl, vhl=vhl,
        infeasible_count=infeasible_count, sigmas=sigmas,
        error_table=error_table(a_hat, b_hat, law.a, law.b),
        ratio_table=None, pvalue_table=None, omnibus_table=None)

    exact = report.exact_sigma
    if exact is not None and PLUGIN in sigmas and REPLICATION in sigmas:
        try:
            report.ratio_table = ratio_table(sigmas[PLUGIN],
                                             sigmas[REPLICATION], exact)
        except DomainError as err:
            log.warning("no ratio table: %s", err)
    report.pvalue_table, report.omnibus_table = _rejections(
        cfg, a_hat, b_hat, sigmas)
    log.info("done: %d feasible replications", report.feasible_count)
    return report


def run_sweep(cfg, sizes):
    """Run the same configuration for several sample sizes

    Returns
    -------
    list
        One SimulationReport per size, in the given order

    """
    reports = []
    for n in sizes:
        reports.append(run_simulation(dataclasses.replace(cfg, n=n)))
    return reports


def empirical_process_replicates(law, n, B, master_seed, influences):
    """Replicated values of G_n(f) for each given centered influence

    Replication j uses the sample drawn by `run_simulation` for the same
    master seed and index.

    Returns
    -------
    numpy.ndarray
        Shape (B, len(influences))

    Raises
    ------
    MomentDomainError
        If an influence is not square integrable under the law

    """
    moments = theoretical_moments(law)
    moments.require(4 if any(f.c2 for f in influences) else 2)
    values = np.empty((B, len(influences)))
    for j in range(1, B + 1):
        x = sample(law, n, replication_seed(master_seed, j))
        for k, f in enumerate(influences):
            values[j - 1, k] = empirical_process(x, f)
    return values

"""Special functions and one-dimensional quadrature.

Everything here is a pure function of its arguments and safe to call from
any thread. The incomplete gamma and beta functions follow the classical
series / continued-fraction split (modified Lentz evaluation); ln_gamma is a
Lanczos approximation (g=7, 9 terms).
"""
import math
from collections import namedtuple

import numpy as np

from .misc_helpers import ConvergenceError, DomainError, QuadratureError, \
    user_errors_group

SQRT2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)
LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# smallest magnitude allowed in the Lentz recurrences
FPMIN = 1e-300
EPS = 1e-15
MAX_ITER = 10000

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Acklam's rational approximation of the normal quantile
_ACKLAM_A = (-3.969683028665376e+01, 2.209460984245205e+02,
             -2.759285104469687e+02, 1.383577518672690e+02,
             -3.066479806614716e+01, 2.506628277459239e+00)
_ACKLAM_B = (-5.447609879822406e+01, 1.615858368580409e+02,
             -1.556989798598866e+02, 6.680131188771972e+01,
             -1.328068155288572e+01)
_ACKLAM_C = (-7.784894002430293e-03, -3.223964580411365e-01,
             -2.400758277161838e+00, -2.549732539343734e+00,
             4.374664141464968e+00, 2.938163982698783e+00)
_ACKLAM_D = (7.784695709041462e-03, 3.224671290700398e-01,
             2.445134137142996e+00, 3.754408661907416e+00)
_ACKLAM_LOW = 0.02425


_QuadratureConfig = namedtuple('QuadratureConfig',
                               'panels tol max_doublings edge tail')


class QuadratureConfig(_QuadratureConfig):
    """Settings of the panel-doubling trapezoid rule

    Parameters
    ----------
    panels : int, optional
        Initial number of panels, at least 2. Default: 100.
    tol : float, optional
        Absolute difference between two successive estimates at which the
        refinement stops. Default: 1e-8.
    max_doublings : int, optional
        Maximum number of times the panel count is doubled. Default: 12.
    edge : float, optional
        Fraction of the interval width by which `trapezoid_integrate` moves
        an endpoint at which the integrand is not finite. Default: 1e-9.
    tail : float, optional
        Probability cut from each end of (0, 1) by
        `unit_interval_integrate`. Default: 1e-30.

    Raises
    ------
    ConfigError
        If any of the invariants panels >= 2, tol > 0, max_doublings >= 1,
        0 < edge < 0.5, 0 < tail < 0.5 is violated

    """
    __slots__ = ()

    def __new__(cls, panels=100, tol=1e-8, max_doublings=12, edge=1e-9,
                tail=1e-30):
        errors = []
        if not isinstance(panels, int) or panels < 2:
            errors.append("panels must be an integer >= 2, got %r" % panels)
        if not tol > 0:
            errors.append("tol must be > 0, got %r" % tol)
        if not isinstance(max_doublings, int) or max_doublings < 1:
            errors.append("max_doublings must be an integer >= 1, got %r"
                          % max_doublings)
        if not 0 < edge < 0.5:
            errors.append("edge must lie in (0, 0.5), got %r" % edge)
        if not 0 < tail < 0.5:
            errors.append("tail must lie in (0, 0.5), got %r" % tail)
        user_errors_group(errors, subject="quadrature configuration")
        return super(QuadratureConfig, cls).__new__(
            cls, panels, float(tol), max_doublings, float(edge), float(tail))


# Settings of the original computation script: 100 panels, tolerance 1e-4,
# quantile integrals truncated to [1e-9, 1 - 1e-9].
SCRIPT_QUADRATURE = QuadratureConfig(panels=100, tol=1e-4, tail=1e-9)


def _require(condition, message):
    if not condition:
        raise DomainError(message)


def ln_gamma(x):
    """Natural logarithm of the gamma function

    Example Usage:

    .. code-block:: python

        from moment_utilities.special import ln_gamma

        ln_gamma(5)

    Returns:

    .. code-block:: python

        3.1780538303479458

    Parameters
    ----------
    x : float
        Positive argument.

    Returns
    -------
    float
        ln(Gamma(x))

    Raises
    ------
    DomainError
        If x is not a finite positive number

    """
    _require(math.isfinite(x) and x > 0,
             "ln_gamma is defined for x > 0, got %r" % x)
    if x < 0.5:
        # reflection formula
        return (math.log(math.pi / math.sin(math.pi * x)) -
                ln_gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return LN_SQRT_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def ln_beta(a, b):
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)"""
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def _gamma_series(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    return total * math.exp(-x + a * math.log(x) - ln_gamma(a))


def _gamma_cont_frac(a, x):
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return math.exp(-x + a * math.log(x) - ln_gamma(a)) * h


def _clamp01(p):
    return min(1.0, max(0.0, p))


def _check_inc_gamma(a, x):
    _require(a > 0, "incomplete gamma requires a > 0, got %r" % a)
    _require(x >= 0, "incomplete gamma requires x >= 0, got %r" % x)


def reg_inc_gamma(a, x):
    """Regularized lower incomplete gamma function P(a, x)

    Parameters
    ----------
    a : float
        Shape, a > 0.
    x : float
        Upper limit of integration, x >= 0.

    Returns
    -------
    float
        gamma(a, x) / Gamma(a), in [0, 1]

    Raises
    ------
    DomainError
        If a <= 0 or x < 0

    """
    _check_inc_gamma(a, x)
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _clamp01(_gamma_series(a, x))
    return _clamp01(1.0 - _gamma_cont_frac(a, x))


def reg_inc_gamma_upper(a, x):
    """Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x)"""
    _check_inc_gamma(a, x)
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return _clamp01(1.0 - _gamma_series(a, x))
    return _clamp01(_gamma_cont_frac(a, x))


def _beta_cont_frac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return h


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function I_x(a, b)

    Example Usage:

    .. code-block:: python

        from moment_utilities.special import reg_inc_beta

        reg_inc_beta(2, 2, 0.5)

    Returns:

    .. code-block:: python

        0.5

    Parameters
    ----------
    a, b : float
        Positive shape parameters.
    x : float
        Point in [0, 1].

    Returns
    -------
    float
        I_x(a, b) in [0, 1]

    Raises
    ------
    DomainError
        If a <= 0, b <= 0 or x is outside [0, 1]

    """
    _require(a > 0 and b > 0,
             "incomplete beta requires a, b > 0, got (%r, %r)" % (a, b))
    _require(0 <= x <= 1, "incomplete beta requires x in [0, 1], got %r" % x)
    if x == 0:
        return 0.0
    if x == 1:
        return 1.0
    ln_front = a * math.log(x) + b * math.log1p(-x) - ln_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return _clamp01(math.exp(ln_front) * _beta_cont_frac(a, b, x) / a)
    return _clamp01(
        1.0 - math.exp(ln_front) * _beta_cont_frac(b, a, 1.0 - x) / b)


def normal_pdf(z):
    return math.exp(-0.5 * z * z) / SQRT_2PI


def normal_cdf(z):
    """Standard normal distribution function"""
    return 0.5 * math.erfc(-z / SQRT2)


def normal_sf(z):
    """Standard normal survival function 1 - normal_cdf(z)"""
    return 0.5 * math.erfc(z / SQRT2)


def normal_quantile(u):
    """Inverse of the standard normal distribution function

    Rational approximation followed by one Halley step on normal_cdf, which
    brings the result to full double precision on the interior.

    Example Usage:

    .. code-block:: python

        from moment_utilities.special import normal_quantile

        normal_quantile(0.975)

    Returns:

    .. code-block:: python

        1.959963984540054

    Parameters
    ----------
    u : float
        Probability in (0, 1).

    Returns
    -------
    float
        z with normal_cdf(z) = u

    Raises
    ------
    DomainError
        If u is not strictly between 0 and 1

    """
    _require(0 < u < 1, "normal quantile requires u in (0, 1), got %r" % u)
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    if u < _ACKLAM_LOW:
        q = math.sqrt(-2.0 * math.log(u))
        x = ((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) *
              q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    elif u <= 1.0 - _ACKLAM_LOW:
        q = u - 0.5
        r = q * q
        x = ((((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) *
              r + a[5]) * q /
             (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) *
              r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log1p(-u))
        x = -((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) *
               q + c[5]) /
              ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))

    if u > 0.5:
        e = (1.0 - u) - normal_sf(x)
    else:
        e = normal_cdf(x) - u
    step = e * SQRT_2PI * math.exp(0.5 * x * x)
    return x - step / (1.0 + 0.5 * x * step)


def solve_quantile(cdf, sf, pdf, u, lo, hi=math.inf, guess=None,
                   complement=None):
    """Generalized inverse of a continuous distribution function

    Safeguarded Newton iteration: the root is kept bracketed and any Newton
    step leaving the bracket is replaced by a bisection step. Above the
    median the equation is solved on the survival side so upper-tail
    quantiles keep their relative precision.

    Parameters
    ----------
    cdf, sf, pdf : callable
        Distribution function, survival function and density.
    u : float
        Probability in (0, 1]; may only be 1 when `complement` is given.
    lo : float
        Lower end of the support (cdf(lo) = 0).
    hi : float, optional
        Upper end of the support, may be infinite.
    guess : float, optional
        Starting point inside the support.
    complement : float, optional
        1 - u computed without cancellation, used above the median.

    Returns
    -------
    float
        x with cdf(x) = u

    Raises
    ------
    DomainError
        If u (or its complement) is outside (0, 1)
    ConvergenceError
        If the root is not bracketed to double precision in 400 steps

    """
    if complement is None:
        _require(0 < u < 1, "quantile requires u in (0, 1), got %r" % u)
        complement = 1.0 - u
    else:
        _require(0 < u <= 1 and 0 < complement <= 1,
                 "quantile requires u and 1-u in (0, 1], got (%r, %r)" %
                 (u, complement))
    upper = u > 0.5
    target = complement if upper else u

    def residual(x):
        if upper:
            return target - sf(x)
        return cdf(x) - target

    if math.isinf(hi):
        step = max(1.0, abs(lo), guess or 0.0)
        hi = lo + step
        for _ in range(2000):
            if residual(hi) >= 0:
                break
            lo = hi
            step *= 2.0
            hi = lo + step
    if guess is not None and lo < guess < hi:
        x = guess
    else:
        x = _split(lo, hi)

    for _ in range(400):
        r = residual(x)
        if abs(r) <= 1e-15 * target:
            return x
        if r < 0:
            lo = x
        else:
            hi = x
        d = pdf(x)
        if d > 0 and math.isfinite(d):
            x_new = x - r / d
        else:
            x_new = math.nan
        if not lo < x_new < hi:
            x_new = _split(lo, hi)
            if not lo < x_new < hi:
                # no double left inside the bracket
                return x
        if abs(x_new - x) <= 1e-15 * abs(x_new) or hi - lo <= \
                1e-15 * abs(hi):
            return x_new
        x = x_new
    raise ConvergenceError("quantile search for u=%r stopped in [%r, %r]"
                           % (u, lo, hi))


def _split(lo, hi):
    # bisection point; geometric on wide brackets so roots near 0 are
    # reached in a bounded number of steps
    if lo == 0 and hi > 0:
        return hi * 2.0 ** -32
    if lo > 0 and hi > 4.0 * lo:
        return math.sqrt(lo) * math.sqrt(hi)
    return 0.5 * (lo + hi)


def chisq_pdf(x, df):
    if x <= 0:
        if x == 0 and df == 2:
            return 0.5
        return 0.0 if x < 0 or df > 2 else math.inf
    k = 0.5 * df
    return math.exp((k - 1.0) * math.log(x) - 0.5 * x - k * math.log(2.0) -
                    ln_gamma(k))


def _check_df(df):
    _require(df > 0, "degrees of freedom must be > 0, got %r" % df)


def chisq_cdf(x, df):
    """Chi-square distribution function

    The two-degree-of-freedom case uses the closed form 1 - exp(-x/2).

    Parameters
    ----------
    x : float
        Point, x >= 0.
    df : int
        Degrees of freedom.

    Returns
    -------
    float
        P(chi2_df <= x)

    Raises
    ------
    DomainError
        If x < 0 or df <= 0

    """
    _check_df(df)
    _require(x >= 0, "chi-square cdf requires x >= 0, got %r" % x)
    if df == 2:
        return -math.expm1(-0.5 * x)
    return reg_inc_gamma(0.5 * df, 0.5 * x)


def chisq_sf(x, df):
    """Chi-square survival function, the p-value of a statistic x"""
    _check_df(df)
    _require(x >= 0, "chi-square sf requires x >= 0, got %r" % x)
    if df == 2:
        return math.exp(-0.5 * x)
    return reg_inc_gamma_upper(0.5 * df, 0.5 * x)


def chisq_quantile(u, df):
    """Inverse of chisq_cdf for u in [0, 1)

    Raises
    ------
    DomainError
        If u is outside [0, 1) or df <= 0

    """
    _check_df(df)
    _require(0 <= u < 1, "chi-square quantile requires u in [0, 1), got %r"
             % u)
    if u == 0:
        return 0.0
    if df == 2:
        return -2.0 * math.log1p(-u)
    return solve_quantile(lambda x: chisq_cdf(x, df),
                          lambda x: chisq_sf(x, df),
                          lambda x: chisq_pdf(x, df),
                          u, 0.0, guess=float(df))


def _evaluate(f, x):
    value = f(x)
    if not np.all(np.isfinite(value)):
        raise QuadratureError(
            "integrand is not finite at x=%r" % (x,), abscissa=x)
    return value


def _endpoint(f, x, pulled):
    try:
        value = f(x)
    except (ArithmeticError, ValueError):
        value = math.inf
    if np.all(np.isfinite(value)):
        return value
    return _evaluate(f, pulled)


def trapezoid_integrate(f, lo, hi, cfg=None):
    """Composite trapezoid rule with panel doubling

    The panel count starts at cfg.panels and is doubled until two successive
    estimates differ by less than cfg.tol (in every component, when `f`
    returns an array) or cfg.max_doublings doublings were made; the last
    estimate is returned. An endpoint at which `f` is not finite is moved
    inward by cfg.edge times the interval width.

    Example Usage:

    .. code-block:: python

        from moment_utilities.special import trapezoid_integrate

        trapezoid_integrate(lambda u: u, 0.0, 1.0)

    Returns:

    .. code-block:: python

        0.5

    Parameters
    ----------
    f : callable
        Integrand, returning a float or a numpy array.
    lo, hi : float
        Integration limits, lo < hi.
    cfg : QuadratureConfig, optional
        Refinement settings. Default: QuadratureConfig().

    Returns
    -------
    float or numpy.ndarray
        The integral estimate

    Raises
    ------
    DomainError
        If lo >= hi
    QuadratureError
        If `f` is not finite at an interior abscissa

    """
    _require(lo < hi, "integration limits must satisfy lo < hi, got "
             "(%r, %r)" % (lo, hi))
    cfg = cfg or QuadratureConfig()
    width = hi - lo
    f_lo = _endpoint(f, lo, lo + cfg.edge * width)
    f_hi = _endpoint(f, hi, hi - cfg.edge * width)

    n = cfg.panels
    h = width / n
    total = 0.5 * (f_lo + f_hi)
    for i in range(1, n):
        total = total + _evaluate(f, lo + i * h)
    estimate = h * total

    for _ in range(cfg.max_doublings):
        n *= 2
        h = width / n
        for i in range(1, n, 2):
            total = total + _evaluate(f, lo + i * h)
        refined = h * total
        if np.max(np.abs(refined - estimate)) < cfg.tol:
            return refined
        estimate = refined
    return estimate


def unit_interval_integrate(f, cfg=None, with_complement=False):
    """Integral of f over (0, 1) on the probit scale

    Substitutes u = normal_cdf(t) and integrates f(normal_cdf(t)) *
    normal_pdf(t) with `trapezoid_integrate` over t in
    [normal_quantile(tail), -normal_quantile(tail)], i.e. u is truncated
    to [tail, 1 - tail]. Quantile integrands that diverge at u -> 0 or 1
    become smooth and rapidly decaying in t.

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec, quantile
        from moment_utilities.special import unit_interval_integrate

        law = LawSpec("gamma", 2, 3)
        unit_interval_integrate(lambda u, v: quantile(law, u, v),
                                with_complement=True)

    Returns:

    .. code-block:: python

        0.6666666666...

    Parameters
    ----------
    f : callable
        Integrand on (0, 1), returning a float or a numpy array.
    cfg : QuadratureConfig, optional
        Refinement settings; cfg.tail is the truncation in probability.
    with_complement : bool, optional
        If true, f is called as f(u, 1 - u) with the complement computed
        as normal_sf(t), which keeps its precision near u = 1.

    Returns
    -------
    float or numpy.ndarray
        The integral estimate

    """
    cfg = cfg or QuadratureConfig()
    t_hi = -normal_quantile(cfg.tail)

    def integrand(t):
        if with_complement:
            value = f(normal_cdf(t), normal_sf(t))
        else:
            value = f(normal_cdf(t))
        return value * normal_pdf(t)

    return trapezoid_integrate(integrand, -t_hi, t_hi, cfg)

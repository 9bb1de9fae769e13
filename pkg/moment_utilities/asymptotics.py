"""Influence functions and the asymptotic covariance of moment estimators.

For each law the moment estimators are smooth functions g(m1, m2) of the
first two empirical moments, so that

    sqrt(n) (a_hat - a, b_hat - b) -> N2(0, Sigma)

with Sigma the covariance of (H(X), L(X)), H and L being quadratic
influence functions c1 x + c2 x^2 in the span of h1(x) = x, h2(x) = x^2.
H always belongs to a_hat and L to b_hat.
"""
import math
from collections import namedtuple

import numpy as np

from .distributions import BETA, GAMMA, UNIFORM, quantile, \
    theoretical_moments
from .estimation import LAMBDA, estimator_map, law_kind
from .misc_helpers import DomainError, EstimationError, InsufficientDataError
from .special import unit_interval_integrate

CANONICAL = "canonical"
PAPER = "paper"
COEFFICIENT_MODES = (CANONICAL, PAPER)

EXACT_QUADRATURE = "exact-quadrature"
EXACT_MOMENTS = "exact-moments"
PLUGIN = "plugin"
REPLICATION = "replication"
SIGMA_METHODS = (EXACT_QUADRATURE, EXACT_MOMENTS, PLUGIN, REPLICATION)


_QuadraticInfluence = namedtuple('QuadraticInfluence', 'c1 c2 center')


class QuadraticInfluence(_QuadraticInfluence):
    """Influence function c1 * x + c2 * x^2, centered by `center`

    `center` is E[c1 X + c2 X^2] under the law the coefficients were
    computed for, so `evaluate` has mean zero under that law.
    """
    __slots__ = ()

    def evaluate(self, x):
        """Centered influence c1 * x + c2 * x^2 - center (arrays accepted)"""
        return self.c1 * x + self.c2 * x * x - self.center

    @classmethod
    def centered(cls, c1, c2, moments):
        """Build the influence with its center taken from a MomentSet"""
        center = c1 * moments.require(1)
        if c2:
            center += c2 * moments.require(2)
        return cls(float(c1), float(c2), float(center))


_Covariance2 = namedtuple('Covariance2', 's11 s22 s12 method')


class Covariance2(_Covariance2):
    """Symmetric 2x2 covariance [[s11, s12], [s12, s22]] of (H, L)

    `method` records how it was obtained, one of SIGMA_METHODS.
    """
    __slots__ = ()

    @property
    def det(self):
        return self.s11 * self.s22 - self.s12 * self.s12

    @property
    def correlation(self):
        """s12 / sqrt(s11 * s22), or None if a variance is zero"""
        if self.s11 <= 0 or self.s22 <= 0:
            return None
        return self.s12 / math.sqrt(self.s11 * self.s22)

    def as_matrix(self):
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])


def delta_gradient(kind, m1, m2):
    """Gradient of the moment-estimator map at (m1, m2)

    Example Usage:

    .. code-block:: python

        from moment_utilities.asymptotics import delta_gradient

        delta_gradient("gamma", 2 / 3., 2 / 3.)

    Returns:

    .. code-block:: python

        (18.0, -9.0, 22.5, -13.5)

    Parameters
    ----------
    kind : str or LawSpec
        The law kind.
    m1, m2 : float
        First and second raw moments.

    Returns
    -------
    tuple
        (da/dm1, da/dm2, db/dm1, db/dm2)

    Raises
    ------
    DomainError
        If the estimators are not defined (or not differentiable) at
        (m1, m2)

    """
    kind = law_kind(kind)
    try:
        estimator_map(kind, m1, m2)
    except EstimationError as err:
        raise DomainError("no gradient at (m1, m2)=(%r, %r): %s" %
                          (m1, m2, err))
    var = m2 - m1 * m1

    if kind == GAMMA:
        v2 = var * var
        return (2.0 * m1 * m2 / v2, -m1 * m1 / v2,
                (var + 2.0 * m1 * m1) / v2, -m1 / v2)

    if kind == BETA:
        v2 = var * var
        gap = m1 - m2
        return (((2.0 * m1 - m2) * var + 2.0 * m1 * m1 * gap) / v2,
                -m1 * (var + gap) / v2,
                ((1.0 - 2.0 * m1 + m2) * var +
                 2.0 * m1 * (1.0 - m1) * gap) / v2,
                (m1 - 1.0) * (var + gap) / v2)

    if kind == UNIFORM:
        if not var > 0:
            raise DomainError("uniform estimators are not differentiable "
                              "at zero variance")
        sd = math.sqrt(var)
        return (1.0 + LAMBDA * m1 / sd, -LAMBDA / (2.0 * sd),
                1.0 - LAMBDA * m1 / sd, LAMBDA / (2.0 * sd))

    # fisher: a = 2 m1^2 / D, b = 2 m1 / (m1 - 1)
    denom = var * (2.0 - m1) - m1 * m1 * (m1 - 1.0)
    d_denom_m1 = -(var + 2.0 * m1 * (2.0 - m1) + m1 * (3.0 * m1 - 2.0))
    d_denom_m2 = 2.0 - m1
    d2 = denom * denom
    return ((4.0 * m1 * denom - 2.0 * m1 * m1 * d_denom_m1) / d2,
            -2.0 * m1 * m1 * d_denom_m2 / d2,
            -2.0 / (m1 - 1.0) ** 2, 0.0)


def _paper_coefficients(kind, mu, var, m2):
    # coefficients as published; the Gamma h2 sign follows the computation
    # script that produced the tables
    v2 = var * var
    if kind == GAMMA:
        return ((2.0 * mu * (var + 1.0) / v2, -mu * mu / v2),
                ((var + 2.0 * mu) / v2, -mu / v2))
    if kind == BETA:
        return (((var * (2.0 * mu - m2) + 2.0 * mu * mu * (mu - m2)) / v2,
                 -(var * mu + mu * (mu - m2)) / v2),
                ((var * (m2 - 2.0 * mu + 1.0) +
                  2.0 * mu * (1.0 - mu) * (mu - m2)) / v2,
                 (mu - 1.0) * (var + mu - m2) / v2))
    if kind == UNIFORM:
        sd = math.sqrt(var)
        return ((1.0 + LAMBDA * mu / sd, -LAMBDA / (2.0 * sd)),
                (1.0 - LAMBDA * mu / sd, LAMBDA / (2.0 * sd)))
    beta = var + 2.0 * mu * (2.0 - mu) - mu * (3.0 * mu - 2.0)
    return ((2.0 * mu * (2.0 - mu) / beta,
             -2.0 * mu * mu * (2.0 - mu) / beta ** 2),
            (-2.0 / (mu - 1.0) ** 2, 0.0))


def influence_pair(law, mode=CANONICAL):
    """Influence functions H (of a_hat) and L (of b_hat) of a law

    In canonical mode the coefficients are the delta-method gradient of the
    estimator map at the law's theoretical (m1, m2). In paper mode they are
    the published closed forms, kept for reproducing the published tables;
    they differ from the gradient for Gamma and Fisher.

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec
        from moment_utilities.asymptotics import influence_pair

        H, L = influence_pair(LawSpec("gamma", 2, 3))
        H.c1, H.c2, L.c1, L.c2

    Returns:

    .. code-block:: python

        (18.0, -9.0, 22.5, -13.5)

    Parameters
    ----------
    law : LawSpec
        The law.
    mode : str, optional
        "canonical" (default) or "paper".

    Returns
    -------
    tuple
        (H, L) as QuadraticInfluence

    Raises
    ------
    MomentDomainError
        If the variance of the law does not exist (Fisher with b <= 4)
    DomainError
        If the mode is unknown

    """
    if mode not in COEFFICIENT_MODES:
        raise DomainError("coefficient mode must be one of %s, got %r" %
                          (", ".join(COEFFICIENT_MODES), mode))
    moments = theoretical_moments(law)
    var = moments.require("variance")
    mu = moments.require(1)
    m2 = moments.require(2)
    if mode == CANONICAL:
        da1, da2, db1, db2 = delta_gradient(law.kind, mu, m2)
        h_coef, l_coef = (da1, da2), (db1, db2)
    else:
        h_coef, l_coef = _paper_coefficients(law.kind, mu, var, m2)
    return (QuadraticInfluence.centered(h_coef[0], h_coef[1], moments),
            QuadraticInfluence.centered(l_coef[0], l_coef[1], moments))


def _require_square_integrable(moments, *influences):
    if any(f.c2 for f in influences):
        moments.require(4)
        moments.require(3)
    else:
        moments.require(2)


def covariance_exact_moments(law, H, L):
    """Covariance of (H(X), L(X)) from the theoretical moments of the law

    Uses Var(c1 X + c2 X^2) = c1^2 v11 + 2 c1 c2 v12 + c2^2 v22 and its
    bilinear counterpart, with v11 = Var X, v12 = m3 - m1 m2 and
    v22 = m4 - m2^2.

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec
        from moment_utilities.asymptotics import influence_pair, \\
            covariance_exact_moments

        law = LawSpec("gamma", 2, 3)
        covariance_exact_moments(law, *influence_pair(law))

    Returns:

    .. code-block:: python

        Covariance2(s11=12.0, s22=31.5, s12=18.0, method='exact-moments')

    Raises
    ------
    MomentDomainError
        If a needed moment does not exist (Fisher: b>8 when c2 != 0)

    """
    moments = theoretical_moments(law)
    _require_square_integrable(moments, H, L)
    v11 = moments.require("variance")
    if H.c2 or L.c2:
        v12 = moments.m3 - moments.m1 * moments.m2
        v22 = moments.m4 - moments.m2 * moments.m2
    else:
        v12 = v22 = 0.0

    def cov(f, g):
        return (f.c1 * g.c1 * v11 + (f.c1 * g.c2 + f.c2 * g.c1) * v12 +
                f.c2 * g.c2 * v22)

    return Covariance2(cov(H, H), cov(L, L), cov(H, L), EXACT_MOMENTS)


def covariance_exact_quadrature(law, H, L, cfg=None):
    """Covariance of (H(X), L(X)) by quadrature over the law's quantiles

    Each of the integrals of H(Q(u)), L(Q(u)), their squares and product
    over (0, 1) is computed with `unit_interval_integrate` on one shared
    grid; Sigma follows as second moments minus products of means.

    Parameters
    ----------
    law : LawSpec
        The law.
    H, L : QuadraticInfluence
        Influence functions.
    cfg : QuadratureConfig, optional
        Quadrature settings.

    Returns
    -------
    Covariance2
        method "exact-quadrature"

    Raises
    ------
    MomentDomainError
        If the integrals diverge (Fisher: b>8 when c2 != 0)

    """
    _require_square_integrable(theoretical_moments(law), H, L)

    def integrand(u, v):
        x = quantile(law, u, v)
        h = H.evaluate(x)
        g = L.evaluate(x)
        return np.array([h, g, h * h, g * g, h * g])

    mh, ml, mhh, mll, mhl = unit_interval_integrate(
        integrand, cfg, with_complement=True)
    return Covariance2(float(mhh - mh * mh), float(mll - ml * ml),
                       float(mhl - mh * ml), EXACT_QUADRATURE)


def covariance_plugin(sample, H, L):
    """Sample covariance (divisor n - 1) of H(X_i) and L(X_i)

    The coefficients of H and L stay those of the hypothesized law; only
    the expectation is replaced by the sample average.

    Raises
    ------
    InsufficientDataError
        If the sample has fewer than 2 observations

    """
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientDataError(
            "at least 2 observations are needed, got %d" % x.size)
    s = np.cov(np.vstack([H.evaluate(x), L.evaluate(x)]), ddof=1)
    return Covariance2(float(s[0, 0]), float(s[1, 1]), float(s[0, 1]),
                       PLUGIN)


def covariance_replication(dev_a, dev_b):
    """Sample covariance (divisor B - 1) of replicated deviations

    Example Usage:

    .. code-block:: python

        from moment_utilities.asymptotics import covariance_replication

        covariance_replication([-1, 1], [-2, 2])

    Returns:

    .. code-block:: python

        Covariance2(s11=2.0, s22=8.0, s12=4.0, method='replication')

    Parameters
    ----------
    dev_a, dev_b : sequence of float
        sqrt(n) (a_hat - a) and sqrt(n) (b_hat - b) per replication.

    Raises
    ------
    DomainError
        If the lengths differ
    InsufficientDataError
        If fewer than 2 replications are given

    """
    dev_a = np.asarray(dev_a, dtype=float).ravel()
    dev_b = np.asarray(dev_b, dtype=float).ravel()
    if dev_a.size != dev_b.size:
        raise DomainError("deviation arrays differ in length: %d != %d" %
                          (dev_a.size, dev_b.size))
    if dev_a.size < 2:
        raise InsufficientDataError(
            "at least 2 replications are needed, got %d" % dev_a.size)
    s = np.cov(np.vstack([dev_a, dev_b]), ddof=1)
    return Covariance2(float(s[0, 0]), float(s[1, 1]), float(s[0, 1]),
                       REPLICATION)


def coordinate_influences(law):
    """Centered coordinate functions h1(x) = x and h2(x) = x^2 of a law"""
    moments = theoretical_moments(law)
    return (QuadraticInfluence.centered(1.0, 0.0, moments),
            QuadraticInfluence.centered(0.0, 1.0, moments))


def empirical_process(sample, influence):
    """Functional empirical process G_n(f) = sqrt(n) mean(f(X_i) - E f(X))

    `influence` is a QuadraticInfluence whose center is E f(X) under the
    hypothesized law.
    """
    x = np.asarray(sample, dtype=float).ravel()
    return float(math.sqrt(x.size) * np.mean(influence.evaluate(x)))

import math
from collections import namedtuple

import numpy as np

from .distributions import BETA, GAMMA, LAW_KINDS, UNIFORM
from .misc_helpers import DegenerateSampleError, DomainError, \
    InfeasibleMomentError, InsufficientDataError

# Uniform estimators: X-bar -/+ LAMBDA * S, LAMBDA = sqrt(12) / 2
LAMBDA = math.sqrt(3.0)

EmpiricalMoments = namedtuple('EmpiricalMoments',
                              'n mean mean_sq var_unbiased var_biased')

ParamEstimate = namedtuple('ParamEstimate', 'kind a_hat b_hat n')


def law_kind(kind):
    """Normalize a law kind given as a string or a LawSpec"""
    kind = str(getattr(kind, "kind", kind)).lower()
    if kind not in LAW_KINDS:
        raise DomainError("unknown law %r, expected one of %s" %
                          (kind, ", ".join(LAW_KINDS)))
    return kind


def empirical_moments(sample):
    """Sample size, mean, mean of squares and both variances of a sample

    The variance is computed in two passes (mean first, then squared
    deviations).

    Example Usage:

    .. code-block:: python

        from moment_utilities.estimation import empirical_moments

        empirical_moments([0, 2])

    Returns:

    .. code-block:: python

        EmpiricalMoments(n=2, mean=1.0, mean_sq=2.0, var_unbiased=2.0,
                         var_biased=1.0)

    Parameters
    ----------
    sample : sequence of float
        The observations.

    Returns
    -------
    EmpiricalMoments
        var_unbiased uses the divisor n - 1, var_biased the divisor n

    Raises
    ------
    InsufficientDataError
        If the sample has fewer than 2 observations
    DomainError
        If an observation is not finite

    """
    x = np.asarray(sample, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise InsufficientDataError(
            "at least 2 observations are needed, got %d" % n)
    if not np.all(np.isfinite(x)):
        raise DomainError("sample contains non-finite values")
    mean = float(np.mean(x))
    dev = x - mean
    var_biased = float(np.mean(dev * dev))
    return EmpiricalMoments(n, mean, float(np.mean(x * x)),
                            var_biased * n / (n - 1.0), var_biased)


def moments_from_summary(mean, mean_sq=None, variance=None, n=None):
    """Build EmpiricalMoments from summary statistics

    Exactly one of `mean_sq` and `variance` must be given. `variance` is
    the unbiased S^2. With n=None the moments are treated as population
    values and both variances coincide.

    Raises
    ------
    DomainError
        If both or neither of mean_sq and variance are given, or the implied
        variance is negative

    """
    if (mean_sq is None) == (variance is None):
        raise DomainError("give exactly one of mean_sq and variance")
    if n is not None and n < 2:
        raise InsufficientDataError(
            "at least 2 observations are needed, got %d" % n)
    factor = 1.0 if n is None else n / (n - 1.0)
    if mean_sq is not None:
        var_biased = mean_sq - mean * mean
        var_unbiased = var_biased * factor
    else:
        var_unbiased = variance
        var_biased = variance / factor
        mean_sq = var_biased + mean * mean
    if var_biased < 0:
        raise DomainError("variance must be >= 0, got %r" % var_biased)
    return EmpiricalMoments(n, mean, mean_sq, var_unbiased, var_biased)


def _closed_form(kind, mean, variance, mean_sq):
    if kind == GAMMA:
        if not variance > 0:
            raise DegenerateSampleError("gamma estimates require S^2>0, "
                                        "got S^2=%r" % variance)
        return mean * mean / variance, mean / variance

    if kind == BETA:
        spread = mean_sq - mean * mean
        if not spread > 0:
            raise DegenerateSampleError(
                "beta estimates require X2bar-Xbar^2>0, got %r" % spread)
        gap = mean - mean_sq
        if not gap > 0:
            raise DegenerateSampleError(
                "beta estimates require Xbar-X2bar>0, got %r" % gap)
        return mean * gap / spread, (1.0 - mean) * gap / spread

    if kind == UNIFORM:
        if variance < 0:
            raise DegenerateSampleError("uniform estimates require S^2>=0, "
                                        "got S^2=%r" % variance)
        half_width = LAMBDA * math.sqrt(variance)
        return mean - half_width, mean + half_width

    if not mean > 1:
        raise InfeasibleMomentError(
            "fisher estimates require Xbar>1, got Xbar=%r" % mean)
    denom = variance * (2.0 - mean) - mean * mean * (mean - 1.0)
    if not denom > 0:
        raise InfeasibleMomentError(
            "fisher estimates require S^2(2-Xbar)-Xbar^2(Xbar-1)>0, got %r"
            % denom)
    return 2.0 * mean * mean / denom, 2.0 * mean / (mean - 1.0)


def estimator_map(kind, m1, m2):
    """Moment estimators as a function of the first two raw moments

    This is the map g(m1, m2) = (a, b) inverting the moment equations of the
    law, with the variance taken as m2 - m1^2. Its gradient is
    `moment_utilities.asymptotics.delta_gradient`.

    Parameters
    ----------
    kind : str or LawSpec
        The law kind.
    m1, m2 : float
        First and second raw moments.

    Returns
    -------
    tuple
        (a, b)

    Raises
    ------
    EstimationError
        If (m1, m2) lies outside the domain of the map

    """
    return _closed_form(law_kind(kind), m1, m2 - m1 * m1, m2)


def estimate(kind, em):
    """Closed-form moment estimators (a_hat, b_hat) of a law

    * Gamma: (Xbar^2 / S^2, Xbar / S^2)
    * Beta: (Xbar (Xbar - X2bar) / V, (1 - Xbar) (Xbar - X2bar) / V) with
      the biased variance V = X2bar - Xbar^2
    * Uniform: Xbar -/+ sqrt(3) S
    * Fisher: (2 Xbar^2 / (S^2 (2 - Xbar) - Xbar^2 (Xbar - 1)),
      2 Xbar / (Xbar - 1))

    Example Usage:

    .. code-block:: python

        from moment_utilities.estimation import estimate, \\
            moments_from_summary

        estimate("gamma", moments_from_summary(2.0, variance=1.0))

    Returns:

    .. code-block:: python

        ParamEstimate(kind='gamma', a_hat=4.0, b_hat=2.0, n=None)

    Parameters
    ----------
    kind : str or LawSpec
        The law kind.
    em : EmpiricalMoments
        Moments of the sample.

    Returns
    -------
    ParamEstimate

    Raises
    ------
    DegenerateSampleError
        If a denominator vanishes (the message names the condition)
    InfeasibleMomentError
        For Fisher when Xbar <= 1 or the a_hat denominator is not positive

    """
    kind = law_kind(kind)
    a_hat, b_hat = _closed_form(kind, em.mean, em.var_unbiased, em.mean_sq)
    return ParamEstimate(kind, a_hat, b_hat, em.n)

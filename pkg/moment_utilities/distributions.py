"""The four parametric laws: Gamma, Beta, Uniform and Fisher.

Parametrisations:

* Gamma(a, b): shape a, rate b, density b^a x^(a-1) exp(-bx) / Gamma(a)
* Beta(a, b): density x^(a-1) (1-x)^(b-1) / B(a, b) on [0, 1]
* Uniform(a, b): constant density 1/(b-a) on [a, b]
* Fisher(a, b): Fisher-Snedecor law with a numerator and b denominator
  degrees of freedom, i.e. the law of (Z1/a)/(Z2/b) for independent
  chi-square variables Z1, Z2 with a and b degrees of freedom
"""
import math
from collections import namedtuple

import numpy as np

from .misc_helpers import DomainError, MomentDomainError, user_errors_group
from .special import ln_beta, ln_gamma, reg_inc_beta, reg_inc_gamma, \
    reg_inc_gamma_upper, solve_quantile

GAMMA = "gamma"
BETA = "beta"
UNIFORM = "uniform"
FISHER = "fisher"
LAW_KINDS = (GAMMA, BETA, UNIFORM, FISHER)

MAX_SEED = 2 ** 64 - 1

_ORDER_NAMES = {1: "first", 2: "second", 3: "third", 4: "fourth"}


_LawSpec = namedtuple('LawSpec', 'kind p1 p2')


class LawSpec(_LawSpec):
    """One of the four parametric laws with its parameter pair

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec

        law = LawSpec("gamma", 2, 3)
        str(law)

    Returns:

    .. code-block:: python

        'Gamma(2, 3)'

    Parameters
    ----------
    kind : str
        One of "gamma", "beta", "uniform", "fisher" (case-insensitive).
    p1 : float
        First parameter a.
    p2 : float
        Second parameter b.

    Raises
    ------
    DomainError
        If the kind is unknown or the parameters violate the law's domain:
        a > 0 and b > 0 for Gamma, Beta and Fisher; a < b for Uniform

    """
    __slots__ = ()

    def __new__(cls, kind, p1, p2):
        kind = str(kind).lower()
        errors = []
        if kind not in LAW_KINDS:
            errors.append("unknown law %r, expected one of %s" %
                          (kind, ", ".join(LAW_KINDS)))
        try:
            p1 = float(p1)
            p2 = float(p2)
        except (TypeError, ValueError):
            errors.append("parameters must be numbers, got (%r, %r)" %
                          (p1, p2))
        else:
            if not (math.isfinite(p1) and math.isfinite(p2)):
                errors.append("parameters must be finite")
            elif kind == UNIFORM and not p1 < p2:
                errors.append("uniform law requires a<b")
            elif kind in (GAMMA, BETA, FISHER) and not (p1 > 0 and p2 > 0):
                errors.append("%s law requires a>0 and b>0" % kind)
        user_errors_group(errors, error_class=DomainError,
                          subject="law specification")
        return super(LawSpec, cls).__new__(cls, kind, p1, p2)

    @property
    def a(self):
        return self.p1

    @property
    def b(self):
        return self.p2

    def __str__(self):
        return "%s(%g, %g)" % (self.kind.capitalize(), self.p1, self.p2)


_MomentSet = namedtuple('MomentSet', 'law m1 m2 m3 m4 variance')


class MomentSet(_MomentSet):
    """Theoretical moments m_k = E X^k of a law and its variance

    Entries that do not exist for the law's parameters (Fisher moments of
    order k need b > 2k) are None. Use `require` to read an entry that must
    exist.
    """
    __slots__ = ()

    def require(self, order):
        """Return the raw moment of the given order (1 to 4), or the variance
        for order "variance"

        Raises
        ------
        MomentDomainError
            If the moment does not exist for this law

        """
        if order == "variance":
            value, k = self.variance, 2
        else:
            value, k = self[order], order
        if value is None:
            raise MomentDomainError(
                "%s moment requires b>%d for %s" %
                (_ORDER_NAMES[k], 2 * k, self.law))
        return value


def support(law):
    """Closed support (lo, hi) of the law; hi may be infinite"""
    if law.kind == BETA:
        return 0.0, 1.0
    if law.kind == UNIFORM:
        return law.a, law.b
    return 0.0, math.inf


def pdf(law, x):
    """Density of the law at x

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec, pdf

        pdf(LawSpec("gamma", 1, 1), 2.0)

    Returns:

    .. code-block:: python

        0.1353352832366127

    Parameters
    ----------
    law : LawSpec
        The law.
    x : float
        Point of evaluation.

    Returns
    -------
    float
        The density, 0 outside the support (may be infinite at a boundary
        where the density diverges)

    """
    a, b = law.a, law.b
    if law.kind == UNIFORM:
        return 1.0 / (b - a) if a <= x <= b else 0.0

    if law.kind == GAMMA:
        if x < 0:
            return 0.0
        if x == 0:
            return _boundary_density(a, b)
        return math.exp(a * math.log(b) + (a - 1.0) * math.log(x) - b * x -
                        ln_gamma(a))

    if law.kind == BETA:
        if x < 0 or x > 1:
            return 0.0
        if x == 0:
            return _boundary_density(a, 1.0 / math.exp(ln_beta(a, b)))
        if x == 1:
            return _boundary_density(b, 1.0 / math.exp(ln_beta(a, b)))
        return math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) -
                        ln_beta(a, b))

    # fisher
    if x < 0:
        return 0.0
    if x == 0:
        return _boundary_density(0.5 * a, 1.0)
    return math.exp(0.5 * a * math.log(a / b) +
                    (0.5 * a - 1.0) * math.log(x) -
                    0.5 * (a + b) * math.log1p(a * x / b) -
                    ln_beta(0.5 * a, 0.5 * b))


def _boundary_density(shape, value_at_one):
    # density ~ x^(shape-1) at the boundary
    if shape < 1:
        return math.inf
    if shape == 1:
        return value_at_one
    return 0.0


def cdf(law, x):
    """Distribution function P(X <= x) of the law"""
    a, b = law.a, law.b
    if law.kind == UNIFORM:
        return min(1.0, max(0.0, (x - a) / (b - a)))
    if x <= 0:
        return 0.0
    if law.kind == GAMMA:
        return reg_inc_gamma(a, b * x)
    if law.kind == BETA:
        return 1.0 if x >= 1 else reg_inc_beta(a, b, x)
    if math.isinf(x):
        return 1.0
    return reg_inc_beta(0.5 * a, 0.5 * b, a * x / (a * x + b))


def sf(law, x):
    """Survival function P(X > x) of the law, accurate in the upper tail"""
    a, b = law.a, law.b
    if law.kind == UNIFORM:
        return min(1.0, max(0.0, (b - x) / (b - a)))
    if x <= 0:
        return 1.0
    if law.kind == GAMMA:
        return reg_inc_gamma_upper(a, b * x)
    if law.kind == BETA:
        return 0.0 if x >= 1 else reg_inc_beta(b, a, 1.0 - x)
    if math.isinf(x):
        return 0.0
    return reg_inc_beta(0.5 * b, 0.5 * a, b / (b + a * x))


def quantile(law, u, complement=None):
    """Generalized inverse of `cdf`

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec, quantile

        quantile(LawSpec("uniform", 2, 5), 0.5)

    Returns:

    .. code-block:: python

        3.5

    Parameters
    ----------
    law : LawSpec
        The law.
    u : float
        Probability in (0, 1).
    complement : float, optional
        1 - u computed without cancellation; upper-tail quantiles are
        solved from it, so u itself may round to 1.

    Returns
    -------
    float
        x with cdf(law, x) = u within 1e-8, except where the quantile
        lies closer to an end of the support than doubles resolve: for
        Beta(0.1, 0.1) and u = 0.99 the result is the largest double
        below 1, whose cdf is 0.984

    Raises
    ------
    DomainError
        If u is not strictly between 0 and 1
    ConvergenceError
        If the root search does not converge

    """
    if complement is None:
        if not 0 < u < 1:
            raise DomainError("quantile requires u in (0, 1), got %r" % u)
        complement = 1.0 - u
    if law.kind == UNIFORM:
        if u > 0.5:
            return law.b - complement * (law.b - law.a)
        return law.a + u * (law.b - law.a)
    lo, hi = support(law)
    if law.kind == GAMMA:
        guess = law.a / law.b
        if 0 < u < 0.5:
            # lower tail: P(a, x) ~ x^a / Gamma(a + 1)
            tail = math.exp((math.log(u) + ln_gamma(law.a + 1.0)) / law.a) \
                / law.b
            guess = min(guess, tail)
    elif law.kind == BETA:
        guess = law.a / (law.a + law.b)
    else:
        guess = 1.0
    return solve_quantile(lambda x: cdf(law, x), lambda x: sf(law, x),
                          lambda x: pdf(law, x), u, lo, hi, guess=guess,
                          complement=complement)


def make_generator(seed):
    """numpy Generator over the counter-based Philox bit generator

    Parameters
    ----------
    seed : int
        Unsigned 64-bit key.

    Raises
    ------
    DomainError
        If seed is not an integer in [0, 2^64)

    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or \
            not 0 <= int(seed) <= MAX_SEED:
        raise DomainError("seed must be an unsigned 64-bit integer, got %r"
                          % (seed,))
    return np.random.Generator(np.random.Philox(int(seed)))


def sample(law, n, seed):
    """Draw n i.i.d. values of the law

    Gamma variates come from numpy's standard_gamma (Marsaglia-Tsang);
    Beta is G1/(G1+G2) and Fisher is (2 G1/a)/(2 G2/b) with G1, G2
    independent standard Gamma variates of shapes (a, b) and (a/2, b/2)
    respectively.

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec, sample

        x = sample(LawSpec("gamma", 2, 3), 1000, seed=42)

    Parameters
    ----------
    law : LawSpec
        The law.
    n : int
        Number of draws, n >= 1.
    seed : int
        Unsigned 64-bit seed; the same seed always gives the same draws.

    Returns
    -------
    numpy.ndarray
        Array of n floats in draw order

    Raises
    ------
    DomainError
        If n < 1 or the seed is invalid

    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError("sample size must be an integer >= 1, got %r"
                          % (n,))
    rng = make_generator(seed)
    a, b = law.a, law.b
    if law.kind == UNIFORM:
        return rng.uniform(a, b, n)
    if law.kind == GAMMA:
        return rng.standard_gamma(a, n) / b
    if law.kind == BETA:
        g1 = rng.standard_gamma(a, n)
        g2 = rng.standard_gamma(b, n)
        return g1 / (g1 + g2)
    g1 = rng.standard_gamma(0.5 * a, n)
    g2 = rng.standard_gamma(0.5 * b, n)
    return (2.0 * g1 / a) / (2.0 * g2 / b)


def raw_moment(law, k):
    """E X^k for k >= 1, or None when it does not exist (Fisher, b <= 2k)"""
    a, b = law.a, law.b
    if law.kind == GAMMA:
        value = 1.0
        for j in range(k):
            value *= (a + j) / b
        return value
    if law.kind == BETA:
        value = 1.0
        for j in range(k):
            value *= (a + j) / (a + b + j)
        return value
    if law.kind == UNIFORM:
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))
    if b <= 2 * k:
        return None
    value = 1.0
    for j in range(k):
        value *= (b / a) * (a + 2.0 * j) / (b - 2.0 - 2.0 * j)
    return value


def theoretical_moments(law):
    """Raw moments m1..m4 and the variance of the law

    Example Usage:

    .. code-block:: python

        from moment_utilities.distributions import LawSpec, \\
            theoretical_moments

        theoretical_moments(LawSpec("fisher", 5, 10)).variance

    Returns:

    .. code-block:: python

        1.3541666666666667

    Returns
    -------
    MomentSet
        Moments of the law, None where a moment does not exist

    """
    a, b = law.a, law.b
    if law.kind == GAMMA:
        variance = a / b ** 2
    elif law.kind == BETA:
        variance = a * b / ((a + b) ** 2 * (a + b + 1.0))
    elif law.kind == UNIFORM:
        variance = (b - a) ** 2 / 12.0
    elif b > 4:
        variance = (2.0 * b ** 2 * (a + b - 2.0) /
                    (a * (b - 2.0) ** 2 * (b - 4.0)))
    else:
        variance = None
    moments = [raw_moment(law, k) for k in range(1, 5)]
    return MomentSet(law, *(moments + [variance]))

class MomentUtilitiesError(ValueError):
    """Base class of every error raised by moment_utilities"""


class DomainError(MomentUtilitiesError):
    """An argument lies outside the domain of a function"""


class QuadratureError(MomentUtilitiesError):
    """The integrand returned a non-finite value inside the interval

    Attributes
    ----------
    abscissa : float
        The point at which the integrand was evaluated.

    """

    def __init__(self, message, abscissa=None):
        super(QuadratureError, self).__init__(message)
        self.abscissa = abscissa


class ConvergenceError(MomentUtilitiesError):
    """An iterative solver stopped before reaching its tolerance"""


class MomentDomainError(MomentUtilitiesError):
    """A required theoretical moment does not exist for the law"""


class EstimationError(MomentUtilitiesError):
    """Moment estimators cannot be evaluated on the given moments"""


class InsufficientDataError(EstimationError):
    pass


class DegenerateSampleError(EstimationError):
    pass


class InfeasibleMomentError(EstimationError):
    pass


class SingularCovarianceError(MomentUtilitiesError):
    """The covariance estimate cannot support a joint test"""


class SimulationError(MomentUtilitiesError):
    pass


class ConfigError(MomentUtilitiesError):
    pass


class SampleParseError(MomentUtilitiesError):
    """A sample file could not be read

    Attributes
    ----------
    line : int or None
        1-based line number of the offending entry.

    """

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %s: %s" % (line, message)
        super(SampleParseError, self).__init__(message)
        self.line = line


def user_errors_group(error_msgs, error_class=ConfigError,
                      subject="configuration"):
    """Takes a list of error messages and raises them as a single error

    Will automatically remove instances of None and only raise if the list
    is not empty.

    Example Usage:

    .. code-block:: python

        from moment_utilities.misc_helpers import user_errors_group

        user_errors_group([None, "B must be >= 2", "n must be >= 2"])

    Raises:

    .. code-block:: none

        ConfigError: 2 error(s) found in this configuration: <Error 1> B
        must be >= 2 <Error 2> n must be >= 2

    Parameters
    ----------
    error_msgs : list
        List of strings that are the error messages
    error_class : type, optional
        Exception class to raise. Default: ConfigError.
    subject : str, optional
        What was being validated, used in the message.

    Raises
    ------
    ValueError
        If error_msgs is not of type list
    ConfigError
        If at least one message is not None

    """
    if not isinstance(error_msgs, list):
        raise ValueError("Error messages must be in the form of a list to "
                         "properly format the grouped message.")

    error_msgs = [_f for _f in error_msgs if _f]
    if len(error_msgs) != 0:
        raise error_class(
            "%s error(s) found in this %s: " % (len(error_msgs), subject) +
            " ".join(["<Error " +
                      str(i + 1) + "> " +
                      str(m) for i, m in enumerate(error_msgs)]))


def make_list(my_str, integer=False):
    """
    Return a list of strings (or ints) from a string containing
    comma separated elements.

    Example Usage:

    .. code-block:: python

        from moment_utilities.misc_helpers import make_list

        make_list("50, 100,200", integer=True)

    Returns:

    .. code-block:: python

        [50, 100, 200]

    Parameters
    ----------
    my_str : str
        String with individual elements separated by comma.
    integer : bool
        If true list of integers instead of list of strings
        is returned. Default: False.

    Returns
    -------
    list
        List of strings or integers

    Raises
    ------
    ValueError
        If my_str is not of type string or an element is not an integer

    """
    if not isinstance(my_str, str):
        raise ValueError("Input needs to be of type string")
    items = [x.strip() for x in my_str.split(",") if x.strip()]
    if integer:
        items = [int(x) for x in items]
    return items

"""Exception hierarchy shared by all modules."""


class ToeplitzAsyError(Exception):
    """Base class for all library errors."""


class PoleError(ToeplitzAsyError):
    """Evaluation requested at a pole of the function."""


class ZeroError(ToeplitzAsyError):
    """Evaluation at a zero where the logarithm is undefined."""


class ParameterError(ToeplitzAsyError):
    """Parameter outside the supported range."""


class DomainError(ToeplitzAsyError):
    """Argument outside the domain of an operator kernel."""


class QuadratureError(ToeplitzAsyError):
    """Adaptive quadrature could not meet the requested tolerance in budget."""


class SingularPointError(ToeplitzAsyError):
    """Symbol evaluated exactly at one of its singular points."""


class DegenerateError(ToeplitzAsyError):
    """alpha_j +/- beta_j hit a negative integer: the leading asymptotics degenerate."""


class SeminormError(ToeplitzAsyError):
    """The beta seminorm is >= 1, outside the validity of the single-term formula."""


class SymmetryError(ToeplitzAsyError):
    """Operation requires an even symbol (f_j = f_{-j})."""


class PrecisionError(ToeplitzAsyError):
    """Even extended precision could not certify the requested digits."""


class SingularMinorError(ToeplitzAsyError):
    """A leading principal minor D_j vanishes; orthogonal polynomials undefined."""


class ConvergenceError(ToeplitzAsyError):
    """Discretization refinement changed the result by more than the tolerance."""


class PoleProximityError(ToeplitzAsyError):
    """ODE integration step size collapsed, likely near a movable pole."""


class InstabilityError(ToeplitzAsyError):
    """Boundary-value collocation failed to converge."""


class SizeError(ToeplitzAsyError):
    """Problem size above the exhaustive-enumeration bound."""


class InvalidPermutationError(ToeplitzAsyError):
    """Input is not a permutation of 1..N."""


class DivergenceWarning(UserWarning):
    """Truncated coefficient sum looks divergent; prediction may be unreliable."""

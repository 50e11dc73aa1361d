"""Exception types shared across the package."""


class NumericDomainError(ValueError):
    """A value fell outside the domain where a quantity is defined or finite."""


class StepSizeError(ValueError):
    """The imaginary-time step makes the Crank-Nicolson matrix indefinite."""


class ZeroPivotError(ArithmeticError):
    """Tridiagonal elimination hit a (numerically) zero pivot."""


class CollapseError(RuntimeError):
    """A trial state lies in the span of the already converged states."""


class ContractError(ValueError):
    """An input violated a documented precondition (e.g. not normalized)."""


class DenseSizeError(ValueError):
    """Dense verification requested on a grid larger than the cost guard."""

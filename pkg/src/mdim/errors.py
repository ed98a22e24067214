"""Exception types shared across the package."""


class MdimError(Exception):
    """Base class for all package errors."""


class ParameterError(MdimError, ValueError):
    """An argument is outside its documented domain."""


class ConnectivityError(MdimError):
    """Operation requires a connected graph."""


class ConvergenceError(MdimError):
    """Iterative solver exhausted its iteration limit."""


class CertificateInapplicableError(MdimError):
    """The hypothesis of the certifying inequality does not hold.

    Raised e.g. when a matrix handed to the width bound has duplicate
    rows, so the bound says nothing about it.
    """


class ConstructionFailureError(MdimError):
    """Randomized separator construction failed within its retry budget.

    Carries enough context to tell an unlucky draw apart from a sampled
    (non-guaranteed) sigma estimate.
    """

    def __init__(self, z: int, sigma: float, sigma_exact: bool, attempts: int):
        self.z = z
        self.sigma = sigma
        self.sigma_exact = sigma_exact
        self.attempts = attempts
        if sigma_exact:
            hint = (
                "sigma was exact, so a separator of this size exists; "
                "all draws were unlucky (probability <= 2^-attempts)"
            )
        else:
            hint = "sigma was a sampled estimate and may be too optimistic"
        super().__init__(
            f"no verified separator after {attempts} attempts "
            f"(Z={z}, sigma={sigma:.6g}): {hint}"
        )


class BudgetExhaustedError(MdimError):
    """Exact search ran out of node expansions; carries the proven bracket."""

    def __init__(self, lower: int, upper: int, expansions: int):
        self.lower = lower
        self.upper = upper
        self.expansions = expansions
        super().__init__(
            f"search budget exhausted after {expansions} expansions; "
            f"metric dimension is in [{lower}, {upper}]"
        )

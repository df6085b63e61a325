"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed caller input: bad labels, wrong dimensions, empty lists."""


class UnphysicalParameterError(ValueError):
    """Parameter outside its physical domain (mixing ratio >= 1, |tau| > 1, ...)."""


class UnsupportedRegimeError(ValueError):
    """Parameter combination outside the modeled regime (idler coupling >= signal coupling)."""


class PhysicalityError(ValueError):
    """Covariance matrix violates the uncertainty bound (symplectic eigenvalue < 1/2)."""


class NumericalDegeneracyError(ArithmeticError):
    """Covariance matrix too close to singular for the requested quantity."""


class SingularInputError(ValueError):
    """Input sits on a pole of a closed-form expression."""

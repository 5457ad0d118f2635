"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class NumericalError(RuntimeError):
    """A numerical procedure (bracketing, integration, eigensolve) failed."""


class ResolutionError(DomainError):
    """A lattice is too coarse to resolve the requested length scale."""

"""Exception and warning types shared across the package."""


class PTChainError(Exception):
    pass


class InvalidSpec(PTChainError, ValueError):
    pass


class InvalidSize(InvalidSpec):
    pass


class InvalidDetuning(InvalidSpec):
    pass


class OmegaOutsideBand(PTChainError, ValueError):
    """Energy lies outside the open lead band |omega| < 2 t0."""


class SingularMatrix(PTChainError, ArithmeticError):
    pass


class EigenFailure(PTChainError, ArithmeticError):
    pass


class UnsupportedCouplingPattern(PTChainError, ValueError):
    pass


class NoInnerChain(PTChainError, ValueError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass


class ConfigError(PTChainError, ValueError):
    """Malformed or inconsistent run configuration."""

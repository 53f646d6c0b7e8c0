"""Exception types raised across the package."""


class LatticeError(Exception):
    """Base class for all package errors."""


class SingularGenerator(LatticeError, ValueError):
    pass


class EnumerationBudgetExceeded(LatticeError, RuntimeError):
    """Raised when a sphere enumeration would produce more points than allowed.

    Callers should shrink the radius or raise the budget.
    """


class NotNested(LatticeError, ValueError):
    pass


class IndexOverflow(LatticeError, ValueError):
    pass


class LabelOutOfRange(LatticeError, ValueError):
    pass


class NotInFineLattice(LatticeError, ValueError):
    pass


class NotTotallyReal(LatticeError, ValueError):
    pass


class SingularEmbedding(LatticeError, ValueError):
    pass


class EmptyShell(LatticeError, ValueError):
    pass


class ExpansionInvalid(LatticeError, ValueError):
    """The second-order Gaussian expansion went negative (noise variance too small)."""


class NotFullDiversity(LatticeError, ValueError):
    pass


class RowAnnihilated(LatticeError, ValueError):
    """A nonzero block codeword has an all-zero row within the enumerated shell."""


class DimensionMismatch(LatticeError, ValueError):
    pass


class VolumeMismatch(LatticeError, ValueError):
    pass


class ConfigError(LatticeError, ValueError):
    """Problem in a lattice description file; carries path, key and line."""

    def __init__(self, path, key, message, line=None):
        self.path = str(path)
        self.key = key
        self.line = line
        self.message = message
        where = self.path if line is None else f"{self.path}:{line}"
        super().__init__(f"{where}: key '{key}': {message}")

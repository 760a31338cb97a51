"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible or unsupported sizes, or indices fall out of range."""


class NegativeEntriesError(ValueError):
    """An algorithm that needs nonnegative data received a negative value."""


class NotAnEigenpairError(ValueError):
    """A candidate pair does not satisfy the M-eigen equations at the requested tolerance."""


class DocumentParseError(ValueError):
    """Malformed tensor document or edge list.

    ``line`` and ``column`` are 1-based; ``column`` is 0 when unknown.
    """

    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "")
        super().__init__(f"{where}: {message}" if line else message)

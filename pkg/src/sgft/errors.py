"""Exception hierarchy.

Every error raised by the package derives from :class:`SGFTError`. The two
intermediate classes, :class:`DataError` and :class:`NumericalError`, are what
the command-line frontend maps onto exit codes 2 and 3.
"""


class SGFTError(Exception):
    """Base class for all package errors."""


class DataError(SGFTError, ValueError):
    """Invalid input data (graph, signal, file contents)."""


class NumericalError(SGFTError, ArithmeticError):
    """A numerical routine could not deliver a valid result."""


# graph construction
class InvalidEdge(DataError):
    pass


class SelfLoop(InvalidEdge):
    pass


class DuplicateEdge(InvalidEdge):
    pass


class DisconnectedGraph(DataError):
    pass


class EmptySeed(DataError):
    pass


class FullSeed(DataError):
    pass


# spectral engine
class NotSymmetric(DataError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class TruncatedBasis(DataError):
    pass


class CacheError(DataError):
    """Eigenbasis cache file is corrupt, has the wrong format, or is stale."""


# localization / transform
class GammaOutOfRange(NumericalError):
    pass


class PreconditionViolated(DataError):
    pass


class DegenerateWindow(NumericalError):
    pass


class FrequencyOutOfRange(DataError):
    pass


class VertexOutOfRange(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class ZeroVarianceSignature(NumericalError):
    pass


# datasets
class NotARingEdge(DataError):
    pass


class DuplicatePoints(DataError):
    pass


class MalformedRow(DataError):
    pass


class EmptyDataset(DataError):
    pass

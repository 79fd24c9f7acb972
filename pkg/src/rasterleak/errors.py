"""Exception taxonomy shared across the package."""


class RasterleakError(Exception):
    """Base class for all domain errors."""


class ParamError(RasterleakError, ValueError):
    """A parameter violates an operation's precondition."""


class FormatError(RasterleakError):
    """A file is structurally malformed for its declared format."""


class UnsupportedError(RasterleakError):
    """A file is well-formed but uses an unsupported variant (e.g. stereo)."""


class IoError(RasterleakError, OSError):
    """A path could not be read or written."""


class EmptyDictionaryError(RasterleakError):
    """A word list contained no usable entries."""


class NoMasterError(RasterleakError):
    """No pair of consecutive, above-threshold chunks exists in the signal."""


class SyncBudgetError(RasterleakError):
    """The chunker spent too long re-synchronizing; the signal is too noisy."""


class DegenerateSetError(RasterleakError):
    """Outlier rejection removed every non-master chunk."""


class EstimationError(RasterleakError):
    """No cycle-length candidate produced a usable chunking on any signal."""

class MfcError(Exception):
    """Base exception for all mean-field-convexity errors."""
    pass

class MalformedInputError(MfcError, ValueError):
    """A file or token could not be parsed."""
    pass

class UnsupportedFormatError(MfcError):
    pass

class DimensionMismatchError(MfcError, ValueError):
    pass

class KernelSpecError(MfcError, ValueError):
    pass

class NotSymmetricError(MfcError, ValueError):
    pass

class NegativeEntryError(MfcError, ValueError):
    pass

class InfiniteEntryError(MfcError, ValueError):
    """An operation that needs a finite matrix met +inf."""
    pass

class InvalidMeasureError(MfcError, ValueError):
    pass

class InfiniteEnergyError(MfcError, ValueError):
    pass

class CapOverflowError(MfcError):
    """Enumeration would exceed the configured cap."""
    pass

class OffGridError(MfcError, ValueError):
    pass

class WitnessError(MfcError, ValueError):
    pass

class QuadratureError(MfcError):
    pass

class ConvergenceError(MfcError):
    pass

class LpFailureError(MfcError):
    pass

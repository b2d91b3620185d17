"""Exception types shared across the package."""


class OuttransError(Exception):
    """Base class for all errors raised by this package."""


class EmptyCorpus(OuttransError):
    """A parallel corpus with no sentence pairs was given where one is required."""


class EmptyQuery(OuttransError):
    """A query sentence pair has an empty source or target side."""


class EmptyInput(OuttransError):
    """An assist request carried no text after whitespace normalization."""


class CorpusFormatError(OuttransError):
    """Parallel or triplet files do not line up (unequal line counts, etc.)."""


class LengthMismatch(OuttransError):
    """Two sequences that must be the same length are not."""


class UnknownTag(OuttransError):
    """A tag literal other than OK or BAD was encountered."""


class IndexOutOfRange(OuttransError):
    """An alignment link points outside the source or target sentence."""


class GatewayError(OuttransError):
    """Base class for MT gateway errors; ``leg`` is set by round_trip."""

    leg: str | None = None


class UnsupportedPair(GatewayError):
    """The engine does not support the requested language pair."""


class LengthLimitExceeded(GatewayError):
    """Input is longer than the engine's token limit; never truncated silently."""

    def __init__(self, actual: int, limit: int):
        super().__init__(f"input has {actual} tokens, engine limit is {limit}")
        self.actual = actual
        self.limit = limit


class RemoteFailure(GatewayError):
    """A remote MT adapter failed after its single retry."""

    def __init__(self, status: int | None, message: str = ""):
        detail = message or f"remote engine returned status {status}"
        super().__init__(detail)
        self.status = status


class NonBijectiveDictionary(OuttransError):
    """A reversible mock requires a bijective token dictionary."""


class UnknownEngine(OuttransError):
    """Registry lookup for an id that was never registered."""


class SchemaViolation(OuttransError):
    """An event record does not match its code's payload schema."""


class StorageFailure(OuttransError):
    """The event log could not be written."""


class QueueFull(OuttransError):
    """The assist request queue is at capacity."""


class InfeasibleQuota(OuttransError):
    """A span-sampling quota exceeds the available spans in a bucket."""

    def __init__(self, bucket: int, quota: int, available: int):
        super().__init__(
            f"bucket {bucket}: quota {quota} exceeds {available} available spans"
        )
        self.bucket = bucket


class SynthesisError(OuttransError):
    """Dataset synthesis aborted; ``index`` is the failing triple."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"engine failed on triple {index}: {cause}")
        self.index = index
        self.cause = cause

"""Exception types raised across the toolkit.

Every error deliberately raised by toonbench derives from ToonbenchError so
callers can distinguish data problems from programming bugs.
"""


class ToonbenchError(Exception):
    """Base class for all toolkit errors."""


class DecodeError(ToonbenchError):
    """File is not a decodable PNG of a supported color type."""


class ZeroDimensionError(ToonbenchError):
    """Mask has a zero width or height."""


class ShapeMismatchError(ToonbenchError):
    """Prediction and ground truth differ in width or height."""


class EmptyMaskError(ToonbenchError):
    """Operation requires at least one set pixel."""


class EmptyForegroundError(ToonbenchError):
    """Ground truth has no foreground pixel above the threshold."""


class EmptyBandsError(ToonbenchError):
    """Both boundary bands are empty; boundary IoU is undefined."""


class TooSmallError(ToonbenchError):
    """Masks are smaller than the sliding-window size."""


class BothEmptyError(ToonbenchError):
    """Soft IoU is undefined when both masks are identically zero."""


class AlreadySplitError(ToonbenchError):
    """Manifest records already carry split assignments."""


class EmptyCategoryError(ToonbenchError):
    """A category has no records to split."""


class TargetTooLargeError(ToonbenchError):
    """Curation target exceeds the number of scored records."""


class ManifestError(ToonbenchError):
    """Manifest file is structurally invalid."""


class ManifestInvalidError(ToonbenchError):
    """Manifest failed validation against the files on disk."""


class AmbiguousPredictionError(ToonbenchError):
    """More than one prediction file matches a record id."""


class MissingPredictionError(ToonbenchError):
    """A record in the evaluated split has no prediction file."""


class NoPairsResolvedError(ToonbenchError):
    """A model run matched no prediction files at all."""


class EmptyReportsError(ToonbenchError):
    """Report rendering was given no reports."""


class NoCandidatesError(ToonbenchError):
    """Checkpoint selection was given no candidates."""


class NoComparablePairsError(ToonbenchError):
    """No ranking pair has complete metric scores."""


class SessionError(ToonbenchError):
    """Review session misuse (unknown task, label mismatch, duplicate)."""


class UnknownTaskError(SessionError):
    pass


class LabelMismatchError(SessionError):
    pass


class DuplicateSubmissionError(SessionError):
    pass


class UnknownHandleError(SessionError):
    pass

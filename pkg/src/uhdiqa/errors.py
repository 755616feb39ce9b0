"""Exception hierarchy shared across the toolkit.

Every error raised by the library derives from :class:`UhdiqaError`, so
callers (and the CLI) can catch one type and map it to exit code 1.
"""


class UhdiqaError(Exception):
    """Base class for all library errors."""


# --- manifest / dataset ---------------------------------------------------


class ManifestError(UhdiqaError):
    """Malformed manifest; message carries the offending row number."""


class MissingColumnError(ManifestError):
    pass


class DuplicateImageIdError(ManifestError):
    pass


class NonFiniteMosError(ManifestError):
    pass


class ExclusiveInTrainError(ManifestError):
    pass


class InvalidSplitError(UhdiqaError):
    pass


class EmptySubsetError(UhdiqaError):
    pass


# --- image views ----------------------------------------------------------


class CellTooSmallError(UhdiqaError):
    """A grid cell cannot host one fragment of the requested size."""


class CropLargerThanImageError(UhdiqaError):
    pass


class ViewError(UhdiqaError):
    """Failure while materializing a view; carries the view index."""

    def __init__(self, index: int, message: str):
        super().__init__(f"view {index}: {message}")
        self.index = index


# --- metrics --------------------------------------------------------------


class ZeroVarianceError(UhdiqaError):
    pass


class SingularDesignError(UhdiqaError):
    pass


class UnmatchedIdsError(UhdiqaError):
    """Prediction/ground-truth join failure; lists the offending ids."""

    def __init__(self, message: str, offenders):
        super().__init__(f"{message}: {', '.join(sorted(offenders))}")
        self.offenders = sorted(offenders)


# --- ranking --------------------------------------------------------------


class DuplicateTeamError(UhdiqaError):
    pass


# --- losses ---------------------------------------------------------------


class LengthMismatchError(UhdiqaError):
    pass


class DegenerateRangeError(UhdiqaError):
    pass


# --- compute budget -------------------------------------------------------


class ShapeMismatchError(UhdiqaError):
    pass


# --- predictor ------------------------------------------------------------


class TooFewRowsError(UhdiqaError):
    pass


class MissingFeatureError(UhdiqaError):
    pass

"""Exception taxonomy shared by every module in the package."""


class SimtopicsError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SimtopicsError):
    """A text artifact does not match its documented layout."""


class AlignmentError(SimtopicsError):
    """Matrix rows and token documents disagree in count."""


class ZeroVectorError(SimtopicsError):
    """An all-zero row appeared where cosine geometry needs a direction."""


class EmptyDocumentError(SimtopicsError):
    """A document contributes no tokens."""


class DomainError(SimtopicsError):
    """A numeric argument lies outside its admissible range."""


class EmptyGroupError(SimtopicsError):
    """A candidate group has no members."""


class NoGroupsError(SimtopicsError):
    """Every point is isolated at the current threshold."""


class DegenerateLabelError(SimtopicsError):
    """Information gain needs at least two distinct topic labels."""


class LengthMismatchError(SimtopicsError):
    """Ranked word lists must share one common length."""


class EmptyStoreError(SimtopicsError):
    """The embedding store holds no usable vectors."""


class SingleTopicError(SimtopicsError):
    """A metric over topic pairs needs at least two topics."""


class UnknownWordError(SimtopicsError):
    """A queried word is absent from the vocabulary."""


class DimensionMismatchError(SimtopicsError):
    """Vector width disagrees with the fitted geometry."""

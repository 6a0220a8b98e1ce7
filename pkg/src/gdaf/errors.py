"""Exception types raised across the gdaf package."""


class GdafError(Exception):
    """Base class for all gdaf errors."""


class MalformedDocumentError(GdafError):
    """File could not be parsed at all (bad JSON, wrong top-level type)."""


class SchemaError(GdafError):
    """Parsed document does not satisfy the container schema."""


class UnknownSpeedError(GdafError):
    """Requested speed is not on the set's speed grid."""


class MissingChannelError(GdafError):
    """A required channel is absent from the set."""


class InsufficientStridesError(GdafError):
    """Fewer than two gait events were detected in a recording."""


class DegenerateStrideError(GdafError):
    """A stride segment is too short to resample."""


class EmptyInputError(GdafError):
    """An aggregation was called with no inputs."""


class MappingError(GdafError):
    """Joint map references a channel that does not exist, or is inconsistent."""


class IncompleteGridError(GdafError):
    """A (channel, speed) cell is missing while assembling a gait set."""


class DegenerateVarianceError(GdafError):
    """Correlation of a constant series is undefined."""


class NoCommonSpeedsError(GdafError):
    """The two sets being compared share no walking speed."""


class ConfigError(GdafError):
    """Run configuration is invalid or unresolvable."""

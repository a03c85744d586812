"""Exception hierarchy.

Two families map onto the CLI exit codes: :class:`InputError` (bad files or
arguments, exit 2) and :class:`DegenerateDataError` (inputs parse fine but the
data cannot support the requested computation, exit 3).
"""


class RlnetError(Exception):
    """Base class for all package errors."""


class InputError(RlnetError):
    exit_code = 2


class DegenerateDataError(RlnetError):
    exit_code = 3


# ingestion
class MalformedInput(InputError):
    pass


class DuplicateOrgId(InputError):
    pass


class MissingRequiredField(InputError):
    pass


class OutOfRangeCoordinate(InputError):
    pass


class UnknownReporter(InputError):
    pass


class UnknownPartner(InputError):
    pass


class SelfLoopEvent(InputError):
    pass


class DateOutsideStudyPeriod(InputError):
    pass


class UnknownOrg(InputError):
    pass


class MissingCoordinates(InputError):
    pass


class InvalidConfig(InputError):
    pass


# degenerate data
class EmptyStudyPeriod(DegenerateDataError):
    pass


class DegenerateGraph(DegenerateDataError):
    pass


class InsufficientData(DegenerateDataError):
    pass


class InsufficientObservations(DegenerateDataError):
    pass


class RankDeficient(DegenerateDataError):
    pass


class ConstantVariable(DegenerateDataError):
    pass


class DegenerateGroups(DegenerateDataError):
    pass


class ZeroWithinVariance(DegenerateDataError):
    pass

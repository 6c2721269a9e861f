"""Exception hierarchy.

Two families matter to callers: ``ConfigError`` covers anything that went
wrong while loading or validating authored inputs (graph files, procedure
documents, CPT tables, telemetry headers), while other ``ProcGateError``
subclasses signal violations raised during live operation (lifecycle,
approvals, preconditions). The CLI maps the families to distinct exit codes.
"""


class ProcGateError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ProcGateError):
    """An authored input (config, fixture, document) is invalid."""


# -- interface graph ---------------------------------------------------------

class DuplicateElementError(ConfigError):
    pass


class MissingParentError(ConfigError):
    pass


class UnknownElementError(ProcGateError):
    pass


class UnreachableError(ProcGateError):
    """No navigation route exists between the two elements."""


class GraphInvariantError(ConfigError):
    """Layer, bounds, self-loop or forest invariant broken."""


class UnsupportedFormatError(ConfigError):
    pass


# -- procedures --------------------------------------------------------------

class ProcedureParseError(ConfigError):
    pass


class MalformedStepError(ProcedureParseError):
    pass


class DuplicateStepError(ProcedureParseError):
    pass


class UnresolvableTargetError(ProcGateError):
    """A step target matches no element in the graph."""


class AmbiguousTargetError(ProcGateError):
    """A step target matches several elements case-insensitively."""


class LifecycleViolation(ProcGateError):
    """Step lifecycle may only move Pending -> Intended -> Executed."""


# -- risk model --------------------------------------------------------------

class MissingFunctionConfigError(ConfigError):
    """An engaged cognitive function has no configured model."""


# -- safety gate -------------------------------------------------------------

class CyclicTopologyError(ConfigError):
    pass


class UnnormalizedCptError(ConfigError):
    pass


class UnknownNodeError(ProcGateError):
    pass


class UnknownStateError(ProcGateError):
    pass


class InvalidThresholdsError(ConfigError):
    pass


# -- perception --------------------------------------------------------------

class NonMonotonicTimeError(ConfigError):
    pass


class MissingColumnError(ConfigError):
    pass


class UnparseableNumberError(ConfigError):
    pass


class InsufficientFramesError(ProcGateError):
    pass


class DimensionMismatchError(ProcGateError):
    pass


# -- runtime -----------------------------------------------------------------

class UnknownApprovalError(ProcGateError):
    pass


class ExpiredApprovalError(ProcGateError):
    pass


class StepNotExecutedError(ProcGateError):
    pass


class NoActiveStepError(ProcGateError):
    """Runtime is not positioned on an evaluable step."""

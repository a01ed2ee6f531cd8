"""Error types shared across the package."""


class VdpError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(VdpError):
    """A result digit could not be certified within the working precision."""


class ZeroVector(VdpError):
    """A nonzero vector was required."""


class DifferentOrigin(VdpError):
    """Two arrows were compared that do not share an origin."""


class EqualHyperplanes(VdpError):
    """Two distinct hyperplanes were required."""


class NotSpecialArrow(VdpError):
    """An arrow of the special tree was required."""


class NotHarmonic(VdpError):
    """A cochain failed a harmonicity check where passing was a precondition."""


class FlowViolation(VdpError):
    """A tree cochain violated the flow condition."""


class NonzeroSum(VdpError):
    """Target values were required to sum to zero."""


class DepthExceeded(VdpError):
    """A query went below the stored depth of a distribution."""


class WorkLimitExceeded(VdpError):
    """An enumeration exceeded the configured work budget."""


class InputError(VdpError):
    """Malformed user input (bad JSON payload, bad parameters)."""

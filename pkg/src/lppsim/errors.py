"""Exception types shared across the package."""


class DimensionTooSmallError(ValueError):
    """Weight field narrower or shorter than the three-source geometry needs."""


class WindowExhaustedError(RuntimeError):
    """The head-start statistic is unresolved within the sampled window."""


class TooManyPathsError(ValueError):
    """Brute-force path enumeration would exceed the safety guard."""


class WindowTooSmallError(ValueError):
    """Requested window does not cover the object being constructed."""


class InvalidGapError(ValueError):
    """Second-class embedding called with an unsupported pair gap."""


class NotDownClosedError(ValueError):
    """Infected set is not closed under directed predecessors."""


class AbsentLabelError(LookupError):
    """Configuration does not contain the requested label exactly once."""


class HorizonExceedsWindowError(ValueError):
    """Sub-level set of passage times is not contained in the grid."""

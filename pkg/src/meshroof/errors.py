"""Exception hierarchy shared across the package.

All validation failures derive from ValidationError so callers (and the CLI)
can distinguish "bad input" from "input is fine but the configuration cannot
be built" (InfeasibleWorkloadError).
"""


class ValidationError(ValueError):
    """An input value violates a documented invariant."""


class CoordinateError(ValidationError):
    """A router coordinate or core slot is outside the mesh."""


class ConfigurationError(ValidationError):
    """A workload or placement is structurally invalid (unassigned population,
    dangling connection endpoint, capacity overflow, pattern mismatch)."""


class MappingError(ValidationError):
    """A core referenced by traffic accounting has no physical mapping."""


class InfeasibleWorkloadError(Exception):
    """The workload is well-formed but does not fit the hardware budget
    (e.g. dense rows exceed per-core synaptic memory)."""


class FitError(ValidationError):
    """A measurement series is too degenerate to fit."""

"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""


class ContradynError(Exception):
    """Base class for package errors."""


class ConfigError(ContradynError):
    """Malformed parameters: bad offsets string, weights not summing to one,
    p outside [0, 1), dimension mismatches, and similar."""


class InvalidModelError(ContradynError):
    """Structurally valid parameters that define a broken model, e.g. a
    neighbor set whose closure does not generate the whole torus."""


class DegenerateMixtureError(ContradynError):
    """Mixture whose geometric-mean spectrum vanishes everywhere outside
    the consensus mode; no scaling can stabilize such a system."""

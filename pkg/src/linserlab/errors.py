"""Exception taxonomy.

Computational errors (bad inputs to a well-formed query, exhausted budgets)
derive from LabError and map to CLI exit code 1.  Configuration errors
(malformed model files, bad flags) derive from ConfigError and map to exit
code 2.
"""


class LabError(Exception):
    """Base class for all computational errors raised by this package."""


class InvalidScalarError(LabError):
    """Bad exact-scalar construction or arithmetic (e.g. mixing radicals)."""


class InvalidComparisonError(LabError):
    """Comparison between quadratic values with incompatible discriminants."""


class UnboundedPolytopeError(LabError):
    """A bounded polytope was required but the region is unbounded."""


class BudgetExceededError(LabError):
    """An enumeration exceeded its configured candidate-point budget."""


class NotAFaceError(LabError):
    """The given hyperplane cuts the interior of the polytope."""


class InvalidOperandsError(LabError):
    """Operands of a polyhedral operation are structurally incompatible."""


class InvalidModelError(LabError):
    """Model data violates a construction invariant (e.g. wrong signature)."""


class UnsupportedClassError(LabError):
    """The divisor class lies outside the chart the formula is valid on."""


class NotPseudoeffectiveError(LabError):
    """The class admits no effective decomposition."""


class NotBigError(LabError):
    """The invariant is only defined on the big cone."""


class UnsupportedModelError(LabError):
    """The operation is not defined for this model type."""


class UnsupportedChartError(LabError):
    """The requested torus-fixed chart is missing or not smooth."""


class NotEffectiveError(LabError):
    """No multiple of the direction yields a nonzero ideal."""


class ConfigError(Exception):
    """Invalid run configuration (CLI flags, option combinations)."""


class ModelFormatError(ConfigError):
    """Malformed model/family file; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")

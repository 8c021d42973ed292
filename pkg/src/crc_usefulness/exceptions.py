"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ConfigError`` -> 2, ``DataError`` -> 3,
``PipelineError`` -> 4.
"""


class CRCError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CRCError):
    pass


class DataError(CRCError, ValueError):
    """Input data violates a contract (bad label, out-of-range score...)."""


class SchemaError(DataError):
    """A required column is missing or an unknown column was supplied."""


class EmptyDatasetError(DataError):
    pass


class FormatError(DataError):
    """Malformed file (e.g. an embedding line of the wrong width)."""


class PipelineError(CRCError):
    pass


class StratificationError(PipelineError, ValueError):
    pass


class VectorizerError(PipelineError, ValueError):
    pass


class FoldError(PipelineError):
    pass


class SelectionError(PipelineError):
    pass


class DegenerateTestError(PipelineError, ValueError):
    """A statistical test has no information (e.g. all differences zero)."""


class UndefinedEffectError(PipelineError, ValueError):
    """Cohen's D with zero pooled standard deviation."""


class UnsupportedModelError(PipelineError, TypeError):
    pass


class StalenessError(PipelineError):
    """An upstream artifact is missing or was produced under another config."""


class SingleClassError(PipelineError, ValueError):
    """Training labels contain only one class."""

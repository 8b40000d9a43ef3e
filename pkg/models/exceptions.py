class MosaicError(Exception):
    """Base class for every error raised by the mosaic field library."""


class DomainError(MosaicError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InconsistentProbabilitiesError(DomainError):
    """Hit probabilities that no random set law can produce."""


class ConfigurationError(MosaicError, ValueError):
    """Invalid or incompatible model configuration."""


class ParameterRangeError(ConfigurationError):
    """A catalog parameter outside its admissible range."""


class UnsupportedError(MosaicError, NotImplementedError):
    """A combination for which no closed form is available."""


class DegenerateModelError(MosaicError, ArithmeticError):
    """Zero variance or a vanishing normalisation."""


class BudgetError(MosaicError, ValueError):
    """A request beyond the size an exact computation can handle."""

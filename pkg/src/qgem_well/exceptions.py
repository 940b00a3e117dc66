class QgemError(Exception):
    """Base class of every error raised by qgem_well."""


class InvalidParameterError(QgemError, ValueError):
    pass


class InvalidRangeError(InvalidParameterError):
    pass


class QuadratureDomainError(InvalidParameterError):
    pass


class NormalizationError(InvalidParameterError):
    pass


class TableBoundsError(QgemError, IndexError):
    pass


class ConfigurationError(QgemError):
    pass


class NumericError(QgemError):
    """
        Raised when a numerical method fails to deliver a result within tolerance
    :param message:
        Human readable description
    :param sector:
        Exchange sector being solved, when applicable
    :param tolerance:
        Tolerance that was not met, when applicable
    """

    def __init__(self, message: str, sector: str | None = None, tolerance: float | None = None):
        context = []
        if sector is not None:
            context.append(f"sector={sector}")
        if tolerance is not None:
            context.append(f"tolerance={tolerance:g}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)
        self.sector = sector
        self.tolerance = tolerance


class IntegrationFailureError(NumericError):
    pass


class LabelingError(NumericError):
    pass

# Standard Library
import logging

# Third Party
import numpy as np
from pydantic import ValidationError
from scipy.sparse.linalg import ArpackNoConvergence
from tomlkit.exceptions import TOMLKitError

# First Party
from qgem_well.constants import EXIT_CONFIG_ERROR, EXIT_NUMERIC_FAILURE, EXIT_SUCCESS, EXIT_UNEXPECTED_FAILURE
from qgem_well.exceptions import ConfigurationError, NumericError, QgemError

logger = logging.getLogger("qgem.exceptions")

CONFIGURATION_ERRORS = (ConfigurationError, ValidationError, TOMLKitError, FileNotFoundError)
NUMERIC_ERRORS = (NumericError, np.linalg.LinAlgError, ArpackNoConvergence)


def exit_code_for(exc: BaseException | None) -> int:
    """
        Map an exception to the process exit status and log it
    :param exc:
        Exception that ended a subcommand, None on success
    :return: 0 success, 1 configuration error, 2 numeric failure, 3 anything else (a bug)
    """
    if exc is None:
        return EXIT_SUCCESS
    if isinstance(exc, NUMERIC_ERRORS):
        log_error(exc, "numeric failure")
        return EXIT_NUMERIC_FAILURE
    if isinstance(exc, (*CONFIGURATION_ERRORS, QgemError, ValueError)):
        log_warning(exc, "configuration error")
        return EXIT_CONFIG_ERROR
    log_error(exc, "unexpected failure")
    return EXIT_UNEXPECTED_FAILURE


def log_error(exc: BaseException, category: str):
    """
        Send error details to the log
    :param exc:
        Exception that ended the run
    :param category:
        Short description of the failure class
    """
    logger.error(f"{category}: {type(exc).__name__}: {exc}")


def log_warning(exc: BaseException, category: str):
    exc_str = f"{exc}".replace("\n", " ").replace("   ", " ")
    logger.warning(f"{category}: {type(exc).__name__}: {exc_str}")

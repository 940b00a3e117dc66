# Standard Library
from unittest.mock import patch

# Third Party
import numpy as np
import pytest
from pydantic import ValidationError

# First Party
from qgem_well.constants import EXIT_CONFIG_ERROR, EXIT_NUMERIC_FAILURE, EXIT_SUCCESS, EXIT_UNEXPECTED_FAILURE
from qgem_well.exceptions import (
    ConfigurationError,
    IntegrationFailureError,
    InvalidRangeError,
    NumericError,
    TableBoundsError,
)
from qgem_well.helpers.exception_handler import exit_code_for
from qgem_well.schema.physical_params import PhysicalParams


def _validation_error() -> ValidationError:
    try:
        PhysicalParams(mass=-1.0, well_width=1.0, separation=1.0)
    except ValidationError as error:
        return error
    raise AssertionError("negative mass was accepted")


def test_exit_code_success():
    assert exit_code_for(None) == EXIT_SUCCESS


@pytest.mark.parametrize(
    "error",
    [
        ConfigurationError("unknown key"),
        InvalidRangeError("deltas must descend"),
        TableBoundsError("outside the table"),
        FileNotFoundError("missing.toml"),
        ValueError("bad value"),
    ],
)
def test_exit_code_configuration_errors(error):
    assert exit_code_for(error) == EXIT_CONFIG_ERROR


def test_exit_code_validation_error():
    assert exit_code_for(_validation_error()) == EXIT_CONFIG_ERROR


@pytest.mark.parametrize(
    "error",
    [
        NumericError("no convergence", sector="symmetric", tolerance=1e-8),
        IntegrationFailureError("trace drifted"),
        np.linalg.LinAlgError("singular"),
    ],
)
def test_exit_code_numeric_errors(error):
    assert exit_code_for(error) == EXIT_NUMERIC_FAILURE


@pytest.mark.parametrize("error", [RuntimeError("unexpected"), KeyError("level"), TypeError("not a number")])
def test_exit_code_unexpected_errors(error):
    assert exit_code_for(error) == EXIT_UNEXPECTED_FAILURE


@patch("logging.Logger.error")
def test_unexpected_failure_is_logged_as_error(error_logger):
    exit_code_for(KeyError("level"))
    error_logger.assert_called_once_with("unexpected failure: KeyError: 'level'")


def test_numeric_error_message_carries_context():
    error = NumericError("eigensolver failed", sector="antisymmetric", tolerance=1e-12)
    assert "sector=antisymmetric" in str(error)
    assert "tolerance=1e-12" in str(error)
    assert error.sector == "antisymmetric"


@patch("logging.Logger.error")
def test_numeric_failure_is_logged_as_error(error_logger):
    exit_code_for(NumericError("no convergence"))
    error_logger.assert_called_once_with("numeric failure: NumericError: no convergence")


@patch("logging.Logger.warning")
def test_configuration_error_is_logged_as_warning(warning_logger):
    exit_code_for(ConfigurationError("unknown\nkey"))
    warning_logger.assert_called_once_with("configuration error: ConfigurationError: unknown key")

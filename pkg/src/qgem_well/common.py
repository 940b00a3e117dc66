# Standard Library
import logging.config
import sysconfig
from os import path

# First Party
from qgem_well.constants import LOGGING_FILE

logger = logging.getLogger(__name__)


def get_logging_settings_path() -> str:
    if path.isfile(sysconfig.get_path("purelib") + "/qgem_well/static/" + LOGGING_FILE):
        base_dir = sysconfig.get_path("purelib") + "/qgem_well"
    else:
        base_dir = path.dirname(__file__)

    return base_dir + "/static/" + LOGGING_FILE


def initialise_logs(log_file_path: str, debug: bool = True) -> logging.Logger:
    """
        Configure the root logger from the packaged logging.ini
    :param log_file_path:
        File the rotating handler writes to
    :param debug:
        DEBUG level when true, INFO otherwise
    :return: the configured root logger
    """
    logging_ini_file = get_logging_settings_path()
    logging.config.fileConfig(
        logging_ini_file,
        defaults={"log_file_path": log_file_path},
        disable_existing_loggers=False,
    )
    logger_config = logging.getLogger("root")
    if debug:
        logger_config.setLevel(logging.DEBUG)
    else:
        logger_config.setLevel(logging.INFO)
    return logger_config

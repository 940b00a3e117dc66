# Standard Library
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

# Third Party
import tomlkit
from pydantic import BaseModel
from tomlkit.exceptions import TOMLKitError
from tomlkit.toml_document import TOMLDocument

# First Party
from qgem_well.constants import FULL_SCALE_NMAX, FULL_SCALE_SPECTRUM_LEVELS, LOG_FILE_QGEM
from qgem_well.exceptions import ConfigurationError
from qgem_well.helpers.csv_writer import is_result_file, read_header_config
from qgem_well.helpers.dict_remapper import flatten_to_dotted_keys, get_value_from_nested_dictionary, nest_dotted_keys
from qgem_well.helpers.environment_wrapper import EnvironmentVariable, validate_environment
from qgem_well.schema.run_config import RunConfig
from qgem_well.schema.sub_command import SubCommand

logger = logging.getLogger(__name__)

QGEM_CACHE_DIR = "QGEM_CACHE_DIR"
QGEM_OUT_DIR = "QGEM_OUT_DIR"
QGEM_WORKERS = "QGEM_WORKERS"
QGEM_LOG_FILE = "QGEM_LOG_FILE"
QGEM_DEBUG_MODE = "QGEM_DEBUG_MODE"

QGEM_ENV_VARS = [
    EnvironmentVariable(
        QGEM_CACHE_DIR,
        "Directory holding cached J tables, overridden by the config file and --cache",
        required=False,
        default="",
    ),
    EnvironmentVariable(
        QGEM_OUT_DIR,
        "Directory receiving result CSV files, overridden by the config file and --out",
        required=False,
        default="",
    ),
    EnvironmentVariable(
        QGEM_WORKERS,
        "Worker threads for table construction and sweeps, overridden by the config file and --workers",
        required=False,
        default="",
    ),
    EnvironmentVariable(
        QGEM_LOG_FILE,
        "Log file written next to the console output",
        required=False,
        default=LOG_FILE_QGEM,
    ),
    EnvironmentVariable(
        QGEM_DEBUG_MODE,
        "Set to true/1 to enable debug logging",
        required=False,
        default="0",
    ),
]

ENV_CONFIG_KEYS = {
    QGEM_CACHE_DIR: "output.cache_dir",
    QGEM_OUT_DIR: "output.out_dir",
    QGEM_WORKERS: "output.workers",
}

FULL_SCALE_OVERRIDES = {
    "scaled.nmax": FULL_SCALE_NMAX,
    "sweep.spectrum_levels": FULL_SCALE_SPECTRUM_LEVELS,
    "sweep.nmaxes": [20, 40, 60, 80, 100],
}

SUBCOMMAND_KEY = "run.subcommand"


def _section_keys(model: type[BaseModel], prefix: str = "") -> list[str]:
    keys = []
    for name, field in model.model_fields.items():
        dotted = f"{prefix}.{name}" if prefix else name
        annotation = field.annotation
        if isinstance(annotation, type) and issubclass(annotation, BaseModel):
            keys.extend(_section_keys(annotation, dotted))
        else:
            keys.append(dotted)
    return keys


def valid_config_keys() -> list[str]:
    return sorted(_section_keys(RunConfig))


def check_keys(flat: Mapping[str, Any], source: str):
    unknown = sorted(set(flat) - set(valid_config_keys()))
    if unknown:
        raise ConfigurationError(
            f"unknown configuration key(s) {', '.join(unknown)} in {source}; "
            f"valid keys are: {', '.join(valid_config_keys())}"
        )


def read_config_file(config_path: str | Path) -> tuple[dict[str, Any], SubCommand | None]:
    """
        Read a TOML config file, or the header block of a result CSV written by this tool
    :param config_path:
        Path of the file
    :return: (flat dotted-key mapping, subcommand recorded in the file if any)
    """
    text = Path(config_path).read_text(encoding="utf-8")
    if is_result_file(text):
        try:
            text = read_header_config(text)
        except ValueError as error:
            raise ConfigurationError(f"{config_path}: {error}") from error
    document = tomlkit.parse(text).unwrap()
    flat = flatten_to_dotted_keys(document)
    recorded = flat.pop(SUBCOMMAND_KEY, None)
    check_keys(flat, str(config_path))
    subcommand = None
    if recorded is not None:
        try:
            subcommand = SubCommand(recorded)
        except ValueError as error:
            raise ConfigurationError(f"{config_path}: unknown subcommand {recorded!r}") from error
    return flat, subcommand


def parse_override(assignment: str) -> tuple[str, Any]:
    """
        Parse one --set key=value; the value is read as a TOML value and kept as text otherwise
    """
    key, separator, raw = assignment.partition("=")
    key, raw = key.strip(), raw.strip()
    if not separator or not key:
        raise ConfigurationError(f"override {assignment!r} is not of the form section.key=value")
    try:
        value = tomlkit.parse(f"value = {raw}").unwrap()["value"]
    except TOMLKitError:
        value = raw
    return key, value


def load_config(
    config_path: str | Path | None = None,
    overrides: Sequence[str] = (),
    flags: Mapping[str, Any] | None = None,
) -> tuple[RunConfig, SubCommand | None]:
    """
        Resolve the run configuration. Precedence, lowest first: model defaults, environment
        variables, config file, --set overrides, dedicated flags; --paper-scale is applied last.
    :param config_path:
        TOML file or previously written result CSV
    :param overrides:
        key=value strings
    :param flags:
        Dotted keys set by dedicated command-line flags, None values are ignored
    :return: (RunConfig, subcommand recorded in the config file if any)
    """
    env_variables = validate_environment(QGEM_ENV_VARS)
    flat: dict[str, Any] = {}
    for env_key, config_key in ENV_CONFIG_KEYS.items():
        if env_variables.get(env_key):
            flat[config_key] = env_variables[env_key]

    subcommand = None
    if config_path is not None:
        file_values, subcommand = read_config_file(config_path)
        flat.update(file_values)
        logger.debug(f"Read {len(file_values)} configuration values from {config_path}")

    override_values = dict(parse_override(assignment) for assignment in overrides)
    check_keys(override_values, "--set")
    flat.update(override_values)
    flat.update({key: value for key, value in (flags or {}).items() if value is not None})

    nested = nest_dotted_keys(flat)
    if get_value_from_nested_dictionary(nested, "output", "paper_scale") is True:
        nested = nest_dotted_keys({**flat, **FULL_SCALE_OVERRIDES})
    return RunConfig.model_validate(nested), subcommand


def config_document(config: RunConfig, subcommand: SubCommand) -> TOMLDocument:
    """The resolved configuration as a TOML document, ready for a result header."""
    doc = tomlkit.document()
    run_table = tomlkit.table()
    run_table.add("subcommand", subcommand.value)
    doc.add("run", run_table)
    for section, values in config.model_dump(mode="json", exclude_none=True).items():
        section_table = tomlkit.table()
        for key, value in values.items():
            section_table.add(key, value)
        doc.add(section, section_table)
    return doc

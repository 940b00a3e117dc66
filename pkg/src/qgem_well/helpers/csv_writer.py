# Standard Library
import csv
import logging
from collections.abc import Iterable, Sequence
from datetime import UTC, datetime
from pathlib import Path

# Third Party
import tomlkit
from tomlkit.toml_document import TOMLDocument

# First Party
from qgem_well.constants import CSV_SCHEMA_VERSION, TIMESTAMP_PREFIX
from qgem_well.schema.sweep_rows import CsvRow

logger = logging.getLogger(__name__)

BANNER_PREFIX = "# qgem-well "
CAVEAT_PREFIX = "# caveat: "
NOTE_PREFIX = "# note: "
CONFIG_MARKER = "# --- resolved configuration ---"


def create_header_lines(
    kind: str,
    config_document: TOMLDocument,
    caveats: Sequence[str] = (),
    generated_at: datetime | None = None,
    notes: Sequence[str] = (),
) -> list[str]:
    """
        Header block of a result file: banner, timestamp, caveats and the resolved config as TOML
    :param kind:
        Result kind, usually the subcommand name
    :param config_document:
        Resolved configuration, including run.subcommand
    :param caveats:
        Free text validity notes
    :param notes:
        Derived summaries such as fitted coefficients
    :param generated_at:
        Timestamp, now when omitted; the only line that differs between identical runs
    :return: header lines without trailing newlines
    """
    generated_at = generated_at or datetime.now(UTC)
    lines = [
        f"{BANNER_PREFIX}{kind} schema={CSV_SCHEMA_VERSION}",
        f"{TIMESTAMP_PREFIX}{generated_at.isoformat(timespec='seconds')}",
    ]
    lines.extend(f"{CAVEAT_PREFIX}{caveat}" for caveat in caveats)
    lines.extend(f"{NOTE_PREFIX}{note}" for note in notes)
    lines.append(CONFIG_MARKER)
    for line in tomlkit.dumps(config_document).splitlines():
        lines.append(f"# {line}" if line else "#")
    return lines


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(
    path: Path,
    kind: str,
    row_model: type[CsvRow],
    rows: Iterable[CsvRow],
    config_document: TOMLDocument,
    caveats: Sequence[str] = (),
    generated_at: datetime | None = None,
    notes: Sequence[str] = (),
) -> Path:
    """
        Write rows below a self-describing header; columns follow the row model's field order
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = create_header_lines(kind, config_document, caveats, generated_at, notes)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        for line in header:
            csv_file.write(line + "\n")
        writer = csv.DictWriter(csv_file, fieldnames=row_model.columns(), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _format_value(value) for key, value in row.as_record().items()})
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return path


def write_records(
    path: Path,
    kind: str,
    columns: Sequence[str],
    records: Iterable[Sequence],
    config_document: TOMLDocument,
    generated_at: datetime | None = None,
    notes: Sequence[str] = (),
) -> Path:
    """Same layout as write_csv for bulk numeric records that have no row model."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = create_header_lines(kind, config_document, generated_at=generated_at, notes=notes)
    with open(path, "w", newline="", encoding="utf-8") as csv_file:
        for line in header:
            csv_file.write(line + "\n")
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            writer.writerow([_format_value(value) for value in record])
    logger.info(f"Wrote {path}")
    return path


def is_result_file(text: str) -> bool:
    return text.startswith(BANNER_PREFIX)


def read_header_config(text: str) -> str:
    """
        Recover the TOML configuration block from the header of a result file
    """
    if not is_result_file(text):
        raise ValueError("not a qgem-well result file")
    config_lines = []
    in_config = False
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        if line == CONFIG_MARKER:
            in_config = True
        elif in_config:
            config_lines.append(line[2:] if line.startswith("# ") else line[1:])
    if not in_config:
        raise ValueError("result file header carries no configuration block")
    return "\n".join(config_lines) + "\n"


def read_csv_rows(path: Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as csv_file:
        body = [line for line in csv_file if not line.startswith("#")]
    return list(csv.DictReader(body))

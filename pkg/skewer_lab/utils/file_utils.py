"""Versioned CSV and JSON-lines output, and the text form of interval partitions."""

import csv
import json
import logging
import os
import sys
from typing import IO, Iterable, List, Optional, Sequence, Tuple

from skewer_lab.partitions import IntervalPartition, PartitionError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

TYPE2_COLUMNS = (
    "path_id",
    "y",
    "m1",
    "m2",
    "alpha_mass",
    "n_blocks",
    "total_diversity",
    "clock_index",
    "J",
)
DEPOISSON_COLUMNS = ("path_id", "u", "x1", "x2", "x3", "n_blocks", "jump_flag")
CHAIN_COLUMNS = ("path_id", "t", "tables")
PDIP_COLUMNS = ("sample_id", "block", "mass", "div_left", "total_diversity")
DIRICHLET_COLUMNS = ("sample_id", "x1", "x2", "x3")
SCAFFOLDING_COLUMNS = ("path_id", "time", "level_before", "level_after", "spindle")
SPINDLE_COLUMNS = ("path_id", "spindle", "level", "mass")


def schema_header(schema: str) -> str:
    return f"# skewer-lab schema={schema} version={SCHEMA_VERSION}"


def write_csv(
    path: Optional[str], schema: str, columns: Sequence[str], rows: Iterable[Sequence]
) -> int:
    """Write rows under a versioned header comment; ``path=None`` or ``-`` writes to stdout.

    Returns the number of rows written.
    """
    if path in (None, "-"):
        return _write_rows(sys.stdout, schema, columns, rows)
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            count = _write_rows(handle, schema, columns, rows)
    except OSError as e:
        logger.error("Failed to write %s: %s", path, e)
        raise
    logger.info("Wrote %d %s rows to %s", count, schema, path)
    return count


def _write_rows(handle: IO[str], schema: str, columns: Sequence[str], rows: Iterable[Sequence]):
    handle.write(schema_header(schema) + "\n")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(columns)
    count = 0
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"Row has {len(row)} fields, schema {schema} has {len(columns)}")
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        count += 1
    return count


def read_csv(path: str) -> Tuple[str, int, List[str], List[List[str]]]:
    """Schema name, version, column names and raw rows of a file written by :func:`write_csv`."""
    with open(path, newline="", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if not header.startswith("# skewer-lab schema="):
            raise ValueError(f"{path} has no skewer-lab schema header")
        fields = dict(part.split("=", 1) for part in header[2:].split()[1:])
        reader = csv.reader(handle)
        columns = next(reader)
        return fields["schema"], int(fields["version"]), columns, [row for row in reader]


def write_json_lines(handle: IO[str], objects: Iterable[dict]) -> int:
    count = 0
    for obj in objects:
        handle.write(json.dumps(obj, sort_keys=True) + "\n")
        count += 1
    return count


def partition_to_string(beta: IntervalPartition) -> str:
    """``m1,m2,...`` or, when annotated, ``m1:d1,m2:d2,...|D``."""
    if not beta.annotated:
        return ",".join(repr(m) for m in beta.masses)
    blocks = ",".join(f"{m!r}:{d!r}" for m, d in zip(beta.masses, beta.div_left))
    return f"{blocks}|{beta.diversity!r}"


def partition_from_string(text: str) -> IntervalPartition:
    """Inverse of :func:`partition_to_string`."""
    text = text.strip()
    try:
        if "|" not in text:
            return IntervalPartition(tuple(float(m) for m in text.split(",") if m.strip()))
        blocks, total = text.split("|", 1)
        pairs = [block.split(":") for block in blocks.split(",") if block.strip()]
        if any(len(pair) != 2 for pair in pairs):
            raise ValueError("annotated blocks must look like mass:diversity")
        return IntervalPartition(
            tuple(float(m) for m, _ in pairs),
            tuple(float(d) for _, d in pairs),
            float(total),
        )
    except ValueError as e:
        if isinstance(e, PartitionError):
            raise
        raise PartitionError(f"Cannot parse interval partition {text!r}: {e}") from e

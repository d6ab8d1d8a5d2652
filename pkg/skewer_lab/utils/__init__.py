"""Configuration and file helpers for skewer-lab."""

from .config import ConfigError, dump_config, load_config_file, parse_config_text, worker_count
from .file_utils import (
    partition_from_string,
    partition_to_string,
    read_csv,
    schema_header,
    write_csv,
    write_json_lines,
)

__all__ = [
    "ConfigError",
    "dump_config",
    "load_config_file",
    "parse_config_text",
    "worker_count",
    "partition_from_string",
    "partition_to_string",
    "read_csv",
    "schema_header",
    "write_csv",
    "write_json_lines",
]

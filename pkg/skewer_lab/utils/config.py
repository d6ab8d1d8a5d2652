"""Flat ``key=value`` configuration files."""

import logging
import os
from typing import Dict, Mapping

logger = logging.getLogger(__name__)

WORKERS_ENV = "SKEWER_LAB_WORKERS"


class ConfigError(ValueError):
    """Invalid configuration file or value."""


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, blank lines are ignored."""
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        values[key.replace("-", "_")] = value
    return values


def load_config_file(path: str) -> Dict[str, str]:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    values = parse_config_text(text, path)
    logger.debug("Loaded %d settings from %s", len(values), path)
    return values


def dump_config(values: Mapping[str, str], path: str) -> None:
    """Write ``values`` in the format read by :func:`load_config_file`, keys sorted."""
    lines = [f"{key} = {values[key]}" for key in sorted(values)]
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as e:
        raise ConfigError(f"Cannot write config file {path}: {e}") from e


def worker_count() -> int:
    """Worker processes from ``SKEWER_LAB_WORKERS``, default the CPU count."""
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from e
    if count < 1:
        raise ConfigError(f"{WORKERS_ENV} must be at least 1, got {count}")
    return count

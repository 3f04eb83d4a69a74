"""Process-level settings read from the environment.

Each HYBSEL_* variable is parsed on its own, so a malformed value only
fails the code path that reads it.
"""
import logging
import os
from typing import Mapping, Optional

from pydantic import BaseModel, Field, field_validator

from hybsel.errors import InputError

DEFAULT_MAX_INPUT_BYTES = 64 * 1024 * 1024
DEFAULT_LOG_LEVEL = "WARNING"

SHORTCUTS_VAR = "HYBSEL_DISABLE_SHORTCUTS"
LOG_LEVEL_VAR = "HYBSEL_LOG_LEVEL"
MAX_INPUT_VAR = "HYBSEL_MAX_INPUT_BYTES"

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"", "0", "false", "no", "off"}
_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}


def _environ(environ: Optional[Mapping[str, str]]) -> Mapping[str, str]:
    return os.environ if environ is None else environ


def read_flag(name: str, environ: Optional[Mapping[str, str]] = None) -> bool:
    """Boolean variable; unset means False."""
    value = _environ(environ).get(name)
    if value is None:
        return False
    value = value.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise InputError(f"{name}={value!r} is not a boolean (use 1/0, true/false, yes/no, on/off)")


def read_max_input_bytes(environ: Optional[Mapping[str, str]] = None) -> int:
    """Input cap in bytes; unset means DEFAULT_MAX_INPUT_BYTES."""
    value = _environ(environ).get(MAX_INPUT_VAR)
    if not value:
        return DEFAULT_MAX_INPUT_BYTES
    try:
        limit = int(value)
    except ValueError:
        raise InputError(f"{MAX_INPUT_VAR}={value!r} is not a byte count") from None
    if limit < 1:
        raise InputError(f"{MAX_INPUT_VAR} must be at least 1")
    return limit


def read_log_level(environ: Optional[Mapping[str, str]] = None) -> str:
    value = _environ(environ).get(LOG_LEVEL_VAR)
    if not value:
        return DEFAULT_LOG_LEVEL
    level = value.strip().upper()
    if level not in _LEVELS:
        raise InputError(f"{LOG_LEVEL_VAR}={value!r} is not a log level")
    return level


class RuntimeSettings(BaseModel):
    """Switches that affect how structures behave once built."""

    disable_shortcuts: bool = Field(
        False, description="Force the general select path (no uniform/l=0 shortcuts)"
    )
    log_level: str = Field(DEFAULT_LOG_LEVEL, description="Log level for the hybsel logger")
    max_input_bytes: int = Field(
        DEFAULT_MAX_INPUT_BYTES, ge=1, description="Largest accepted input text"
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        if v.upper() not in _LEVELS:
            raise ValueError(f"unknown log level {v!r}")
        return v.upper()

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "RuntimeSettings":
        """Build settings from HYBSEL_* environment variables.

        Raises:
            InputError: a variable is set to a value that does not parse
        """
        return cls(
            disable_shortcuts=read_flag(SHORTCUTS_VAR, environ),
            log_level=read_log_level(environ),
            max_input_bytes=read_max_input_bytes(environ),
        )


def shortcuts_enabled() -> bool:
    return not read_flag(SHORTCUTS_VAR)


def configure_logging(level: Optional[str] = None) -> None:
    """Install a root handler for command-line use."""
    logging.basicConfig(
        level=(level or read_log_level()).upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

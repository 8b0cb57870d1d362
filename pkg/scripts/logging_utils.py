"""
Logging setup for the walk asymptotics pipeline.

Log records go to a rotating file and to stderr; stdout is reserved for the
result documents the command-line front end prints. Every record written by
the pipeline's handlers carries the subcommand and a short model fingerprint,
so one log file can hold many runs and still be grepped per model.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

from scripts.errors import WalkAsymptoticsError

LOG_MAX_BYTES = 10 * 1024 * 1024  # 10MB
LOG_BACKUP_COUNT = 5
DEFAULT_LOG_DIR = "logs"
DEFAULT_LOG_FILE = "walk_asymptotics.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(command)s %(model)s] %(message)s"
NO_CONTEXT = "-"
FINGERPRINT_CHARS = 12


class RunContextFilter(logging.Filter):
    """Stamp records with the running subcommand and the model being processed."""

    def __init__(self) -> None:
        super().__init__()
        self.command = NO_CONTEXT
        self.model = NO_CONTEXT

    def filter(self, record: logging.LogRecord) -> bool:
        record.command = self.command
        record.model = self.model
        return True


_run_context = RunContextFilter()

# Handlers installed by setup_logging; third-party handlers are left alone
_added_handlers: set[logging.Handler] = set()


def set_run_context(command: Optional[str] = None, model_fingerprint: Optional[str] = None) -> None:
    """
    Set the subcommand and model shown in subsequent records.

    Only the first 12 characters of the fingerprint are kept. None resets a field.
    """
    _run_context.command = command or NO_CONTEXT
    _run_context.model = model_fingerprint[:FINGERPRINT_CHARS] if model_fingerprint else NO_CONTEXT


def setup_logging(verbose: bool = False, log_file: Optional[str] = None, quiet: bool = False) -> None:
    """
    Configure the root logger for a pipeline run.

    Installs a rotating file handler (10MB, 5 backups) and a stderr handler,
    both stamped with the run context. Calling it again replaces only the
    handlers a previous call installed.

    Args:
        verbose: If True, log DEBUG records, otherwise INFO
        log_file: Path to the log file (default: 'logs/walk_asymptotics.log')
        quiet: If True, the stderr handler only shows warnings and errors
    """
    level = logging.DEBUG if verbose else logging.INFO
    formatter = logging.Formatter(LOG_FORMAT, defaults={"command": NO_CONTEXT, "model": NO_CONTEXT})
    root_logger = logging.getLogger()

    for handler in list(_added_handlers):
        if handler in root_logger.handlers:
            root_logger.removeHandler(handler)
        handler.close()
    _added_handlers.clear()

    if log_file is None:
        log_file = os.path.join(DEFAULT_LOG_DIR, DEFAULT_LOG_FILE)

    handlers: list[logging.Handler] = []
    try:
        log_dir = os.path.dirname(os.path.abspath(log_file))
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(log_file, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUP_COUNT)
        file_handler.setLevel(level)
        handlers.append(file_handler)
    except (OSError, IOError, PermissionError) as e:
        # No logger can report this yet
        print(f"Warning: Could not create log file '{log_file}': {e}", file=sys.stderr)
        print("Falling back to console-only logging.", file=sys.stderr)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING if quiet else level)
    handlers.append(console_handler)

    for handler in handlers:
        handler.setFormatter(formatter)
        handler.addFilter(_run_context)
        root_logger.addHandler(handler)
        _added_handlers.add(handler)
    root_logger.setLevel(level)

    logger = logging.getLogger(__name__)
    logger.debug(f"Logging initialized - Level: {logging.getLevelName(level)}, File: {log_file}, quiet: {quiet}")


def log_pipeline_error(logger: logging.Logger, error: WalkAsymptoticsError, hint: Optional[str] = None) -> int:
    """
    Log a pipeline error as ``[Code] message`` and return its exit code.

    ``hint`` is logged as a second record when the caller knows how to recover.
    """
    logger.error(f"[{error.code}] {error.message}")
    if hint:
        logger.error(hint)
    return error.exit_code


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for the specified module name.

    Args:
        name: Module name (typically __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)

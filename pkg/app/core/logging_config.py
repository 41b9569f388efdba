import logging
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Iterator, Optional

from app.core.config import settings

ENGINE_LOGGER = "engine"
DETAILED_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
SIMPLE_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# (file name, level, logger, backups); None as logger means the root logger
_FILE_SINKS = (
    ("app.log", logging.INFO, None, 5),
    ("engine_{day}.log", logging.DEBUG, ENGINE_LOGGER, 10),
    ("errors.log", logging.ERROR, None, 5),
)

_suite_run_id_ctx: ContextVar[Optional[str]] = ContextVar("suite_run_id", default=None)


def get_current_suite_run_id() -> Optional[str]:
    return _suite_run_id_ctx.get()


class _SuiteRunFilter(logging.Filter):
    """Passes only records emitted while the given suite run is current."""

    def __init__(self, suite_run_id: str):
        super().__init__()
        self.suite_run_id = suite_run_id

    def filter(self, record: logging.LogRecord) -> bool:
        return get_current_suite_run_id() == self.suite_run_id


def get_logs_dir() -> Path:
    log_dir = Path(__file__).resolve().parents[2] / "logs"
    log_dir.mkdir(exist_ok=True)
    return log_dir


def _rotating(path: Path, level: int, backups: int, max_bytes: int = 10_000_000) -> RotatingFileHandler:
    handler = RotatingFileHandler(path, maxBytes=max_bytes, backupCount=backups)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(DETAILED_FORMAT, datefmt=DATE_FORMAT))
    return handler


def engine_log(message: str, level: int = logging.INFO) -> None:
    """Log on the engine logger, prefixed with the current suite run id if any."""
    run_id = get_current_suite_run_id()
    prefix = f"[run:{run_id}] " if run_id else ""
    logging.getLogger(ENGINE_LOGGER).log(level, "%s%s", prefix, message)


@contextmanager
def suite_run_logging(suite_run_id: str) -> Iterator[Optional[Path]]:
    """
    Make ``suite_run_id`` current for the block. With file logging on, engine
    records of this run also go to logs/runs/suite_<id>.log, whose path is
    yielded (None otherwise). Worker threads started with asyncio.to_thread
    inherit the run id.
    """
    token = _suite_run_id_ctx.set(suite_run_id)
    engine_logger = logging.getLogger(ENGINE_LOGGER)
    handler = None
    run_log_path = None
    if settings.log_to_files:
        runs_dir = get_logs_dir() / "runs"
        runs_dir.mkdir(exist_ok=True)
        run_log_path = runs_dir / f"suite_{suite_run_id}.log"
        handler = _rotating(run_log_path, logging.DEBUG, backups=2, max_bytes=5_000_000)
        handler.addFilter(_SuiteRunFilter(suite_run_id))
        engine_logger.addHandler(handler)
    try:
        yield run_log_path
    finally:
        if handler is not None:
            engine_logger.removeHandler(handler)
            handler.close()
        _suite_run_id_ctx.reset(token)


def setup_logging(to_files: Optional[bool] = None) -> logging.Logger:
    """
    Console on stderr (stdout carries the JSON result), plus the rotating
    files of _FILE_SINKS under logs/ when file logging is on.
    """
    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    write_files = settings.log_to_files if to_files is None else to_files

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    console.setFormatter(logging.Formatter(SIMPLE_FORMAT, datefmt=DATE_FORMAT))
    root_logger.addHandler(console)

    logging.getLogger(ENGINE_LOGGER).setLevel(logging.DEBUG)
    logging.getLogger("sympy").setLevel(logging.WARNING)
    if not write_files:
        return root_logger

    log_dir = get_logs_dir()
    day = datetime.now().strftime("%Y%m%d")
    for name, sink_level, logger_name, backups in _FILE_SINKS:
        logging.getLogger(logger_name).addHandler(
            _rotating(log_dir / name.format(day=day), sink_level, backups)
        )

    logging.info("Logging configured, files in %s", log_dir)
    return root_logger

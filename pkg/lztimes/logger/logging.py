"""structlog setup for lztimes.

Every module logs through ``get_logger(__name__, component=...)``. Events at
WARNING and above are also kept in a bounded in-memory buffer, so a
``validate`` run can attach the integrator warnings it produced (guard-band
hits, probabilities drifting out of [0, 1], norm drift) to its report.
"""

from __future__ import annotations

import logging
import sys
import threading
from collections import Counter, deque
from datetime import datetime, timezone
from typing import Any, Optional, TextIO

import structlog

_META_KEYS = frozenset({"timestamp", "level", "event", "logger", "_record", "_from_structlog"})
_KEPT_LEVELS = frozenset({"warning", "error", "critical"})


class DiagnosticsBuffer:
    """Thread-safe ring buffer of warning-level events."""

    def __init__(self, maxlen: int = 200) -> None:
        self._entries: deque[dict[str, Any]] = deque(maxlen=maxlen)
        self._lock = threading.Lock()

    def record(self, level: str, event_dict: dict[str, Any]) -> None:
        entry = {
            "timestamp": event_dict.get("timestamp") or datetime.now(timezone.utc).isoformat(),
            "level": level,
            "event": str(event_dict.get("event", "")),
            "logger": event_dict.get("logger", ""),
        }
        entry.update((k, v) for k, v in event_dict.items() if k not in _META_KEYS)
        with self._lock:
            self._entries.append(entry)

    def snapshot(self, last_n: Optional[int] = None) -> list[dict[str, Any]]:
        with self._lock:
            items = list(self._entries)
        return items if last_n is None else items[-last_n:]

    def counts(self) -> dict[str, int]:
        with self._lock:
            return dict(Counter(entry["event"] for entry in self._entries))

    def clear(self) -> int:
        with self._lock:
            n = len(self._entries)
            self._entries.clear()
        return n


_diagnostics = DiagnosticsBuffer()


def _cache_diagnostics(
    logger: structlog.types.WrappedLogger,
    method_name: str,
    event_dict: dict[str, Any],
) -> dict[str, Any]:
    """structlog processor feeding the diagnostics buffer."""
    level = str(event_dict.get("level", method_name)).lower()
    if level in _KEPT_LEVELS:
        _diagnostics.record(level, event_dict)
    return event_dict


def get_cached_diagnostics(last_n: Optional[int] = None) -> list[dict[str, Any]]:
    """Buffered warnings, oldest first; only the newest *last_n* if given."""
    return _diagnostics.snapshot(last_n)


def diagnostic_counts() -> dict[str, int]:
    """How often each buffered event name occurred."""
    return _diagnostics.counts()


def clear_cached_diagnostics() -> int:
    return _diagnostics.clear()


def _stderr_logger(*args: Any) -> structlog.PrintLogger:
    return structlog.PrintLogger(sys.stderr)


def _default_to_stderr() -> None:
    """Keep library logs off stdout until ``configure_logging`` runs."""
    if not structlog.is_configured():
        structlog.configure(logger_factory=_stderr_logger)


_default_to_stderr()

_configured = False


def configure_logging(
    *,
    json_output: bool = False,
    log_level: str = "WARNING",
    stream: Optional[TextIO] = None,
    force: bool = False,
) -> bool:
    """Route structlog and stdlib logging to *stream* (stderr by default).

    Runs once per process unless *force* is set; returns whether it changed
    anything. numpy/scipy ``RuntimeWarning``s are captured into the same
    pipeline, so they reach the diagnostics buffer too.
    """
    global _configured
    if _configured and not force:
        return False
    _configured = True
    out = stream if stream is not None else sys.stderr

    pre_chain: list[structlog.types.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
        _cache_diagnostics,
    ]
    renderer: structlog.types.Processor
    if json_output:
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=out.isatty())

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            *pre_chain,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    handler = logging.StreamHandler(out)
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            foreign_pre_chain=pre_chain,
            processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, renderer],
        )
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, log_level.upper(), logging.WARNING))
    logging.captureWarnings(True)
    return True


def get_logger(name: Optional[str] = None, **initial_binds: Any) -> structlog.stdlib.BoundLogger:
    """Lazy bound logger; picks up ``configure_logging`` even if created first."""
    return structlog.get_logger(name, **initial_binds)

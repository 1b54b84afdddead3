from __future__ import annotations

import io
import json
import logging

import structlog

from lztimes.logger import (
    DiagnosticsBuffer,
    clear_cached_diagnostics,
    configure_logging,
    diagnostic_counts,
    get_cached_diagnostics,
    get_logger,
)
from lztimes.logger.logging import _cache_diagnostics, _default_to_stderr


def _event(level: str, event: str, **extra) -> dict:
    return {"level": level, "event": event, "logger": "lztimes.test", **extra}


def test_warnings_and_errors_are_cached() -> None:
    _cache_diagnostics(None, "warning", _event("warning", "theta_guard_reached", tau=50.0))
    _cache_diagnostics(None, "error", _event("error", "integration_failed"))
    cached = get_cached_diagnostics()
    assert [entry["event"] for entry in cached] == ["theta_guard_reached", "integration_failed"]
    assert cached[0]["tau"] == 50.0
    assert "timestamp" in cached[0]


def test_info_and_debug_are_not_cached() -> None:
    _cache_diagnostics(None, "info", _event("info", "check_finished"))
    _cache_diagnostics(None, "debug", _event("debug", "sweep_progress"))
    assert get_cached_diagnostics() == []


def test_processor_passes_the_event_through() -> None:
    event = _event("warning", "probability_out_of_bounds")
    assert _cache_diagnostics(None, "warning", event) is event


def test_last_n_and_clear() -> None:
    for i in range(5):
        _cache_diagnostics(None, "warning", _event("warning", f"w{i}"))
    assert [e["event"] for e in get_cached_diagnostics(last_n=2)] == ["w3", "w4"]
    assert clear_cached_diagnostics() == 5
    assert get_cached_diagnostics() == []


def test_get_logger_binds_initial_values() -> None:
    log = get_logger("lztimes.test", component="engine")
    assert log is not None
    bound = log.bind(omega=1.0)
    assert bound is not None


def test_counts_by_event_name() -> None:
    for event in ("theta_guard_reached", "norm_drift", "theta_guard_reached"):
        _cache_diagnostics(None, "warning", _event("warning", event))
    assert diagnostic_counts() == {"theta_guard_reached": 2, "norm_drift": 1}


def test_buffer_keeps_only_the_newest_entries() -> None:
    buffer = DiagnosticsBuffer(maxlen=3)
    for i in range(5):
        buffer.record("warning", {"event": f"w{i}", "omega": float(i)})
    assert [e["event"] for e in buffer.snapshot()] == ["w2", "w3", "w4"]
    assert buffer.snapshot()[0]["omega"] == 2.0
    assert buffer.clear() == 3


def test_configure_logging_renders_json_to_the_given_stream() -> None:
    root = logging.getLogger()
    saved = (list(root.handlers), root.level)
    out = io.StringIO()
    try:
        assert configure_logging(json_output=True, log_level="INFO", stream=out, force=True)
        assert not configure_logging(json_output=False)
        get_logger("lztimes.test", component="engine").warning("theta_guard_reached", tau=25.0)
        line = json.loads(out.getvalue().splitlines()[-1])
        assert line["event"] == "theta_guard_reached"
        assert line["component"] == "engine"
        assert line["level"] == "warning"
        assert get_cached_diagnostics()[-1]["tau"] == 25.0
    finally:
        logging.captureWarnings(False)
        root.handlers[:] = saved[0]
        root.setLevel(saved[1])


def test_logs_before_configuration_stay_off_stdout(capsys) -> None:
    saved = structlog.get_config()
    try:
        structlog.reset_defaults()
        _default_to_stderr()
        get_logger("lztimes.test").warning("norm_drift", drift=1e-9)
        captured = capsys.readouterr()
        assert "norm_drift" in captured.err
        assert captured.out == ""
    finally:
        structlog.configure(**saved)

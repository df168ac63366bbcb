"""
Tests for configuration and logging setup.

What it checks
--------------
1. Environment overrides and range validation
2. Logging: the xmodlink logger tree, optional log file, disabled logging
"""

import logging
import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import pytest

from xmodlink_config import XmodlinkConfig, get_logger, setup_logging


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("XMODLINK_WORKERS", "4")
    monkeypatch.setenv("XMODLINK_DEBUG_CHECKS", "yes")
    monkeypatch.setenv("LOG_LEVEL", "debug")
    config = XmodlinkConfig()
    assert config.workers == 4
    assert config.debug_checks is True
    assert config.log_level == "DEBUG"


def test_blank_variables_fall_back_to_defaults(monkeypatch):
    monkeypatch.setenv("XMODLINK_MAX_SYMMETRIC_DEGREE", "  ")
    assert XmodlinkConfig().max_symmetric_degree == 7


@pytest.mark.parametrize("name,value", [
    ("XMODLINK_WORKERS", "0"),
    ("XMODLINK_CLOSURE_CAP", "-1"),
    ("XMODLINK_RANDOM_AXIOM_SAMPLES", "many"),
    ("LOG_LEVEL", "LOUD"),
])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        XmodlinkConfig()


def test_module_loggers_share_the_tree():
    assert get_logger("xmodlink_pairs").name == "xmodlink.pairs"


def test_log_file(tmp_path):
    path = tmp_path / "logs" / "xmodlink.log"
    root = setup_logging(XmodlinkConfig(log_level="DEBUG", log_file_path=str(path)))
    get_logger("xmodlink_tables").info("🚀 hello")
    for handler in root.handlers:
        handler.flush()
    assert "🚀 hello" in path.read_text(encoding="utf-8")
    setup_logging(XmodlinkConfig(enable_logging=False))


def test_disabled_logging():
    root = setup_logging(XmodlinkConfig(enable_logging=False))
    assert len(root.handlers) == 1
    assert isinstance(root.handlers[0], logging.NullHandler)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

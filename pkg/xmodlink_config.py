"""
xmodlink Configuration
Environment-driven settings and logging setup shared by every xmodlink module
"""

import os
import logging
from dataclasses import dataclass, field
from typing import Optional
from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class XmodlinkConfig:
    """Thresholds, caps and logging options for xmodlink"""
    max_symmetric_degree: int = field(default_factory=lambda: _env_int('XMODLINK_MAX_SYMMETRIC_DEGREE', 7))
    closure_cap: int = field(default_factory=lambda: _env_int('XMODLINK_CLOSURE_CAP', 10000))
    exhaustive_axiom_order: int = field(default_factory=lambda: _env_int('XMODLINK_EXHAUSTIVE_AXIOM_ORDER', 256))
    random_axiom_samples: int = field(default_factory=lambda: _env_int('XMODLINK_RANDOM_AXIOM_SAMPLES', 20000))
    max_violations: int = field(default_factory=lambda: _env_int('XMODLINK_MAX_VIOLATIONS', 100))
    exhaustive_boundary_cap: int = field(default_factory=lambda: _env_int('XMODLINK_EXHAUSTIVE_BOUNDARY_CAP', 1000000))
    boundary_samples: int = field(default_factory=lambda: _env_int('XMODLINK_BOUNDARY_SAMPLES', 10000))
    random_seed: int = field(default_factory=lambda: _env_int('XMODLINK_RANDOM_SEED', 20240101))
    workers: int = field(default_factory=lambda: _env_int('XMODLINK_WORKERS', 1))
    debug_checks: bool = field(default_factory=lambda: _env_bool('XMODLINK_DEBUG_CHECKS', False))
    log_level: str = field(default_factory=lambda: os.getenv('LOG_LEVEL', 'INFO'))
    enable_logging: bool = field(default_factory=lambda: _env_bool('ENABLE_LOGGING', True))
    log_file_path: Optional[str] = field(default_factory=lambda: os.getenv('LOG_FILE_PATH') or None)

    def __post_init__(self):
        """Validate ranges"""
        if self.max_symmetric_degree < 1:
            raise ValueError("XMODLINK_MAX_SYMMETRIC_DEGREE must be at least 1")
        if self.closure_cap < 1:
            raise ValueError("XMODLINK_CLOSURE_CAP must be at least 1")
        if self.exhaustive_axiom_order < 1:
            raise ValueError("XMODLINK_EXHAUSTIVE_AXIOM_ORDER must be at least 1")
        if self.random_axiom_samples < 1:
            raise ValueError("XMODLINK_RANDOM_AXIOM_SAMPLES must be at least 1")
        if self.max_violations < 1:
            raise ValueError("XMODLINK_MAX_VIOLATIONS must be at least 1")
        if self.exhaustive_boundary_cap < 1:
            raise ValueError("XMODLINK_EXHAUSTIVE_BOUNDARY_CAP must be at least 1")
        if self.boundary_samples < 1:
            raise ValueError("XMODLINK_BOUNDARY_SAMPLES must be at least 1")
        if self.workers < 1:
            raise ValueError("XMODLINK_WORKERS must be at least 1")
        self.log_level = self.log_level.upper()
        if self.log_level not in VALID_LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {', '.join(VALID_LOG_LEVELS)}")


def resolve_config(config: Optional[XmodlinkConfig] = None) -> XmodlinkConfig:
    return config if config is not None else XmodlinkConfig()


def setup_logging(config: Optional[XmodlinkConfig] = None) -> logging.Logger:
    """
    Configure the xmodlink logger tree once per process

    Args:
        config: settings to use; read from the environment when omitted

    Returns:
        the root `xmodlink` logger
    """
    config = resolve_config(config)
    root = logging.getLogger("xmodlink")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.propagate = False

    if not config.enable_logging:
        root.addHandler(logging.NullHandler())
        return root

    root.setLevel(config.log_level)
    formatter = logging.Formatter(LOG_FORMAT)

    stream = logging.StreamHandler()
    stream.setFormatter(formatter)
    root.addHandler(stream)

    if config.log_file_path:
        directory = os.path.dirname(config.log_file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        file_handler = logging.FileHandler(config.log_file_path, encoding="utf-8")
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    root.debug("Logging configured at %s", config.log_level)
    return root


def get_logger(module_name: str) -> logging.Logger:
    """Module loggers hang off the `xmodlink` tree so setup_logging reaches them"""
    short = module_name.replace("xmodlink_", "")
    return logging.getLogger(f"xmodlink.{short}")

"""Configuration-driven command-line front end."""

from .config import RunConfig, parse_config
from .main import RunManifest, main, run

__all__ = ["RunConfig", "RunManifest", "main", "parse_config", "run"]

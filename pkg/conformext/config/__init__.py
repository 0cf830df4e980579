# conformext/config/__init__.py

from .config import Settings, settings
from .logging_setup import init_logging

__all__ = ["Settings", "settings", "init_logging"]

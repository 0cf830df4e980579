# conformext/crud/__init__.py

from .base import BaseRepository
from .reports import RunRepository, read_table, write_table

__all__ = ["BaseRepository", "RunRepository", "read_table", "write_table"]

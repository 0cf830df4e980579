# conformext/crud/base.py

import logging
import os
from typing import Generic, List, Optional, Type, TypeVar

from ..models.base import RecordModel

logger = logging.getLogger(__name__)

ModelType = TypeVar("ModelType", bound=RecordModel)


class BaseRepository(Generic[ModelType]):
    """Folder of JSON documents, one record per file named `<id>.json`"""

    def __init__(self, model: Type[ModelType], folder: str):
        self.model = model
        self.folder = folder

    def _path(self, id: str) -> str:
        return os.path.join(self.folder, f"{id}.json")

    # Create operations
    def create(self, obj: ModelType, id: str) -> str:
        """Write a record; same record, same bytes"""
        os.makedirs(self.folder, exist_ok=True)
        path = self._path(id)
        with open(path, "w") as fh:
            fh.write(obj.dump())
            fh.write("\n")
        logger.debug("wrote %s", path)
        return path

    # Read operations
    def get(self, id: str) -> Optional[ModelType]:
        path = self._path(id)
        if not os.path.isfile(path):
            return None
        return self.model.parse_file(path)

    def ids(self) -> List[str]:
        if not os.path.isdir(self.folder):
            return []
        return sorted(name[:-5] for name in os.listdir(self.folder) if name.endswith(".json"))

    def get_multi(self, skip: int = 0, limit: int = 100) -> List[ModelType]:
        """Records in id order"""
        return [self.get(id) for id in self.ids()[skip:skip + limit]]

    def count(self) -> int:
        return len(self.ids())

    # Delete operations
    def delete(self, id: str) -> bool:
        path = self._path(id)
        if os.path.isfile(path):
            os.remove(path)
            return True
        return False

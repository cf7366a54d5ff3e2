"""Registries of named factories addressable by string id.

Each subclass keeps its own table, so problems, right-hand sides and benchmark
problems are registered and looked up independently:

    >>> class ShapeRegistry(Registry):
    ...     kind = "shape"
    >>> @ShapeRegistry.register("unit")
    ... def unit():
    ...     return 1
    >>> ShapeRegistry.names(), ShapeRegistry.get("unit")()
    (['unit'], 1)
"""

import logging
from typing import Any, Callable, ClassVar, Dict, List

from src.core.exceptions import UnregisteredProblemError

logger = logging.getLogger(__name__)


class Registry:
    """Class-level table of named entries."""

    kind: ClassVar[str] = "entry"
    _entries: ClassVar[Dict[str, Any]] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls._entries = {}

    @classmethod
    def register(cls, name: str) -> Callable[[Any], Any]:
        """Register the decorated entry under name.

        Args:
            name: String id used by configs and the CLI
        """

        def wrapper(entry):
            if name in cls._entries:
                logger.warning("Overwriting registered %s: %s", cls.kind, name)
            cls._entries[name] = entry
            logger.debug("Registered %s: %s", cls.kind, name)
            return entry

        return wrapper

    @classmethod
    def get(cls, name: str) -> Any:
        """Look up an entry.

        Raises:
            UnregisteredProblemError: If nothing is registered under name
        """
        try:
            return cls._entries[name]
        except KeyError as e:
            raise UnregisteredProblemError(
                f"Unknown {cls.kind}: {name}",
                details={"name": name, "registered": cls.names()},
            ) from e

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls._entries)

    @classmethod
    def contains(cls, name: str) -> bool:
        return name in cls._entries

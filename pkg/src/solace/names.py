"""Fresh-name supply shared by the calculi and translations.

Generated names have the shape ``base#k``.  The ``#`` marker keeps them in a
namespace of their own; the supply also refuses any name it was told to avoid,
so round-tripped output that already contains ``#`` names stays collision-free.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable

MARKER = "#"


def base_of(name: str) -> str:
    return name.split(MARKER, 1)[0] or "n"


class NameSupply:
    def __init__(self, avoid: Iterable[str] = ()) -> None:
        self._taken: set[str] = set(avoid)
        self._counter = itertools.count()

    def avoid(self, names: Iterable[str]) -> None:
        self._taken.update(names)

    def fresh(self, base: str = "n") -> str:
        stem = base_of(base)
        while True:
            name = f"{stem}{MARKER}{next(self._counter)}"
            if name not in self._taken:
                self._taken.add(name)
                return name

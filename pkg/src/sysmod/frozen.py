"""A small immutable mapping with copy-on-write updates."""

from __future__ import annotations

import typing

K = typing.TypeVar("K")
V = typing.TypeVar("V")


class FrozenMap(typing.Mapping[K, V]):
    """An immutable mapping; ``set``/``update``/``remove`` return new maps."""

    __slots__ = ("_dict", "_hash")

    def __init__(self, *args, **kwargs):
        self._dict: dict[K, V] = dict(*args, **kwargs)
        self._hash: int | None = None

    def __getitem__(self, key: K) -> V:
        return self._dict[key]

    def __contains__(self, key: object) -> bool:
        return key in self._dict

    def __iter__(self) -> typing.Iterator[K]:
        return iter(self._dict)

    def __len__(self) -> int:
        return len(self._dict)

    def __repr__(self) -> str:
        return f"FrozenMap({self._dict!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FrozenMap):
            return self._dict == other._dict
        if isinstance(other, typing.Mapping):
            return self._dict == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._dict.items()))
        return self._hash

    def set(self, key: K, value: V) -> FrozenMap[K, V]:
        new = dict(self._dict)
        new[key] = value
        return FrozenMap(new)

    def update(self, other: typing.Mapping[K, V]) -> FrozenMap[K, V]:
        """Right-biased override, ``self (+) other``."""
        if not other:
            return self
        new = dict(self._dict)
        new.update(other)
        return FrozenMap(new)

    def remove(self, key: K) -> FrozenMap[K, V]:
        new = dict(self._dict)
        del new[key]
        return FrozenMap(new)


EMPTY: FrozenMap = FrozenMap()

"""The rank/select contract shared by every bitvector backend."""
from typing import Protocol, runtime_checkable


@runtime_checkable
class RankSelectSupport(Protocol):
    """What wavelet trees and PLCP queries need from a bitvector."""

    def __len__(self) -> int: ...

    def rank(self, c: int, i: int) -> int: ...

    def select(self, c: int, j: int) -> int: ...

    def access(self, i: int) -> int: ...

    def count(self, c: int) -> int: ...

    def size_in_bytes(self) -> int: ...

    def serialize(self) -> bytes: ...

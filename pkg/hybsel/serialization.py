"""Little-endian byte framing shared by all serializable structures."""
import struct
from typing import List

import numpy as np

from hybsel.errors import FormatError


class ByteWriter:
    """Accumulates little-endian scalars and length-prefixed arrays."""

    def __init__(self) -> None:
        self._parts: List[bytes] = []

    def raw(self, data: bytes) -> None:
        self._parts.append(bytes(data))

    def u8(self, value: int) -> None:
        self._parts.append(struct.pack("<B", value))

    def u16(self, value: int) -> None:
        self._parts.append(struct.pack("<H", value))

    def u32(self, value: int) -> None:
        self._parts.append(struct.pack("<I", value))

    def u64(self, value: int) -> None:
        self._parts.append(struct.pack("<Q", value))

    def u64_array(self, values: np.ndarray) -> None:
        """Write a u64 count followed by the words."""
        words = np.ascontiguousarray(values, dtype="<u8")
        self.u64(len(words))
        self._parts.append(words.tobytes())

    def blob(self, data: bytes) -> None:
        """Write a u64 byte count followed by the bytes."""
        self.u64(len(data))
        self._parts.append(bytes(data))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class ByteReader:
    """Reads what ByteWriter wrote; short reads raise FormatError."""

    def __init__(self, data: bytes, offset: int = 0) -> None:
        self._data = memoryview(bytes(data))
        self.offset = offset

    def _take(self, size: int) -> memoryview:
        end = self.offset + size
        if size < 0 or end > len(self._data):
            raise FormatError(
                f"truncated stream: need {size} bytes at offset {self.offset}, "
                f"have {len(self._data) - self.offset}"
            )
        chunk = self._data[self.offset:end]
        self.offset = end
        return chunk

    def raw(self, size: int) -> bytes:
        return bytes(self._take(size))

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def u64_array(self) -> np.ndarray:
        count = self.u64()
        if count > (len(self._data) - self.offset) // 8:
            raise FormatError(f"truncated stream: array of {count} words does not fit")
        return np.frombuffer(self._take(8 * count), dtype="<u8").astype(np.uint64)

    def blob(self) -> bytes:
        return self.raw(self.u64())

    def expect_magic(self, magic: bytes) -> None:
        found = self.raw(len(magic))
        if found != magic:
            raise FormatError(f"bad magic: expected {magic!r}, found {found!r}")

    def expect_version(self, version: int) -> None:
        found = self.u32()
        if found != version:
            raise FormatError(f"unsupported format version {found} (expected {version})")

    def at_end(self) -> bool:
        return self.offset == len(self._data)

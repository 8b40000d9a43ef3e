"""Keyed, splittable random streams.

A stream is identified by a root seed and a :class:`StreamKey`. The pair is
hashed into a 128-bit Philox key, so a stream never depends on how many draws
were taken from any other stream. Per-cell values of a mosaic field are drawn
from streams keyed by the cell's index set, which makes field evaluation
independent of the order in which points are queried.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from models.exceptions import DomainError

SEED_MAX = 2**64 - 1
_DOMAIN_TAG = b"mosaic-fields/stream/v1"

KeyPart = Union[int, str, bytes]


def _varint(n: int) -> bytes:
    """Unsigned LEB128 encoding."""
    if n < 0:
        raise DomainError(f"varint requires a non-negative integer, got {n}")
    out = bytearray()
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _encode_part(part: KeyPart) -> bytes:
    # tag byte + length prefix keeps the concatenation uniquely decodable
    if isinstance(part, bool):
        raise DomainError("boolean stream key parts are ambiguous; use int")
    if isinstance(part, (int, np.integer)):
        payload = _varint(int(part))
        return b"i" + _varint(len(payload)) + payload
    if isinstance(part, str):
        payload = part.encode("utf-8")
        return b"s" + _varint(len(payload)) + payload
    if isinstance(part, (bytes, bytearray)):
        return b"b" + _varint(len(part)) + bytes(part)
    raise DomainError(f"unsupported stream key part of type {type(part).__name__}")


def encode_index_set(indices: Iterable[int]) -> bytes:
    """Canonical encoding of an index set: sorted, varint-coded, length-prefixed."""
    items = sorted({int(i) for i in indices})
    return b"I" + _varint(len(items)) + b"".join(_varint(i) for i in items)


@dataclass(frozen=True)
class StreamKey:
    data: bytes = b""

    @classmethod
    def of(cls, purpose: str, *parts: KeyPart) -> "StreamKey":
        return cls().child(purpose, *parts)

    def child(self, purpose: str, *parts: KeyPart) -> "StreamKey":
        body = _encode_part(purpose) + b"".join(_encode_part(p) for p in parts)
        return StreamKey(self.data + _varint(len(body)) + body)

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class KeyedGenerator:
    """Value-like handle on one random stream.

    ``rng()`` always returns a fresh numpy generator positioned at draw 0, so
    two calls on equal handles yield identical sequences.
    """

    seed: int
    key: StreamKey = StreamKey()

    def philox_key(self) -> int:
        h = hashlib.blake2b(digest_size=16)
        h.update(_DOMAIN_TAG)
        h.update(self.seed.to_bytes(8, "little"))
        h.update(self.key.data)
        return int.from_bytes(h.digest(), "little")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.philox_key()))

    def derive(self, purpose: str, *parts: KeyPart) -> "KeyedGenerator":
        return KeyedGenerator(self.seed, self.key.child(purpose, *parts))

    def uniforms(self, size: int) -> np.ndarray:
        return self.rng().random(size)


def make_root_generator(seed: int) -> KeyedGenerator:
    seed = int(seed)
    if seed < 0 or seed > SEED_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return KeyedGenerator(seed)


def derive_substream(g: KeyedGenerator, key: StreamKey) -> KeyedGenerator:
    """Stream keyed by ``key`` below ``g``; depends only on (root seed, full key)."""
    return KeyedGenerator(g.seed, StreamKey(g.key.data + key.data))

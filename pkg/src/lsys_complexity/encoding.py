"""Text normalization and text -> bit string encoders (BIN and LZW).

BIN maps ``a..z`` to 1..26 and space to 27, five bits per symbol.  LZW
emits dictionary indices that are then written with one fixed width, the
smallest width able to hold the largest emitted index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CorruptStreamError, InvalidSymbolError

ALPHABET = "abcdefghijklmnopqrstuvwxyz "
BIN_WIDTH = 5

_NOT_ALLOWED = re.compile(r"[^a-z ]")
_SPACES = re.compile(r"\s+")


@dataclass(frozen=True)
class BitString:
    """Immutable bit sequence.  Bits are stored one per byte (values 0/1)."""

    bits: bytes = b""

    def __post_init__(self) -> None:
        if self.bits.translate(None, b"\x00\x01"):
            raise ValueError("BitString may only hold 0 and 1")

    @classmethod
    def from01(cls, text: str) -> "BitString":
        """Parse ASCII '0'/'1' characters; whitespace is ignored."""
        clean = "".join(text.split())
        if clean.strip("01"):
            raise ValueError(f"not a bit string: {text[:40]!r}")
        return cls(clean.encode("ascii").translate(_ASCII_TO_BIT))

    @classmethod
    def from_hex(cls, text: str) -> "BitString":
        raw = bytes.fromhex("".join(text.split()))
        return cls.unpack(raw, 8 * len(raw))

    @classmethod
    def from_iter(cls, bits: Iterable[int]) -> "BitString":
        return cls(bytes(bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return BitString(self.bits[key])
        return self.bits[key]

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self.bits + other.bits)

    def __str__(self) -> str:
        return self.to01()

    def to01(self) -> str:
        return self.bits.translate(_BIT_TO_ASCII).decode("ascii")

    def complement(self) -> "BitString":
        return BitString(self.bits.translate(_FLIP))

    def reversed(self) -> "BitString":
        return BitString(self.bits[::-1])

    def pack(self) -> bytes:
        """Pack MSB first; the final partial byte is zero padded."""
        out = bytearray((len(self.bits) + 7) // 8)
        for i, b in enumerate(self.bits):
            if b:
                out[i >> 3] |= 0x80 >> (i & 7)
        return bytes(out)

    @classmethod
    def unpack(cls, data: bytes, nbits: int) -> "BitString":
        if nbits > 8 * len(data) or nbits < 0:
            raise ValueError(f"{nbits} bits requested from {len(data)} bytes")
        bits = bytes((data[i >> 3] >> (7 - (i & 7))) & 1 for i in range(nbits))
        return cls(bits)


_ASCII_TO_BIT = bytes.maketrans(b"01", b"\x00\x01")
_BIT_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")
_FLIP = bytes.maketrans(b"\x00\x01", b"\x01\x00")


@dataclass
class LzwDictionary:
    """Substring -> index table.  Indices are 1-based and contiguous."""

    entries: dict[str, int] = field(default_factory=dict)
    next_index: int = 1

    @classmethod
    def seeded(cls, alphabet: Sequence[str]) -> "LzwDictionary":
        d = cls()
        for sym in alphabet:
            if sym in d.entries:
                raise ValueError(f"duplicate alphabet symbol {sym!r}")
            d.add(sym)
        return d

    def add(self, key: str) -> int:
        self.entries[key] = self.next_index
        self.next_index += 1
        return self.next_index - 1

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def __getitem__(self, key: str) -> int:
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)


def preprocess_text(raw: str) -> str:
    """Lowercase, collapse whitespace runs, drop everything outside a-z/space."""
    text = _SPACES.sub(" ", raw.lower())
    text = _NOT_ALLOWED.sub("", text)
    # removing punctuation can leave doubled spaces ("a - b")
    return _SPACES.sub(" ", text).strip()


def _fields(values: Iterable[int], width: int) -> BitString:
    out = bytearray()
    for v in values:
        out.extend((v >> (width - 1 - j)) & 1 for j in range(width))
    return BitString(bytes(out))


def encode_bin(text: str) -> BitString:
    indices = []
    for ch in text:
        idx = ALPHABET.find(ch)
        if idx < 0 or len(ch) != 1:
            raise InvalidSymbolError(f"symbol {ch!r} is not in the BIN alphabet")
        indices.append(idx + 1)
    return _fields(indices, BIN_WIDTH)


def decode_bin(bits: BitString) -> list[int]:
    """Read back the 5-bit index fields written by :func:`encode_bin`."""
    if len(bits) % BIN_WIDTH:
        raise ValueError("BIN stream length is not a multiple of 5")
    raw = bits.bits
    return [
        int("".join("01"[b] for b in raw[i:i + BIN_WIDTH]), 2)
        for i in range(0, len(raw), BIN_WIDTH)
    ]


def encode_lzw(text: Sequence[str], alphabet: Sequence[str] = ALPHABET) -> tuple[list[int], LzwDictionary]:
    table = LzwDictionary.seeded(alphabet)
    out: list[int] = []
    current = ""
    for ch in text:
        if ch not in table.entries or len(ch) != 1:
            raise InvalidSymbolError(f"symbol {ch!r} is not in the LZW alphabet")
        candidate = current + ch
        if candidate in table:
            current = candidate
        else:
            out.append(table[current])
            table.add(candidate)
            current = ch
    if current:
        out.append(table[current])
    return out, table


def decode_lzw(indices: Sequence[int], alphabet: Sequence[str] = ALPHABET) -> str:
    table = {i + 1: sym for i, sym in enumerate(alphabet)}
    if not indices:
        return ""
    first = indices[0]
    if first not in table:
        raise CorruptStreamError(f"index {first} at position 0 is undefined")
    prev = table[first]
    parts = [prev]
    for pos, idx in enumerate(indices[1:], start=1):
        if idx in table:
            entry = table[idx]
        elif idx == len(table) + 1:
            # entry being defined by this very step (cScSc case)
            entry = prev + prev[0]
        else:
            raise CorruptStreamError(f"index {idx} at position {pos} is undefined")
        table[len(table) + 1] = prev + entry[0]
        parts.append(entry)
        prev = entry
    return "".join(parts)


def code_width(indices: Sequence[int]) -> int:
    """Smallest w with 2**w > max(indices); 0 for an empty sequence."""
    if not indices:
        return 0
    return max(indices).bit_length()


def indices_to_bits(indices: Sequence[int], width: int | None = None) -> BitString:
    if any(i < 1 for i in indices):
        raise ValueError("LZW indices must be >= 1")
    natural = code_width(indices)
    if width is None:
        width = natural
    elif width < natural:
        raise ValueError(f"width {width} cannot hold index {max(indices)}")
    return _fields(indices, width)


def bits_to_indices(bits: BitString, width: int) -> list[int]:
    if width <= 0 or len(bits) % width:
        raise ValueError(f"{len(bits)} bits do not split into {width}-bit fields")
    raw = bits.bits
    out = []
    for i in range(0, len(raw), width):
        v = 0
        for b in raw[i:i + width]:
            v = (v << 1) | b
        out.append(v)
    return out

"""On-disk formats: key file, ciphertext stream, index sidecar and PGM.

Key file (text, one field per line)::

    CRSKEY1
    <modulus>
    <encrypt exponent>
    <secret, hex>
    <index bits>

Ciphertext stream (binary, big-endian): ``CRS1``, mode byte (0 group,
1 completely simple, 2 cr-rsa), 8-byte modulus, 1-byte index bits, then
blocks. A block is ``index || body`` in mode 1, ``first || body`` in mode 2
and ``body`` alone in mode 0. Bodies (and mode-2 first coordinates) take
the minimal number of bytes holding ``modulus - 1``; indices take
``ceil(index_bits / 8)`` bytes.

Sidecar: ``CRSIDX1``, 8-byte count, then the indices at index width.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum

from .cipher import SymmetricKey
from .errors import MagicMismatch, TruncatedStream, UnsupportedFormat

KEY_MAGIC = "CRSKEY1"
STREAM_MAGIC = b"CRS1"
SIDECAR_MAGIC = b"CRSIDX1"
HEADER_SIZE = len(STREAM_MAGIC) + 1 + 8 + 1


class Mode(IntEnum):
    GROUP = 0
    CS = 1
    CRRSA = 2

    @classmethod
    def parse(cls, name: str) -> Mode:
        return {"group": cls.GROUP, "cs": cls.CS, "crrsa": cls.CRRSA}[name]

    @property
    def label(self) -> str:
        return {0: "group", 1: "cs", 2: "crrsa"}[int(self)]


def residue_width(modulus: int) -> int:
    return max(1, ((modulus - 1).bit_length() + 7) // 8)


def index_width(index_bits: int) -> int:
    return (index_bits + 7) // 8


def dump_key(key: SymmetricKey) -> str:
    return "\n".join([KEY_MAGIC, str(key.modulus.value), str(key.encrypt_exp),
                      f"{key.secret:016x}", str(key.index_bits)]) + "\n"


def load_key(text: str) -> SymmetricKey:
    lines = text.split()
    if not lines or lines[0] != KEY_MAGIC:
        raise MagicMismatch(f"not a {KEY_MAGIC} key file")
    if len(lines) != 5:
        raise TruncatedStream(f"key file has {len(lines)} fields, expected 5")
    _, modulus, e, secret, bits = lines
    return SymmetricKey.from_exponent(int(modulus), int(e), int(secret, 16), int(bits))


@dataclass(frozen=True)
class StreamHeader:
    mode: Mode
    modulus: int
    index_bits: int

    @property
    def block_size(self) -> int:
        w = residue_width(self.modulus)
        if self.mode is Mode.GROUP:
            return w
        if self.mode is Mode.CS:
            return index_width(self.index_bits) + w
        return 2 * w


def encode_stream(header: StreamHeader, blocks: list[tuple[int, int]]) -> bytes:
    """``blocks`` holds ``(index_or_first, body)``; the first slot is ignored in group mode."""
    w = residue_width(header.modulus)
    lead = {Mode.GROUP: 0, Mode.CS: index_width(header.index_bits), Mode.CRRSA: w}[header.mode]
    out = bytearray(STREAM_MAGIC)
    out.append(int(header.mode))
    out += header.modulus.to_bytes(8, "big")
    out.append(header.index_bits)
    for first, body in blocks:
        if lead:
            out += first.to_bytes(lead, "big")
        out += body.to_bytes(w, "big")
    return bytes(out)


def decode_stream(data: bytes) -> tuple[StreamHeader, list[tuple[int, int]]]:
    if data[: len(STREAM_MAGIC)] != STREAM_MAGIC:
        raise MagicMismatch("not a CRS1 ciphertext stream")
    if len(data) < HEADER_SIZE:
        raise TruncatedStream("stream header is incomplete")
    mode_byte = data[4]
    try:
        mode = Mode(mode_byte)
    except ValueError:
        raise UnsupportedFormat(f"unknown mode byte {mode_byte}") from None
    header = StreamHeader(mode, int.from_bytes(data[5:13], "big"), data[13])
    payload = data[HEADER_SIZE:]
    size = header.block_size
    if len(payload) % size:
        raise TruncatedStream(f"payload of {len(payload)} bytes is not a whole number of {size}-byte blocks")
    w = residue_width(header.modulus)
    lead = size - w
    blocks = []
    for off in range(0, len(payload), size):
        first = int.from_bytes(payload[off : off + lead], "big") if lead else 0
        blocks.append((first, int.from_bytes(payload[off + lead : off + size], "big")))
    return header, blocks


def encode_sidecar(indices: list[int], index_bits: int) -> bytes:
    w = index_width(index_bits)
    return SIDECAR_MAGIC + len(indices).to_bytes(8, "big") + b"".join(i.to_bytes(w, "big") for i in indices)


def decode_sidecar(data: bytes, index_bits: int) -> list[int]:
    if data[: len(SIDECAR_MAGIC)] != SIDECAR_MAGIC:
        raise MagicMismatch("not a CRSIDX1 sidecar")
    head = len(SIDECAR_MAGIC) + 8
    if len(data) < head:
        raise TruncatedStream("sidecar header is incomplete")
    count = int.from_bytes(data[len(SIDECAR_MAGIC) : head], "big")
    w = index_width(index_bits)
    if len(data) != head + count * w:
        raise TruncatedStream(f"sidecar declares {count} indices but holds {len(data) - head} bytes")
    return [int.from_bytes(data[head + k * w : head + (k + 1) * w], "big") for k in range(count)]


# -- block packing -----------------------------------------------------------

def block_bits(modulus: int) -> int:
    """Plaintext bits per block, ``ceil(log2 n) - 1``, so every block value is below ``n``."""
    bits = (modulus - 1).bit_length() - 1
    if bits < 1:
        raise UnsupportedFormat(f"modulus {modulus} is too small to carry a plaintext bit")
    return bits


def pack_blocks(data: bytes, bits: int) -> list[int]:
    """Split ``data`` into ``bits``-wide big-endian blocks, zero-filling the last.

    Blocks wider than a byte cannot pin down the length from the block count
    alone, so the data first gets a ``0x80`` terminator.
    """
    if bits > 8:
        data += b"\x80"
    nbits = 8 * len(data)
    count = -(-nbits // bits)
    total = int.from_bytes(data, "big") << (count * bits - nbits) if data else 0
    mask = (1 << bits) - 1
    return [(total >> (bits * (count - 1 - k))) & mask for k in range(count)]


def unpack_blocks(values: list[int], bits: int) -> bytes:
    length = len(values) * bits // 8
    total = 0
    for v in values:
        total = total << bits | v
    total >>= len(values) * bits - 8 * length
    data = total.to_bytes(length, "big")
    if bits > 8:
        data = data.rstrip(b"\0")
        if not data.endswith(b"\x80"):
            raise TruncatedStream("missing block padding terminator")
        data = data[:-1]
    return data


# -- PGM ---------------------------------------------------------------------

@dataclass
class Pgm:
    width: int
    height: int
    pixels: bytes
    maxval: int = 255

    def to_bytes(self) -> bytes:
        return f"P5\n{self.width} {self.height}\n{self.maxval}\n".encode() + self.pixels


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_pgm(data: bytes) -> Pgm:
    """Parse a binary (P5) greymap with maxval at most 255."""
    fields = []
    pos = 0
    for _ in range(4):
        match = _TOKEN.match(data, pos)
        if not match:
            raise UnsupportedFormat("truncated PGM header")
        fields.append(match.group(1))
        pos = match.end()
    if fields[0] != b"P5":
        raise UnsupportedFormat(f"expected binary PGM (P5), got {fields[0]!r}")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise UnsupportedFormat("non-numeric PGM header field") from None
    if not 0 < maxval <= 255:
        raise UnsupportedFormat(f"only 8-bit PGM is supported (maxval {maxval})")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise UnsupportedFormat("missing whitespace after PGM header")
    raster = data[pos + 1 : pos + 1 + width * height]
    if len(raster) != width * height:
        raise UnsupportedFormat(f"raster holds {len(raster)} bytes, expected {width * height}")
    return Pgm(width, height, bytes(raster), maxval)

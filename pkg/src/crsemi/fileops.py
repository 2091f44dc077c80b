"""Whole-file and image encryption built on the block ciphers."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass

from .cipher import (
    SymmetricKey,
    check_cipher_modulus,
    crrsa_decrypt,
    crrsa_encrypt,
    cs_decrypt,
    cs_encrypt,
    CiphertextBlock,
    derive_sandwich,
    cs_encrypt_body,
    group_decrypt,
    group_encrypt,
)
from .errors import BadModulus, ModeMismatch
from .formats import (
    Mode,
    Pgm,
    StreamHeader,
    block_bits,
    decode_stream,
    encode_stream,
    pack_blocks,
    unpack_blocks,
)


def check_mode_modulus(key: SymmetricKey, mode: Mode) -> None:
    if mode is Mode.CRRSA:
        mod = key.modulus
        if not (len(mod.factorization) == 2 and mod.is_squarefree):
            raise BadModulus("cr-rsa mode needs a product of two distinct primes")
    elif mode is Mode.CS:
        check_cipher_modulus(key.modulus)
    block_bits(key.modulus.value)


def encrypt_bytes(data: bytes, key: SymmetricKey, mode: Mode, rng: random.Random) -> bytes:
    check_mode_modulus(key, mode)
    n = key.modulus.value
    values = pack_blocks(data, block_bits(n))
    if mode is Mode.GROUP:
        blocks = [(0, group_encrypt(v, key.encrypt_exp, key.modulus)) for v in values]
    elif mode is Mode.CS:
        blocks = [(b.index, b.body) for b in (cs_encrypt(v, key, rng) for v in values)]
    else:
        blocks = [crrsa_encrypt(v, key.encrypt_exp, key.modulus, rng) for v in values]
    return encode_stream(StreamHeader(mode, n, key.index_bits), blocks)


def decrypt_bytes(data: bytes, key: SymmetricKey, mode: Mode | None = None) -> bytes:
    header, blocks = decode_stream(data)
    if mode is not None and header.mode is not mode:
        raise ModeMismatch(f"stream is {header.mode.label}-mode, {mode.label} requested")
    if header.modulus != key.modulus.value:
        raise ModeMismatch(f"stream modulus {header.modulus} does not match key modulus {key.modulus.value}")
    if header.mode is Mode.CS and header.index_bits != key.index_bits:
        raise ModeMismatch(f"stream uses {header.index_bits}-bit indices, key {key.index_bits}")
    n = key.modulus.value
    if header.mode is Mode.GROUP:
        values = [group_decrypt(body, key.decrypt_exp, key.modulus) for _, body in blocks]
    elif header.mode is Mode.CS:
        values = [cs_decrypt(CiphertextBlock(i, body), key) for i, body in blocks]
    else:
        values = [crrsa_decrypt(pair, key.decrypt_exp, n) for pair in blocks]
    return unpack_blocks(values, block_bits(n))


def encrypt_pixels_group(pixels: bytes, key: SymmetricKey) -> bytes:
    out = [group_encrypt(v, key.encrypt_exp, key.modulus) for v in pixels]
    if max(out, default=0) > 255:
        raise BadModulus("group-mode image output exceeds one byte; use modulus 257")
    return bytes(out)


def encrypt_pixels_cs(pixels: bytes, key: SymmetricKey, rng: random.Random) -> tuple[bytes, list[int]]:
    """Completely simple encryption keeping each body within one byte.

    An index whose body would exceed 255 (possible mod 257) is redrawn, so the
    ciphertext image stays an 8-bit greymap; the indices go to the sidecar.
    """
    n = key.modulus.value
    bodies, indices = bytearray(), []
    for v in pixels:
        while True:
            i = rng.getrandbits(key.index_bits)
            c = cs_encrypt_body(v, derive_sandwich(i, key.secret, n), key.encrypt_exp, n)
            if c <= 255:
                break
        bodies.append(c)
        indices.append(i)
    return bytes(bodies), indices


def decrypt_pixels_cs(bodies: bytes, indices: list[int], key: SymmetricKey) -> bytes:
    if len(bodies) != len(indices):
        raise ValueError(f"{len(bodies)} pixels but {len(indices)} indices")
    return bytes(cs_decrypt(CiphertextBlock(i, c), key) for c, i in zip(bodies, indices))


@dataclass(frozen=True)
class DiffusionRow:
    plaintext: int
    pixels: int
    group_distinct: int
    cs_distinct: int


def diffusion_report(original: Pgm, group: Pgm, cs: Pgm) -> list[DiffusionRow]:
    """For every plaintext grey level: how many distinct ciphertext bytes it became."""
    group_seen: dict[int, set[int]] = defaultdict(set)
    cs_seen: dict[int, set[int]] = defaultdict(set)
    counts: dict[int, int] = defaultdict(int)
    for x, a, b in zip(original.pixels, group.pixels, cs.pixels):
        counts[x] += 1
        group_seen[x].add(a)
        cs_seen[x].add(b)
    return [DiffusionRow(x, counts[x], len(group_seen[x]), len(cs_seen[x])) for x in sorted(counts)]

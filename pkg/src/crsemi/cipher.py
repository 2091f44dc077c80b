"""Discrete-log ciphers over Z_p and Z_pq.

Three schemes share this module:

* the classic exponentiation cipher ``x -> x^e``;
* the completely simple scheme: a block ``g`` becomes ``(i, (g p_i)^(n-1) g)``
  for a random index ``i`` and a secret sandwich value ``p_i = f(i, s)``;
* the completely regular RSA variant: ``g -> (p^e, (g p)^(e-1) g)`` for a
  fresh random unit ``p``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from math import gcd

from .errors import BadModulus, CRSError, NotCoprime, NotUnit
from .modmath import Modulus, as_modulus, mod_inv, mod_pow

DEFAULT_INDEX_BITS = 32
SANDWICH_RETRY_LIMIT = 1000
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SymmetricKey:
    modulus: Modulus
    encrypt_exp: int
    decrypt_exp: int
    secret: int
    index_bits: int = DEFAULT_INDEX_BITS

    def __post_init__(self):
        r = self.group_order
        if gcd(self.encrypt_exp, r) != 1:
            raise NotCoprime(f"encrypt exponent {self.encrypt_exp} is not a unit mod {r}")
        if self.encrypt_exp * self.decrypt_exp % r != 1 % r:
            raise NotCoprime("decrypt exponent does not invert the encrypt exponent")
        if not 1 <= self.index_bits <= 64:
            raise ValueError("index_bits must lie in [1, 64]")
        if not 0 <= self.secret <= _MASK64:
            raise ValueError("secret must be a 64-bit value")

    @property
    def group_order(self) -> int:
        return self.modulus.phi

    @classmethod
    def from_exponent(cls, modulus: int | Modulus, encrypt_exp: int, secret: int,
                      index_bits: int = DEFAULT_INDEX_BITS) -> SymmetricKey:
        mod = as_modulus(modulus)
        r = mod.phi
        d = mod_inv(encrypt_exp, r) if r > 1 else 1
        return cls(mod, encrypt_exp, d, secret, index_bits)


@dataclass(frozen=True)
class CiphertextBlock:
    index: int
    body: int


def check_cipher_modulus(modulus: int | Modulus) -> Modulus:
    """Accept a prime or a product of two distinct primes."""
    mod = as_modulus(modulus)
    if mod.is_prime or (len(mod.factorization) == 2 and mod.is_squarefree):
        return mod
    raise BadModulus(f"{mod.value} is neither prime nor a product of two distinct primes")


def random_unit(r: int, rng: random.Random) -> int:
    """Uniform element of U_r by rejection sampling."""
    if r <= 2:
        return 1
    while True:
        x = rng.randrange(1, r)
        if gcd(x, r) == 1:
            return x


def keygen(modulus: int | Modulus, rng: random.Random, index_bits: int = DEFAULT_INDEX_BITS) -> SymmetricKey:
    mod = check_cipher_modulus(modulus)
    e = random_unit(mod.phi, rng)
    secret = rng.getrandbits(64)
    return SymmetricKey.from_exponent(mod, e, secret, index_bits)


def derive_sandwich(i: int, s: int, modulus: int | Modulus) -> int:
    """Hash ``i xor s`` (with a retry counter) into a unit mod ``modulus``.

    Message layout: 8-byte big-endian ``i ^ s``, 8-byte big-endian counter,
    then ``0x01``. The first 8 digest bytes, big-endian, reduced mod n, are
    the candidate.
    """
    n = int(modulus)
    head = ((i ^ s) & _MASK64).to_bytes(8, "big")
    for ctr in range(SANDWICH_RETRY_LIMIT):
        digest = hashlib.sha512(head + ctr.to_bytes(8, "big") + b"\x01").digest()
        candidate = int.from_bytes(digest[:8], "big") % n
        if gcd(candidate, n) == 1:
            return candidate
    raise CRSError(f"no unit found mod {n} after {SANDWICH_RETRY_LIMIT} hash attempts")


def cs_encrypt_body(g: int, sandwich: int, n_exp: int, modulus: int) -> int:
    """``(g p)^(n-1) g mod modulus``."""
    return mod_pow(g * sandwich, n_exp - 1, modulus) * g % modulus


def cs_decrypt_body(c: int, sandwich: int, m_exp: int, modulus: int) -> int:
    """``((c p)^m) p^-1 mod modulus``."""
    return mod_pow(c * sandwich, m_exp, modulus) * mod_inv(sandwich, modulus) % modulus


def cs_encrypt(g: int, key: SymmetricKey, rng: random.Random) -> CiphertextBlock:
    n = key.modulus.value
    i = rng.getrandbits(key.index_bits)
    p_i = derive_sandwich(i, key.secret, n)
    return CiphertextBlock(i, cs_encrypt_body(g % n, p_i, key.encrypt_exp, n))


def cs_decrypt(block: CiphertextBlock, key: SymmetricKey) -> int:
    n = key.modulus.value
    if not 0 <= block.index < 1 << key.index_bits:
        raise ValueError(f"index {block.index} outside a {key.index_bits}-bit index space")
    p_i = derive_sandwich(block.index, key.secret, n)
    return cs_decrypt_body(block.body % n, p_i, key.decrypt_exp, n)


def group_encrypt(x: int, e: int, p: int | Modulus) -> int:
    mod = as_modulus(p)
    if gcd(e, mod.phi) != 1:
        raise NotCoprime(f"exponent {e} is not a unit mod {mod.phi}")
    return mod_pow(x, e, mod.value)


def group_decrypt(c: int, k: int, p: int | Modulus) -> int:
    return group_encrypt(c, k, p)


def crrsa_encrypt_block(g: int, sandwich: int, e: int, n: int) -> tuple[int, int]:
    return mod_pow(sandwich, e, n), mod_pow(g * sandwich, e - 1, n) * g % n


def crrsa_encrypt(g: int, e: int, n: int | Modulus, rng: random.Random) -> tuple[int, int]:
    mod = as_modulus(n)
    if gcd(e, mod.phi) != 1:
        raise NotCoprime(f"public exponent {e} is not a unit mod {mod.phi}")
    p_i = random_unit(mod.value, rng)
    return crrsa_encrypt_block(g % mod.value, p_i, e, mod.value)


def crrsa_decrypt(pair: tuple[int, int], d: int, n: int | Modulus) -> int:
    """Recover ``p = first^d``, then ``g = (second * p)^d * p^-1``.

    The trailing ``p^-1`` is required: ``(second * p)^d`` alone equals ``g p``.
    """
    v = int(n)
    first, second = pair
    p_i = mod_pow(first, d, v)
    if gcd(p_i, v) != 1:
        raise NotUnit(f"recovered sandwich {p_i} is not a unit mod {v}; ciphertext corrupted")
    return mod_pow(second * p_i, d, v) * mod_inv(p_i, v) % v

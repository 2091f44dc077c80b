"""Exact modular arithmetic and elementary number theory.

Residues are plain Python ints reduced into ``[0, n)``; :class:`Modulus`
carries the factorisation so totients and unit tests never refactor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, isqrt

from .errors import BadModulus, NotCoprime

MAX_MODULUS = 1 << 62


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)`` and ``g >= 1``."""
    if a == 0 and b == 0:
        raise ValueError("ext_gcd(0, 0) is undefined")
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def mod_inv(a: int, n: int) -> int:
    """Inverse of ``a`` modulo ``n``; raises :class:`NotCoprime` when none exists."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    g, x, _ = ext_gcd(a % n, n)
    if g != 1:
        raise NotCoprime(f"{a} is not invertible mod {n} (gcd {g})")
    return x % n


def mod_pow(base: int, exp: int, n: int) -> int:
    """Left-to-right square-and-multiply; ``exp == 0`` gives ``1 mod n``."""
    if exp < 0:
        raise ValueError("negative exponent; invert the base first")
    if n == 1:
        return 0
    base %= n
    result = 1
    for bit in bin(exp)[2:]:
        result = result * result % n
        if bit == "1":
            result = result * base % n
    return result


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorisation, primes ascending."""
    if n < 2:
        raise ValueError(f"factorize needs n >= 2, got {n}")
    factors = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            factors.append((p, e))
    # candidates 6k +/- 1
    p, step = 5, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            factors.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        factors.append((n, 1))
    return factors


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, isqrt(n) + 1, 2))


def primes_up_to(limit: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class Modulus:
    """A factored modulus ``value >= 2``."""

    value: int
    factorization: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not 2 <= self.value <= MAX_MODULUS:
            raise BadModulus(f"modulus must lie in [2, 2^62], got {self.value}")
        prod = 1
        seen = set()
        for p, e in self.factorization:
            if e < 1 or p in seen or not is_prime(p):
                raise BadModulus(f"invalid factorisation entry {(p, e)} for {self.value}")
            seen.add(p)
            prod *= p**e
        if prod != self.value:
            raise BadModulus(f"factorisation {self.factorization} does not multiply to {self.value}")

    @classmethod
    def of(cls, n: int) -> Modulus:
        if not 2 <= n <= MAX_MODULUS:
            raise BadModulus(f"modulus must lie in [2, 2^62], got {n}")
        return cls(n, tuple(factorize(n)))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factorization)

    @cached_property
    def phi(self) -> int:
        return euler_phi(self)

    @property
    def is_prime(self) -> bool:
        return len(self.factorization) == 1 and self.factorization[0][1] == 1

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factorization)

    def __int__(self) -> int:
        return self.value


def as_modulus(n: int | Modulus) -> Modulus:
    return n if isinstance(n, Modulus) else Modulus.of(n)


def euler_phi(n: int | Modulus) -> int:
    n = as_modulus(n)
    phi = 1
    for p, e in n.factorization:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def units(n: int | Modulus) -> list[int]:
    """Elements of U_n in ascending order."""
    v = int(n)
    return [x for x in range(1, v) if gcd(x, v) == 1]


def unit_squares(n: int | Modulus) -> set[int]:
    v = int(n)
    if v == 2:
        return {1}
    return {x * x % v for x in units(v)}


def multiplicative_order(x: int, n: int | Modulus) -> int:
    """Order of the unit ``x`` in U_n, by stripping prime factors off phi(n)."""
    n = as_modulus(n)
    v = n.value
    x %= v
    if gcd(x, v) != 1:
        raise NotCoprime(f"{x} is not a unit mod {v}")
    order = n.phi
    if order == 1:
        return 1
    for p, _ in factorize(order):
        while order % p == 0 and mod_pow(x, order // p, v) == 1:
            order //= p
    return order

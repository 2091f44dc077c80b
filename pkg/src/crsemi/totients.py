"""Schemmel's totient S(n), the companion count T(n), and the D/E/F sets.

``S(n)`` counts ``m`` in ``[1, n-1]`` with both ``m`` and ``m-1`` coprime to
``n``. ``T(n)`` counts odd ``m`` in ``[1, n]`` with ``m`` and ``(m-1)/2``
coprime to ``n``. Throughout, ``gcd(0, n) = n``, which excludes ``m = 1``.

Every closed form is paired with an exhaustive counter so they can be
checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

from .errors import NotDivisor
from .modmath import Modulus, factorize


def brute_S(n: int) -> int:
    return sum(1 for m in range(1, n) if gcd(m, n) == 1 and gcd(m - 1, n) == 1)


def schemmel_S(n: int | Modulus) -> int:
    """Closed form ``n * prod(1 - 2/p)``; zero for even ``n``, and ``S(1) = 1``."""
    v = int(n)
    if v == 1:
        return 1
    factors = n.factorization if isinstance(n, Modulus) else factorize(v)
    result = v
    for p, _ in factors:
        result = result // p * (p - 2)
    return result


def brute_T(n: int) -> int:
    return sum(1 for m in range(1, n + 1, 2) if gcd(m, n) == 1 and gcd((m - 1) // 2, n) == 1)


@dataclass(frozen=True)
class Exact:
    value: int

    def contains(self, x: int) -> bool:
        return x == self.value


@dataclass(frozen=True)
class Interval:
    lower: int
    upper: int

    def contains(self, x: int) -> bool:
        return self.lower <= x <= self.upper


TValue = Union[Exact, Interval]


def split_two(n: int) -> tuple[int, int]:
    """Write ``n = 2**e * m`` with ``m`` odd; returns ``(e, m)``."""
    e = (n & -n).bit_length() - 1
    return e, n >> e


def t_closed_form(n: int) -> TValue:
    """Exact T(n) where the theory pins it down, otherwise a bounding interval."""
    if n < 2:
        raise ValueError("T(n) is tabulated for n >= 2")
    e, m = split_two(n)
    odd_factors = factorize(m) if m > 1 else []
    k = len(odd_factors)
    s_m = schemmel_S(m)
    if e >= 2:
        return Exact(2 ** (e - 2) * s_m)
    if e == 1:
        if m == 1:
            return Exact(0)
        if odd_factors == [(m, 1)]:
            return Exact((m - 3) // 2 if m % 4 == 3 else (m - 1) // 2)
        slack = (3**k - 2**k + 1) // 2
    else:
        if k == 1:
            return Exact((s_m - 1) // 2)
        slack = (3**k - 2 ** (k + 1) + 1) // 2
    centre = (s_m - 1) // 2
    return Interval(max(0, centre - slack), centre + slack)


@dataclass(frozen=True)
class TotientReport:
    n: int
    s_value: int
    t_exact: int | None
    t_bounds: tuple[int, int] | None
    brute_s: int
    brute_t: int

    @property
    def matches(self) -> bool:
        s_ok = self.n % 2 == 0 or self.s_value == self.brute_s
        if self.t_exact is not None:
            return s_ok and self.brute_t == self.t_exact
        lo, hi = self.t_bounds
        return s_ok and lo <= self.brute_t <= hi


def totient_report(n: int) -> TotientReport:
    t = t_closed_form(n)
    exact = t.value if isinstance(t, Exact) else None
    bounds = (t.lower, t.upper) if isinstance(t, Interval) else None
    return TotientReport(n, schemmel_S(n), exact, bounds, brute_S(n), brute_T(n))


def def_set_counts(n: int, p: int) -> tuple[int, int, int]:
    """Sizes of D_p, E_p and F_p = D_p | E_p, over ``m`` in ``[2, 2n]``.

    ``D_p``: ``m = 1 mod 4`` and ``p | m``. ``E_p``: ``m = 1 mod 4`` and
    ``p | m - 1``. The value ``m = 1`` is left out, as the counting argument
    only ranges over positive multiples.
    """
    if n % 2 == 0 or p % 2 == 0 or p <= 1 or n % p:
        raise NotDivisor(f"need odd n and odd divisor p > 1, got n={n}, p={p}")
    d = e = 0
    for m in range(5, 2 * n + 1, 4):
        if m % p == 0:
            d += 1
        elif (m - 1) % p == 0:
            e += 1
    return d, e, d + e

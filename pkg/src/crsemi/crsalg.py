"""Completely regular semigroup algebra.

Two structures live here:

* the decomposition of the multiplicative semigroup Z_n (n squarefree) into
  groups ``U_S``, one per subset ``S`` of the prime indices, with the
  structure maps between them;
* Rees matrix semigroups ``M[Z_n; I, Lambda; P]`` whose sandwich entries are
  units, with closed-form exponentiation.

Subsets of the prime index set are bitmasks: bit ``j`` set means the
``j``-th smallest prime of ``n`` belongs to the subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import EmptyComponent, NotInComponent, NotSquarefree, NotSubset, NotUnit
from .modmath import Modulus, as_modulus, mod_inv, mod_pow, multiplicative_order

MAX_PRIMES = 20
MATERIALIZE_LIMIT = 10**6


@dataclass(frozen=True)
class SemilatticeDecomposition:
    modulus: Modulus
    primes: tuple[int, ...]
    _components: dict[int, frozenset[int]] | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.modulus.value

    @property
    def full(self) -> int:
        """Bitmask of the whole index set I."""
        return (1 << len(self.primes)) - 1

    def subsets(self) -> range:
        return range(self.full + 1)

    def part(self, mask: int) -> int:
        """``n_S``: product of the primes indexed by ``mask``."""
        prod = 1
        for j, p in enumerate(self.primes):
            if mask >> j & 1:
                prod *= p
        return prod

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    @property
    def components(self) -> dict[int, frozenset[int]]:
        if self._components is None:
            raise ValueError(f"components are only materialised for n <= {MATERIALIZE_LIMIT}")
        return self._components

    def component(self, mask: int) -> frozenset[int]:
        return self.components[mask]


def decompose(n: int | Modulus) -> SemilatticeDecomposition:
    """Split Z_n into the groups U_S, S ranging over subsets of the prime indices."""
    mod = as_modulus(n)
    if not mod.is_squarefree:
        raise NotSquarefree(f"{mod.value} is not squarefree")
    if len(mod.primes) > MAX_PRIMES:
        raise ValueError(f"at most {MAX_PRIMES} distinct primes supported")
    d = SemilatticeDecomposition(mod, mod.primes)
    if mod.value <= MATERIALIZE_LIMIT:
        buckets: dict[int, set[int]] = {mask: set() for mask in d.subsets()}
        for k in range(mod.value):
            buckets[component_of(k, d)].add(k)
        object.__setattr__(d, "_components", {m: frozenset(s) for m, s in buckets.items()})
    return d


def component_of(k: int, d: SemilatticeDecomposition) -> int:
    """The subset S with ``k`` in U_S: indices of primes *not* dividing ``k``."""
    k %= d.n
    mask = 0
    for j, p in enumerate(d.primes):
        if k % p:
            mask |= 1 << j
    return mask


def idempotent_of(mask: int, d: SemilatticeDecomposition) -> int:
    """Identity element of U_S, as a residue mod n."""
    if mask == 0:
        raise EmptyComponent("U_empty = {0}; its identity is 0")
    if mask & ~d.full:
        raise NotSubset(f"mask {mask:#b} is not a subset of the index set")
    n_s = d.part(mask)
    n_sbar = d.part(d.complement(mask))
    return n_sbar * mod_inv(n_sbar, n_s) % d.n


def structure_map(x: int, source: int, target: int, d: SemilatticeDecomposition) -> int:
    """Map ``x`` in U_source down to U_target, for target a subset of source."""
    x %= d.n
    if component_of(x, d) != source:
        raise NotInComponent(f"{x} is not in the component {source:#b}")
    if target & ~source:
        raise NotSubset(f"{target:#b} is not a subset of {source:#b}")
    if target == 0:
        return 0
    return idempotent_of(target, d) * x % d.n


@dataclass(frozen=True)
class ReesElement:
    i: int
    g: int
    lam: int


@dataclass(frozen=True)
class ReesMatrixSemigroup:
    """``M[Z_n; I, Lambda; P]`` with ``P`` a Lambda-by-I matrix of units mod n."""

    group_modulus: Modulus
    i_count: int
    lambda_count: int
    sandwich: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.group_modulus.value
        if self.i_count < 1 or self.lambda_count < 1:
            raise ValueError("index sets must be non-empty")
        if len(self.sandwich) != self.lambda_count or any(len(row) != self.i_count for row in self.sandwich):
            raise ValueError(f"sandwich must be {self.lambda_count}x{self.i_count}")
        for row in self.sandwich:
            for entry in row:
                if gcd(entry, n) != 1:
                    raise NotUnit(f"sandwich entry {entry} is not a unit mod {n}")

    @classmethod
    def build(cls, n: int | Modulus, sandwich) -> ReesMatrixSemigroup:
        mod = as_modulus(n)
        rows = tuple(tuple(int(v) % mod.value for v in row) for row in sandwich)
        return cls(mod, len(rows[0]) if rows else 0, len(rows), rows)

    @property
    def n(self) -> int:
        return self.group_modulus.value

    def entry(self, lam: int, i: int) -> int:
        return self.sandwich[lam][i]

    def element(self, i: int, g: int, lam: int) -> ReesElement:
        if not (0 <= i < self.i_count and 0 <= lam < self.lambda_count):
            raise IndexError(f"index ({i}, {lam}) out of range")
        return ReesElement(i, g % self.n, lam)

    def elements(self):
        for i in range(self.i_count):
            for g in range(self.n):
                for lam in range(self.lambda_count):
                    yield ReesElement(i, g, lam)


def rees_multiply(a: ReesElement, b: ReesElement, s: ReesMatrixSemigroup) -> ReesElement:
    """``(i, g, l)(j, h, m) = (i, g * p[l][j] * h, m)``."""
    return ReesElement(a.i, a.g * s.entry(a.lam, b.i) * b.g % s.n, b.lam)


def rees_power(a: ReesElement, k: int, s: ReesMatrixSemigroup) -> ReesElement:
    """``a**k = (i, (g p)^(k-1) g, l)`` with ``p = p[l][i]``."""
    if k < 1:
        raise ValueError("semigroup powers need k >= 1")
    gp = a.g * s.entry(a.lam, a.i) % s.n
    return ReesElement(a.i, mod_pow(gp, k - 1, s.n) * a.g % s.n, a.lam)


def monogenic_period(a: ReesElement, s: ReesMatrixSemigroup) -> int:
    """Smallest ``t >= 1`` with ``a**(t+1) == a``.

    This is the order of ``g * p[l][i]`` inside its component group U_S of
    Z_n, i.e. the multiplicative order of its image mod n_S. When
    ``g * p`` is a unit the modulus need not be squarefree (the semigroup is
    then read over the unit group U_n).
    """
    gp = a.g * s.entry(a.lam, a.i) % s.n
    if gcd(gp, s.n) == 1:
        return multiplicative_order(gp, s.n)
    if not s.group_modulus.is_squarefree:
        raise NotSquarefree(f"{s.n} is not squarefree and {gp} is not a unit; Z_n is not completely regular")
    n_s = 1
    for p in s.group_modulus.primes:
        if gp % p:
            n_s *= p
    if n_s == 1:
        return 1
    return multiplicative_order(gp % n_s, n_s)

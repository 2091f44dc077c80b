"""Attacks on the completely simple scheme, at desk scale.

Covers trial multiplication (with its non-unique solutions), the mimic
characterisation and its constructive witnesses, and the two chosen
plaintext attacks that apply when the index space is small or reused.
Ciphers are passed in as opaque callables so any configuration can be
attacked the same way.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from math import comb, gcd
from typing import Callable

from .cipher import CiphertextBlock
from .errors import CostCapExceeded, IndexMismatch, NoSuitableK, NotAMimic, NotFound
from .modmath import factorize, is_prime, mod_inv, mod_pow, multiplicative_order

DEFAULT_COST_CAP = 1 << 24
MAX_PIGEONHOLE_INDEX_SPACE = 64


def cost_cap() -> int:
    raw = os.environ.get("CRS_COST_CAP")
    return int(raw) if raw else DEFAULT_COST_CAP


def exponent_units(r: int) -> list[int]:
    """U_r as exponents in ``[1, r)``; for ``r = 1`` just ``[1]``."""
    if r == 1:
        return [1]
    return [m for m in range(1, r) if gcd(m, r) == 1]


@dataclass(frozen=True)
class GroupSpec:
    """Cyclic subgroup of U_p of order ``order`` generated by ``generator``."""

    ambient_modulus: int
    generator: int
    order: int

    def __post_init__(self):
        p, g, r = self.ambient_modulus, self.generator % self.ambient_modulus, self.order
        if r < 1 or (p - 1) % r:
            raise ValueError(f"order {r} does not divide {p - 1}")
        if mod_pow(g, r, p) != 1:
            raise ValueError(f"{g} ** {r} != 1 mod {p}")
        if r > 1 and any(mod_pow(g, r // q, p) == 1 for q, _ in factorize(r)):
            raise ValueError(f"{g} has order strictly dividing {r} mod {p}")

    @classmethod
    def unit_group(cls, p: int) -> GroupSpec:
        return cls.subgroup(p, p - 1)

    @classmethod
    def subgroup(cls, p: int, order: int) -> GroupSpec:
        """The unique subgroup of U_p of the given order."""
        if (p - 1) % order:
            raise ValueError(f"{order} does not divide {p - 1}")
        if order == 1:
            return cls(p, 1, 1)
        qs = [q for q, _ in factorize(p - 1)]
        for x in range(2, p):
            if all(mod_pow(x, (p - 1) // q, p) != 1 for q in qs):
                return cls(p, mod_pow(x, (p - 1) // order, p), order)
        raise ValueError(f"{p} has no primitive root; is it prime?")

    @classmethod
    def smallest_realisation(cls, order: int) -> GroupSpec:
        """Cyclic group of the given order inside U_p for the least suitable prime p."""
        p = order + 1
        while not is_prime(p):
            p += order
        return cls.subgroup(p, order)

    @property
    def p(self) -> int:
        return self.ambient_modulus

    def elements(self) -> list[int]:
        out, x = [], 1
        for _ in range(self.order):
            out.append(x)
            x = x * self.generator % self.p
        return sorted(out)

    def contains(self, x: int) -> bool:
        x %= self.p
        return x != 0 and mod_pow(x, self.order, self.p) == 1

    def inv(self, x: int) -> int:
        return mod_inv(x, self.p)

    def mul(self, *xs: int) -> int:
        out = 1
        for x in xs:
            out = out * x % self.p
        return out

    def pow(self, x: int, k: int) -> int:
        """``x**k`` in G; negative ``k`` goes through the group order."""
        return mod_pow(x, k % self.order, self.p)

    def square_roots(self, y: int) -> list[int]:
        return [z for z in self.elements() if z * z % self.p == y % self.p]


def imitation_value(h: int, q: int, m: int, p: int) -> int:
    """``(h q)^(m-1) h mod p``."""
    return mod_pow(h * q, m - 1, p) * h % p


@dataclass(frozen=True)
class ImitationSolution:
    m: int
    q: int
    g: int = field(compare=False)
    target: int = field(compare=False)
    modulus: int = field(compare=False)

    def __post_init__(self):
        if imitation_value(self.g, self.q, self.m, self.modulus) != self.target % self.modulus:
            raise ValueError(f"(m={self.m}, q={self.q}) does not reproduce {self.target}")


def _check_cap(cost: int, what: str) -> None:
    cap = cost_cap()
    if cost > cap:
        raise CostCapExceeded(cost, cap, what)


def trial_multiplication(g: int, target: int, G: GroupSpec) -> list[ImitationSolution]:
    """Every ``(m, q)`` with ``m`` in U_r, ``q`` in G and ``(g q)^(m-1) g == target``.

    Sorted by ``(m, q)``.
    """
    ms = exponent_units(G.order)
    _check_cap(len(ms) * G.order, "trial multiplication")
    p, target = G.p, target % G.p
    elements = G.elements()
    found = []
    for m in ms:
        for q in elements:
            if imitation_value(g, q, m, p) == target:
                found.append(ImitationSolution(m, q, g, target, p))
    return found


def imitation_exponents(g: int, target: int, G: GroupSpec) -> list[int]:
    """Distinct ``m`` admitting at least one ``q`` in the trial enumeration."""
    return sorted({s.m for s in trial_multiplication(g, target, G)})


def mimics(h: int, x: int, G: GroupSpec) -> bool:
    """Whether some ``(m, q)`` gives ``(h q)^(m-1) h == x`` (exhaustive)."""
    p = G.p
    elements = G.elements()
    return any(imitation_value(h, q, m, p) == x % p for m in exponent_units(G.order) for q in elements)


def brute_mimic_set(x: int, G: GroupSpec) -> set[int]:
    return {h for h in G.elements() if mimics(h, x, G)}


def mimic_set(g: int, G: GroupSpec) -> set[int]:
    """All of G for odd order, else the coset ``g G^2``."""
    if G.order % 2:
        return set(G.elements())
    return {g * z * z % G.p for z in G.elements()}


def _pick_k_odd(r: int) -> int:
    for k in range(2, r):
        if gcd(k, r) == 1 and gcd(k - 1, r) == 1:
            return k
    raise NoSuitableK(f"no k with k and k-1 both units mod {r}")


def _pick_k_even(r: int) -> int:
    for k in range(3, r, 2):
        if gcd(k, r) == 1 and gcd((k - 1) // 2, r) == 1:
            return k
    raise NoSuitableK(f"no odd k with k and (k-1)/2 both units mod {r}")


def mimic_witness(h: int, g: int, x: int, G: GroupSpec) -> ImitationSolution:
    """Build ``(m, q)`` with ``(h q)^(m-1) h == x``, where ``x`` encrypts ``g``."""
    p, r = G.p, G.order
    h, x = h % p, x % p
    if h not in mimic_set(g, G):
        raise NotAMimic(f"{h} does not mimic {g} in a group of order {r}")
    if h == x:
        return ImitationSolution(1, 1, h, x, p)
    x_inv = G.inv(x)
    if r % 2:
        k = _pick_k_odd(r)
        m = mod_inv(k, r)
        l = mod_inv(k - 1, r)
        q = G.pow(h * G.pow(x_inv, k), l)
    else:
        k = _pick_k_even(r)
        m = mod_inv(k, r)
        l = mod_inv((k - 1) // 2, r)
        roots = G.square_roots(G.pow(x_inv, k) * h)
        if not roots:
            raise NotAMimic(f"x^-k h is not a square; {x} is not an encryption of {g}")
        q = G.pow(roots[0], l)
    return ImitationSolution(m, q, h, x, p)


def group_dlog_bruteforce(base: int, target: int, G: GroupSpec) -> int:
    """Smallest ``n >= 1`` with ``base^n == target``, scanning up to the group order."""
    p, target = G.p, target % G.p
    acc = 1
    for n in range(1, G.order + 1):
        acc = acc * base % p
        if acc == target:
            return n
    raise NotFound(f"{target} is not a power of {base} mod {p}")


Oracle = Callable[[int], CiphertextBlock]
DlogSolver = Callable[[int, int, GroupSpec], int]


def pigeonhole_cost(index_space: int, G: GroupSpec) -> int:
    return comb(index_space + 1, 2) * G.order


@dataclass
class PigeonholeResult:
    exponent: int
    attempts: int
    candidates: int


def _consistent(n_cand: int, plaintexts: list[int], blocks: list[CiphertextBlock], G: GroupSpec) -> bool:
    """Whether ``c g^-n`` is a function of the block index, as ``p_i^(n-1)`` must be."""
    seen: dict[int, int] = {}
    for g, b in zip(plaintexts, blocks):
        w = b.body * G.pow(G.inv(g), n_cand) % G.p
        if seen.setdefault(b.index, w) != w:
            return False
    return True


def pigeonhole_attack(oracle: Oracle, G: GroupSpec, index_space: int, rng: random.Random,
                      group_dlog: DlogSolver = group_dlog_bruteforce, verify_queries: int | None = None,
                      retries: int = 5) -> PigeonholeResult:
    """Recover the encryption exponent when the index space is small.

    ``index_space + 1`` distinct chosen units force two queries onto the same
    sandwich value ``p``; for such a pair the ciphertext quotient equals
    ``(g_a / g_b)^n``, a group discrete log. Every pair is tried since the
    colliding one is unknown. Each candidate exponent is then checked on
    extra encryptions: ``c g^-n = p_i^(n-1)`` may depend on the index only.
    """
    if index_space > MAX_PIGEONHOLE_INDEX_SPACE:
        raise CostCapExceeded(pigeonhole_cost(index_space, G), pigeonhole_cost(MAX_PIGEONHOLE_INDEX_SPACE, G),
                              "pigeonhole attack")
    _check_cap(pigeonhole_cost(index_space, G), "pigeonhole attack")
    if index_space + 1 > G.order:
        raise ValueError("group too small for the requested number of distinct plaintexts")
    r = G.order
    n_verify = verify_queries if verify_queries is not None else max(4 * index_space, 16)
    elements = G.elements()
    total_candidates = 0
    plaintexts: list[int] = []
    sample: list[CiphertextBlock] = []
    for attempt in range(1, retries + 1):
        chosen = rng.sample(elements, index_space + 1)
        blocks = [oracle(g) for g in chosen]
        candidates: set[int] = set()
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                base = G.mul(chosen[a], G.inv(chosen[b]))
                quotient = G.mul(blocks[a].body, G.inv(blocks[b].body))
                try:
                    first = group_dlog(base, quotient, G)
                except NotFound:
                    continue
                step = multiplicative_order(base, G.p)
                candidates.update(e for e in range(first % step, r, step) if gcd(e, r) == 1)
        total_candidates += len(candidates)
        probes = [rng.choice(elements) for _ in range(n_verify)]
        plaintexts += chosen + probes
        sample += blocks + [oracle(g) for g in probes]
        survivors = sorted(c for c in candidates if _consistent(c, plaintexts, sample, G))
        if len(survivors) == 1:
            return PigeonholeResult(survivors[0], attempt, total_candidates)
    raise NotFound(f"no unique consistent exponent after {retries} attempts")


@dataclass(frozen=True)
class InversePairResult:
    sandwich_power_sq: int
    sandwich_power_candidates: tuple[int, ...]
    g_power_candidates: tuple[int, ...]


def inverse_pair_attack(block_g: CiphertextBlock, block_ginv: CiphertextBlock, g: int,
                        modulus: int) -> InversePairResult:
    """Exploit encryptions of ``g`` and ``g^-1`` under the same index.

    The body product is ``(p^(n-1))^2``; each square root is a candidate for
    ``p^(n-1)``, and ``c_g / p^(n-1)`` the matching candidate for ``g^n``.
    """
    if block_g.index != block_ginv.index:
        raise IndexMismatch(f"indices differ ({block_g.index} != {block_ginv.index}); attack does not apply")
    if gcd(g, modulus) != 1:
        raise ValueError(f"{g} is not a unit mod {modulus}")
    sq = block_g.body * block_ginv.body % modulus
    roots = tuple(w for w in range(1, modulus) if w * w % modulus == sq)
    g_pows = tuple(block_g.body * mod_inv(w, modulus) % modulus for w in roots if gcd(w, modulus) == 1)
    return InversePairResult(sq, roots, g_pows)


def double_encryption_quotient(first: CiphertextBlock, second: CiphertextBlock, modulus: int) -> int:
    """``(p_i / p_j)^(n-1)`` from two encryptions of the same plaintext; diagnostic only."""
    return first.body * mod_inv(second.body, modulus) % modulus

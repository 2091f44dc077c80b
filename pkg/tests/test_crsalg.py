import random
from itertools import product
from math import gcd

import pytest

from crsemi.crsalg import (
    ReesMatrixSemigroup,
    component_of,
    decompose,
    idempotent_of,
    monogenic_period,
    rees_multiply,
    rees_power,
    structure_map,
)
from crsemi.errors import EmptyComponent, NotInComponent, NotSquarefree, NotSubset, NotUnit
from crsemi.modmath import primes_up_to

# bit 0 is the smallest prime: for n = 15, bit 0 <-> 3 and bit 1 <-> 5
THREE, FIVE, BOTH = 0b01, 0b10, 0b11


def brute_components(n, primes):
    """Classify each k by gcd: S = primes not dividing k."""
    out = {}
    for k in range(n):
        key = frozenset(p for p in primes if gcd(k, p) == 1)
        out.setdefault(key, set()).add(k)
    return out


def test_decompose_15():
    d = decompose(15)
    assert d.component(0) == {0}
    assert d.component(THREE) == {5, 10}
    assert d.component(FIVE) == {3, 6, 9, 12}
    assert d.component(BOTH) == {1, 2, 4, 7, 8, 11, 13, 14}
    assert sum(len(c) for c in d.components.values()) == 15
    brute = brute_components(15, (3, 5))
    assert sorted(map(sorted, brute.values())) == sorted(map(sorted, d.components.values()))


def test_decompose_6_sizes():
    assert sorted(len(c) for c in decompose(6).components.values()) == [1, 1, 2, 2]


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (5, 7), (11, 13)])
def test_pq_has_four_components(p, q):
    assert len(decompose(p * q).components) == 4


def test_component_sizes_are_phi():
    from crsemi.modmath import euler_phi

    d = decompose(2 * 3 * 5 * 7)
    for mask, comp in d.components.items():
        expected = 1 if mask == 0 else euler_phi(d.part(mask))
        assert len(comp) == expected


def test_decompose_rejects_non_squarefree():
    with pytest.raises(NotSquarefree):
        decompose(12)


def test_component_of_examples():
    d = decompose(15)
    assert component_of(0, d) == 0
    assert component_of(7, d) == BOTH
    assert component_of(5, d) == THREE


def test_partition_exhaustive():
    for n in range(2, 3001):
        try:
            d = decompose(n)
        except NotSquarefree:
            continue
        seen = sum(len(c) for c in d.components.values())
        assert seen == n
        assert set().union(*d.components.values()) == set(range(n))


def test_idempotents():
    d = decompose(15)
    assert idempotent_of(BOTH, d) == 1
    assert idempotent_of(THREE, d) == 10
    assert idempotent_of(FIVE, d) == 6
    with pytest.raises(EmptyComponent):
        idempotent_of(0, d)
    for n in (6, 30, 105, 2 * 3 * 5 * 7 * 11):
        d = decompose(n)
        for mask in d.subsets():
            if mask:
                e = idempotent_of(mask, d)
                assert e * e % n == e
                assert all(e * x % n == x for x in d.component(mask))


def test_structure_map_examples():
    d = decompose(15)
    assert structure_map(7, BOTH, BOTH, d) == 7
    assert structure_map(7, BOTH, THREE, d) == 10
    assert 10 % 3 == 7 % 3
    for x in range(15):
        assert structure_map(x, component_of(x, d), 0, d) == 0
    with pytest.raises(NotInComponent):
        structure_map(5, BOTH, THREE, d)
    with pytest.raises(NotSubset):
        structure_map(5, THREE, FIVE, d)


@pytest.mark.parametrize("n", [6, 15, 30, 105])
def test_closure_and_strong_law(n):
    d = decompose(n)
    for x, y in product(range(n), repeat=2):
        s, t = component_of(x, d), component_of(y, d)
        assert component_of(x * y, d) == s & t
        assert x * y % n == structure_map(x, s, s & t, d) * structure_map(y, t, s & t, d) % n


@pytest.mark.parametrize("n", [30, 105])
def test_structure_map_composition(n):
    d = decompose(n)
    for x in range(n):
        s = component_of(x, d)
        for t in d.subsets():
            for u in d.subsets():
                if t & ~s or u & ~t:
                    continue
                assert structure_map(structure_map(x, s, t, d), t, u, d) == structure_map(x, s, u, d)


def test_large_modulus_classifies_without_materialising():
    n = 1009 * 1013
    d = decompose(n)
    with pytest.raises(ValueError):
        d.components
    assert component_of(1009 * 5, d) == 0b10


def test_rees_multiply_examples():
    group = ReesMatrixSemigroup.build(11, [[1]])
    a, b = group.element(0, 4, 0), group.element(0, 9, 0)
    assert rees_multiply(a, b, group).g == 4 * 9 % 11
    s = ReesMatrixSemigroup.build(7, [[1, 3], [5, 1]])
    x, y = s.element(1, 2, 0), s.element(1, 4, 1)
    # p[lambda=0][j=1] = 3
    assert rees_multiply(x, y, s) == s.element(1, 2 * 3 * 4 % 7, 1) == s.element(1, 3, 1)


def test_rees_associativity():
    rng = random.Random(3)
    for n in (7, 15, 30):
        units = [u for u in range(1, n) if gcd(u, n) == 1]
        s = ReesMatrixSemigroup.build(n, [[rng.choice(units) for _ in range(3)] for _ in range(2)])
        elems = list(s.elements())
        for _ in range(500):
            a, b, c = rng.choice(elems), rng.choice(elems), rng.choice(elems)
            assert rees_multiply(rees_multiply(a, b, s), c, s) == rees_multiply(a, rees_multiply(b, c, s), s)


def test_rees_power_examples():
    s = ReesMatrixSemigroup.build(7, [[3]])
    a = s.element(0, 2, 0)
    assert rees_power(a, 1, s) == a
    assert rees_power(a, 2, s).g == 5
    acc = a
    for k in range(2, 51):
        acc = rees_multiply(acc, a, s)
        assert rees_power(a, k, s) == acc


def test_sandwich_must_be_units():
    with pytest.raises(NotUnit):
        ReesMatrixSemigroup.build(15, [[3]])


def test_monogenic_period_examples():
    s = ReesMatrixSemigroup.build(7, [[3]])
    assert monogenic_period(s.element(0, 2, 0), s) == 2
    assert pow(6, 2, 7) * 2 % 7 == 2
    # g p = 1 gives an idempotent
    inv = ReesMatrixSemigroup.build(7, [[4]])
    assert monogenic_period(inv.element(0, 2, 0), inv) == 1


def test_period_divides_phi():
    for p in primes_up_to(61):
        for q in range(1, p):
            s = ReesMatrixSemigroup.build(p, [[q]])
            for g in range(p):
                assert (p - 1) % monogenic_period(s.element(0, g, 0), s) == 0


def test_period_is_minimal_brute():
    for n in (6, 10, 15, 21, 30):
        for p in (u for u in range(1, n) if gcd(u, n) == 1):
            s = ReesMatrixSemigroup.build(n, [[p]])
            for g in range(n):
                a = s.element(0, g, 0)
                t = next(t for t in range(1, n + 1) if rees_power(a, t + 1, s) == a)
                assert monogenic_period(a, s) == t


def test_monogenic_period_over_units_of_non_squarefree():
    s = ReesMatrixSemigroup.build(9, [[2]])
    a = s.element(0, 1, 0)
    assert monogenic_period(a, s) == 6
    assert rees_power(a, 7, s) == a
    with pytest.raises(NotSquarefree):
        monogenic_period(s.element(0, 3, 0), s)

import pytest

from minflows.errors import ResourceLimitError
from minflows.group_core import (
    DirectProduct,
    FinSet,
    FreeGroup,
    IntegerLattice,
    are_F_apart,
    ball,
    cyclic,
    greedy_max_spaced,
    group_from_spec,
    is_F_spaced,
    is_F_syndetic_in,
    set_inverse,
    set_product,
    singleton,
    symmetric3,
)

Z = IntegerLattice(1)


def zset(*xs):
    return FinSet(Z, xs)


def zint(a, b):
    return FinSet(Z, range(a, b + 1))


def test_canonical_order_on_z():
    assert ball(Z, 2).elements == (0, 1, -1, 2, -2)


def test_balls():
    assert ball(Z, 0) == zset(0)
    assert ball(Z, 5) == zint(-5, 5) and len(ball(Z, 5)) == 11
    assert len(ball(FreeGroup(2), 2)) == 17
    assert len(ball(IntegerLattice(2), 2)) == 13


def test_set_product_examples():
    S = zint(-3, 2)
    assert set_product(zset(0), S) == S
    assert set_product(zint(-1, 1), zint(-2, 2)) == zint(-3, 3)
    F1 = FreeGroup(1)
    a = F1.decode("a")
    A = F1.decode("A")
    assert set_product(FinSet(F1, [a, A]), FinSet(F1, [a])) == FinSet(F1, [F1.identity, F1.mul(a, a)])


def test_set_inverse_examples():
    assert set_inverse(zset(0)) == zset(0)
    assert set_inverse(zint(-3, 5)) == zint(-5, 3)
    S = ball(FreeGroup(2), 2)
    assert set_inverse(S) == S


def test_apart_and_spaced():
    F = zint(-1, 1)
    assert are_F_apart(F, 0, 3)
    assert not are_F_apart(F, 0, 2)
    assert not are_F_apart(F, 4, 4)
    assert is_F_spaced(zset(-3, 0, 3), F)
    assert not is_F_spaced(zset(0, 2), F)
    assert is_F_spaced(zset(7), F) and is_F_spaced(zset(), F)


def test_syndetic_examples():
    v = is_F_syndetic_in(zset(-3, 0, 3), zint(-5, 5), zint(-5, 5))
    assert v.ok and v.checked == 1
    v = is_F_syndetic_in(zset(0), zset(0), zint(-2, 2))
    assert not v.ok and v.witness == 1
    D = zint(-4, 4)
    assert is_F_syndetic_in(D, zint(-1, 1), D).ok
    with pytest.raises(ValueError):
        is_F_syndetic_in(zset(9), zset(0), D)


def test_greedy_examples():
    assert greedy_max_spaced(zint(-4, 4), zint(-1, 1), zset(0)) == zset(-3, 0, 3)
    assert greedy_max_spaced(zset(0), zint(-2, 2), zset(0)) == zset(0)
    assert greedy_max_spaced(zint(-12, 12), zint(-5, 5), zset(0)) == zset(-11, 0, 11)


def test_greedy_is_maximal():
    cands = zint(-15, 15)
    F = zint(-2, 2)
    R = greedy_max_spaced(cands, F, zset(0, 7))
    for c in cands:
        if c not in R:
            assert not is_F_spaced(R.elements + (c,), F)


def test_free_group_reduction():
    F2 = FreeGroup(2)
    w = F2.decode("abAB")
    assert F2.mul(w, F2.inv(w)) == F2.identity
    assert F2.encode(F2.mul(F2.decode("ab"), F2.decode("Ba"))) == "aa"


def test_finite_groups():
    C3 = cyclic(3)
    assert len(ball(C3, 5)) == 3
    S3 = symmetric3()
    assert len(ball(S3, 3)) == 6
    for g in (C3, S3):
        assert g.self_test() == []


def test_product_group_and_spec():
    G = group_from_spec({"family": "product", "factors": [{"family": "lattice", "dim": 1}, {"family": "cyclic", "order": 3}]})
    assert isinstance(G, DirectProduct)
    assert len(ball(G, 1)) == 5
    assert G.self_test() == []
    with pytest.raises(ValueError):
        group_from_spec({"family": "nope"})


def test_resource_cap():
    small = IntegerLattice(2, max_set_size=50)
    with pytest.raises(ResourceLimitError):
        ball(small, 10)


def test_finset_canonical_and_hashable():
    a = FinSet(Z, [3, -1, 0])
    b = FinSet(Z, [0, 3, -1])
    assert a == b and hash(a) == hash(b)
    assert a.elements == (0, -1, 3)
    assert (a | zset(5)) - zset(3) == zset(-1, 0, 5)
    assert singleton(Z) == zset(0)
    with pytest.raises(ValueError):
        FinSet(Z, [1.5])

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from minflows.asystem import build_system, check_system, replace, restrict
from minflows.exhaustion import build_exhaustion
from minflows.group_core import (
    DirectProduct,
    FinSet,
    FreeGroup,
    IntegerLattice,
    ball,
    cyclic,
    greedy_max_spaced,
    is_F_spaced,
    is_F_syndetic_in,
    set_inverse,
    set_product,
    symmetric3,
)
from minflows.subshift import FullShift, Part, Pattern, Print, check_part_extension, trial_rng
from minflows.suites import print_alpha
from oracles import syndetic_bruteforce

GROUPS = [IntegerLattice(1), IntegerLattice(2), FreeGroup(2), cyclic(4), symmetric3(), DirectProduct(IntegerLattice(1), cyclic(3))]


@st.composite
def group_and_elements(draw, count=3):
    G = draw(st.sampled_from(GROUPS))
    pool = ball(G, 2).elements
    return G, [draw(st.sampled_from(pool)) for _ in range(count)]


@st.composite
def group_and_sets(draw, count=3):
    G = draw(st.sampled_from(GROUPS))
    pool = ball(G, 2).elements
    sets = [FinSet(G, draw(st.lists(st.sampled_from(pool), min_size=1, max_size=5))) for _ in range(count)]
    return G, sets


@given(group_and_elements())
def test_associativity_and_inverses(data):
    G, (a, b, c) = data
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.inv(G.inv(a)) == a
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.decode(G.encode(a)) == a


@given(group_and_sets())
def test_set_algebra(data):
    G, (S, T, U) = data
    assert set_inverse(set_product(S, T)) == set_product(set_inverse(T), set_inverse(S))
    assert set_product(set_product(S, T), U) == set_product(S, set_product(T, U))
    assert set_inverse(set_inverse(S)) == S


@given(st.sets(st.integers(-12, 12), min_size=1, max_size=10), st.integers(0, 3), st.integers(0, 2))
def test_greedy_is_maximal_and_spaced(cands, r, seed_size):
    Z = IntegerLattice(1)
    F = ball(Z, r)
    seed = FinSet(Z, [0])
    if seed_size and 0 not in cands:
        cands.add(0)
    C = FinSet(Z, cands | {0})
    R = greedy_max_spaced(C, F, seed)
    assert 0 in R and is_F_spaced(R, F)
    for c in C:
        if c not in R:
            assert not is_F_spaced(R.elements + (c,), F)


@given(st.sets(st.integers(-10, 10), max_size=8), st.integers(0, 2), st.integers(0, 4))
def test_syndeticity_matches_bruteforce(S, r, w):
    Z = IntegerLattice(1)
    D = ball(Z, 6 + w)
    F = ball(Z, r)
    S = {x for x in S if x in D}
    assert is_F_syndetic_in(FinSet(Z, S), F, D).ok == syndetic_bruteforce(S, set(F), set(D))


@settings(deadline=None, max_examples=20)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_replace_restrict_identity(radii):
    Z = IntegerLattice(1)
    exh = build_exhaustion(Z, radii)
    n = len(radii) - 1
    sys = build_system(exh, n)
    for m in range(n):
        for g in sys.levels[m].elements[:3]:
            assert replace(sys, restrict(sys, g, m), g) == sys


@settings(deadline=None, max_examples=25)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.sampled_from([0, 1]))
def test_greedy_systems_satisfy_lemmas(radii, which):
    G = [IntegerLattice(1), DirectProduct(IntegerLattice(1), cyclic(2))][which]
    exh = build_exhaustion(G, radii)
    cert = check_system(build_system(exh, len(radii) - 1))
    assert cert.passed, cert.failures()


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_part_extension_random(seed, r):
    Z = IntegerLattice(1)
    C = ball(Z, r)
    n = len(set_product(set_inverse(C), C))
    rng = random.Random(seed)
    X = Part(C, n)
    target = rng.sample(range(-8, 9), rng.randint(1, 8))
    pins = {}
    for h in target[: rng.randint(0, len(target))]:
        pins[h] = rng.randrange(n)
        if not X.accepts(Pattern(Z, pins)):
            del pins[h]
    assert check_part_extension(C, n, Pattern(Z, pins), target)


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 10_000), st.integers(-5, 5))
def test_print_shift_invariance(seed, h):
    Z = IntegerLattice(1)
    C = ball(Z, 1)
    X = Print(FullShift(Z, [0, 1]), print_alpha(C), 5, FinSet(Z, [0]))
    y = X.complete([], ball(Z, 3), trial_rng(seed, "prop"))
    assert X.accepts(y.translate(h))

"""Exact arithmetic and finite-set calculus in concrete countable groups.

Four families are supported: integer lattices Z^d, free groups F_k, finite
groups given by a multiplication table, and direct products of two groups.
Every group carries a symmetric generating set and a canonical total order on
elements: word length first, ties broken by the lexicographically least
geodesic word over the generators (in the order they are listed).

Finite subsets are :class:`FinSet` values, stored sorted in canonical order so
that equality, hashing and iteration are reproducible.
"""
from __future__ import annotations

import string
from collections import deque
from itertools import islice
from typing import Any, Iterable, NamedTuple, Sequence

from .errors import GroupMismatchError, NotSpacedError, ResourceLimitError

DEFAULT_MAX_SET_SIZE = 2_000_000


class Group:
    """Common interface of the group families.

    Subclasses provide ``identity``, ``generators``, ``mul``, ``inv``,
    ``word``, ``is_element``, ``encode`` and ``decode``.
    """

    family = "abstract"
    identity: Any
    generators: tuple

    def __init__(self, max_set_size=DEFAULT_MAX_SET_SIZE):
        self.max_set_size = max_set_size

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def word(self, a) -> tuple[int, ...]:
        """Shortlex-least geodesic word for ``a`` as generator indices."""
        raise NotImplementedError

    def is_element(self, a) -> bool:
        raise NotImplementedError

    def encode(self, a):
        return a

    def decode(self, data):
        return data

    def key(self, a):
        w = self.word(a)
        return (len(w), w)

    def length(self, a) -> int:
        return len(self.word(a))

    def finset(self, elements=()) -> "FinSet":
        return FinSet(self, elements)

    def describe(self) -> dict:
        return {"family": self.family}

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"

    def self_test(self, samples: Sequence | None = None) -> list[str]:
        """Check the group axioms on sampled elements; returns a list of failures."""
        if samples is None:
            samples = list(ball(self, 2))
        samples = list(samples)[:12]
        e = self.identity
        failures = []
        if not self.is_element(e):
            failures.append("identity is not an element")
        gens = set(self.generators)
        if e in gens:
            failures.append("generating set contains the identity")
        for g in self.generators:
            if self.inv(g) not in gens:
                failures.append(f"generating set not symmetric at {g!r}")
        for a in samples:
            if self.mul(a, e) != a or self.mul(e, a) != a:
                failures.append(f"identity law fails at {a!r}")
            if self.mul(a, self.inv(a)) != e or self.mul(self.inv(a), a) != e:
                failures.append(f"inverse law fails at {a!r}")
            for b in samples:
                for c in samples[:6]:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        failures.append(f"associativity fails at {(a, b, c)!r}")
        return failures


class IntegerLattice(Group):
    """Z^d with standard generators +e_1, -e_1, +e_2, -e_2, ...

    Elements of Z (d = 1) are plain ints; for d > 1 they are int tuples.
    """

    family = "lattice"

    def __init__(self, dim=1, max_set_size=DEFAULT_MAX_SET_SIZE):
        super().__init__(max_set_size)
        if dim < 1:
            raise ValueError("lattice dimension must be positive")
        self.dim = dim
        if dim == 1:
            self.identity = 0
            self.generators = (1, -1)
        else:
            self.identity = (0,) * dim
            gens = []
            for j in range(dim):
                for s in (1, -1):
                    v = [0] * dim
                    v[j] = s
                    gens.append(tuple(v))
            self.generators = tuple(gens)

    def mul(self, a, b):
        if self.dim == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        if self.dim == 1:
            return -a
        return tuple(-x for x in a)

    def word(self, a):
        coords = (a,) if self.dim == 1 else a
        w = []
        for j, x in enumerate(coords):
            if x:
                w.extend([2 * j if x > 0 else 2 * j + 1] * abs(x))
        return tuple(w)

    def key(self, a):
        # same order as the generic word key, without building the word
        if self.dim == 1:
            return (abs(a), 0 if a >= 0 else 1)
        w = self.word(a)
        return (len(w), w)

    def length(self, a):
        return abs(a) if self.dim == 1 else sum(map(abs, a))

    def is_element(self, a):
        if self.dim == 1:
            return isinstance(a, int) and not isinstance(a, bool)
        return isinstance(a, tuple) and len(a) == self.dim and all(isinstance(x, int) for x in a)

    def encode(self, a):
        return a if self.dim == 1 else list(a)

    def decode(self, data):
        return int(data) if self.dim == 1 else tuple(int(x) for x in data)

    def describe(self):
        return {"family": self.family, "dim": self.dim}


class FreeGroup(Group):
    """Free group on ``rank`` generators; elements are reduced words.

    A word is a tuple of nonzero ints: ``i`` is the i-th generator and ``-i``
    its inverse. Generator order is a, a^-1, b, b^-1, ...
    """

    family = "free"

    def __init__(self, rank=2, max_set_size=DEFAULT_MAX_SET_SIZE):
        super().__init__(max_set_size)
        if not 1 <= rank <= 26:
            raise ValueError("free group rank must lie in 1..26")
        self.rank = rank
        self.identity = ()
        self.generators = tuple((s * i,) for i in range(1, rank + 1) for s in (1, -1))

    def mul(self, a, b):
        i = len(a)
        j = 0
        while i and j < len(b) and a[i - 1] == -b[j]:
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def word(self, a):
        return tuple(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in a)

    def length(self, a):
        return len(a)

    def is_element(self, a):
        if not isinstance(a, tuple):
            return False
        if any(not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in a):
            return False
        return all(a[i] != -a[i + 1] for i in range(len(a) - 1))

    def encode(self, a):
        letters = string.ascii_lowercase
        return "".join(letters[x - 1] if x > 0 else letters[-x - 1].upper() for x in a)

    def decode(self, data):
        w = ()
        for ch in data:
            x = string.ascii_letters.index(ch.lower()) + 1
            w = self.mul(w, (x if ch.islower() else -x,))
        return w

    def describe(self):
        return {"family": self.family, "rank": self.rank}


class FiniteGroup(Group):
    """Finite group given by a multiplication table over indices 0..n-1."""

    family = "finite"

    def __init__(self, table, generators, name=None, max_set_size=DEFAULT_MAX_SET_SIZE):
        super().__init__(max_set_size)
        self.table = [list(row) for row in table]
        n = len(self.table)
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square")
        ident = [i for i in range(n) if self.table[i] == list(range(n))]
        if not ident:
            raise ValueError("multiplication table has no identity")
        self.identity = ident[0]
        self._inverse = [self.table[i].index(self.identity) for i in range(n)]
        self.generators = tuple(generators)
        self.name = name
        # shortlex normal forms by breadth-first search in generator order
        words = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            a = queue.popleft()
            for gi, g in enumerate(self.generators):
                b = self.table[a][g]
                if b not in words:
                    words[b] = words[a] + (gi,)
                    queue.append(b)
        if len(words) != n:
            raise ValueError("generators do not generate the group")
        self._words = words

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inverse[a]

    def word(self, a):
        return self._words[a]

    def is_element(self, a):
        return isinstance(a, int) and 0 <= a < len(self.table)

    def describe(self):
        d = {"family": self.family, "order": len(self.table)}
        if self.name:
            d["name"] = self.name
        return d


def cyclic(order, max_set_size=DEFAULT_MAX_SET_SIZE) -> FiniteGroup:
    """C_n as a table group generated by 1 and -1."""
    if order < 2:
        raise ValueError("cyclic group order must be at least 2")
    table = [[(i + j) % order for j in range(order)] for i in range(order)]
    gens = [1] if order == 2 else [1, order - 1]
    return FiniteGroup(table, gens, name=f"C{order}", max_set_size=max_set_size)


def symmetric3(max_set_size=DEFAULT_MAX_SET_SIZE) -> FiniteGroup:
    """S_3 as permutations of (0, 1, 2), generated by two transpositions."""
    from itertools import permutations

    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    gens = [index[(1, 0, 2)], index[(0, 2, 1)]]
    return FiniteGroup(table, gens, name="S3", max_set_size=max_set_size)


class DirectProduct(Group):
    """G1 x G2 with generators (g, 1) for g in G1, then (1, g) for g in G2."""

    family = "product"

    def __init__(self, left: Group, right: Group, max_set_size=DEFAULT_MAX_SET_SIZE):
        super().__init__(max_set_size)
        self.left = left
        self.right = right
        self.identity = (left.identity, right.identity)
        self.generators = tuple((g, right.identity) for g in left.generators) + tuple(
            (left.identity, g) for g in right.generators
        )
        self._shift = len(left.generators)

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def word(self, a):
        return self.left.word(a[0]) + tuple(i + self._shift for i in self.right.word(a[1]))

    def is_element(self, a):
        return (
            isinstance(a, tuple)
            and len(a) == 2
            and self.left.is_element(a[0])
            and self.right.is_element(a[1])
        )

    def encode(self, a):
        return [self.left.encode(a[0]), self.right.encode(a[1])]

    def decode(self, data):
        return (self.left.decode(data[0]), self.right.decode(data[1]))

    def describe(self):
        return {"family": self.family, "factors": [self.left.describe(), self.right.describe()]}


def group_from_spec(spec: dict, max_set_size=DEFAULT_MAX_SET_SIZE) -> Group:
    """Build a group from a config table such as ``{"family": "lattice", "dim": 2}``."""
    family = spec.get("family")
    if family == "lattice":
        return IntegerLattice(int(spec.get("dim", 1)), max_set_size=max_set_size)
    if family == "free":
        return FreeGroup(int(spec.get("rank", 2)), max_set_size=max_set_size)
    if family == "cyclic":
        return cyclic(int(spec["order"]), max_set_size=max_set_size)
    if family == "finite":
        if spec.get("name") == "S3":
            return symmetric3(max_set_size=max_set_size)
        return FiniteGroup(spec["table"], spec["generators"], spec.get("name"), max_set_size=max_set_size)
    if family == "product":
        left, right = spec["factors"]
        return DirectProduct(
            group_from_spec(left, max_set_size), group_from_spec(right, max_set_size), max_set_size=max_set_size
        )
    raise ValueError(f"unknown group family {family!r}")


class FinSet:
    """Immutable finite subset of a group, sorted in canonical order."""

    __slots__ = ("group", "elements", "_members")

    def __init__(self, group: Group, elements: Iterable = (), *, check=True):
        members = elements if isinstance(elements, frozenset) else frozenset(elements)
        if len(members) > group.max_set_size:
            raise ResourceLimitError("finite set", len(members), group.max_set_size)
        if check:
            for a in members:
                if not group.is_element(a):
                    raise ValueError(f"{a!r} is not an element of {group!r}")
        self.group = group
        self._members = members
        self.elements = tuple(sorted(members, key=group.key))

    @classmethod
    def _trusted(cls, group, members):
        return cls(group, members, check=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self._members

    def __bool__(self):
        return bool(self.elements)

    def __eq__(self, other):
        if not isinstance(other, FinSet):
            return NotImplemented
        return self.group is other.group and self._members == other._members

    def __hash__(self):
        return hash(self._members)

    def __repr__(self):
        shown = ", ".join(repr(a) for a in islice(self.elements, 12))
        more = ", ..." if len(self.elements) > 12 else ""
        return f"FinSet({{{shown}{more}}}, size={len(self)})"

    @property
    def members(self) -> frozenset:
        return self._members

    def _same(self, other):
        if self.group is not other.group:
            raise GroupMismatchError("finite sets live in different groups")

    def issubset(self, other) -> bool:
        return self._members <= (other._members if isinstance(other, FinSet) else set(other))

    __le__ = issubset

    def __or__(self, other):
        self._same(other)
        return FinSet._trusted(self.group, self._members | other._members)

    def __and__(self, other):
        self._same(other)
        return FinSet._trusted(self.group, self._members & other._members)

    def __sub__(self, other):
        self._same(other)
        return FinSet._trusted(self.group, self._members - other._members)

    def right(self, g) -> "FinSet":
        """The right translate S*g."""
        mul = self.group.mul
        return FinSet._trusted(self.group, frozenset(mul(s, g) for s in self.elements))

    def left(self, g) -> "FinSet":
        """The left translate g*S."""
        mul = self.group.mul
        return FinSet._trusted(self.group, frozenset(mul(g, s) for s in self.elements))

    def is_symmetric(self) -> bool:
        inv = self.group.inv
        return all(inv(a) in self._members for a in self.elements)

    def encode(self) -> list:
        return [self.group.encode(a) for a in self.elements]


def ball(group: Group, radius: int) -> FinSet:
    """All elements of word length at most ``radius``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    seen = {group.identity}
    frontier = [group.identity]
    for _ in range(radius):
        nxt = []
        for a in frontier:
            for g in group.generators:
                b = group.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        if len(seen) > group.max_set_size:
            raise ResourceLimitError(f"ball of radius {radius}", len(seen), group.max_set_size)
        frontier = nxt
        if not frontier:
            break
    return FinSet._trusted(group, frozenset(seen))


def set_product(S: FinSet, T: FinSet) -> FinSet:
    """{s*t : s in S, t in T}."""
    S._same(T)
    group = S.group
    mul = group.mul
    cap = group.max_set_size
    out = set()
    for s in S.elements:
        out.update(mul(s, t) for t in T.elements)
        if len(out) > cap:
            raise ResourceLimitError("set product", len(out), cap)
    return FinSet._trusted(group, frozenset(out))


def product_chain(*sets: FinSet) -> FinSet:
    """Left-to-right product of at least one finite set."""
    result = sets[0]
    for T in sets[1:]:
        result = set_product(result, T)
    return result


def set_power(S: FinSet, k: int) -> FinSet:
    if k < 1:
        return FinSet._trusted(S.group, frozenset([S.group.identity]))
    return product_chain(*([S] * k))


def set_inverse(S: FinSet) -> FinSet:
    inv = S.group.inv
    return FinSet._trusted(S.group, frozenset(inv(s) for s in S.elements))


def singleton(group: Group, a=None) -> FinSet:
    return FinSet(group, [group.identity if a is None else a])


def are_F_apart(F: FinSet, g, h) -> bool:
    """True iff F*g and F*h are disjoint."""
    mul = F.group.mul
    Fg = {mul(f, g) for f in F.elements}
    return not any(mul(f, h) in Fg for f in F.elements)


def sets_apart(F: FinSet, S: Iterable, T: Iterable) -> bool:
    """True iff F*S and F*T are disjoint."""
    mul = F.group.mul
    FS = {mul(f, s) for s in S for f in F.elements}
    return not any(mul(f, t) in FS for t in T for f in F.elements)


def is_F_spaced(S: Iterable, F: FinSet) -> bool:
    """Every pair of distinct elements of S is F-apart.

    The translates F*s all have size |F|, so pairwise disjointness is the same
    as their union having |S|*|F| elements.
    """
    mul = F.group.mul
    covered = set()
    count = 0
    for s in S:
        count += 1
        covered.update(mul(f, s) for f in F.elements)
        if len(covered) != count * len(F):
            return False
    return True


class SyndeticVerdict(NamedTuple):
    ok: bool
    witness: Any  # a translate g with F*g inside D and missing S, or None
    checked: int  # number of translates g with F*g inside D


def is_F_syndetic_in(S: FinSet, F: FinSet, D: FinSet) -> SyndeticVerdict:
    """Whether every F*g contained in D meets S.

    Only g in f0^-1 * D can have F*g inside D (f0 any element of F), so the
    search is finite.
    """
    if not S.issubset(D):
        raise ValueError("S must be a subset of D")
    group = F.group
    if not F:
        return SyndeticVerdict(True, None, 0)
    mul = group.mul
    dm = D.members
    f0inv = group.inv(F.elements[0])
    checked = 0
    if len(F) > len(D):
        return SyndeticVerdict(True, None, 0)
    for d in D.elements:
        g = mul(f0inv, d)
        translate = [mul(f, g) for f in F.elements]
        if all(x in dm for x in translate):
            checked += 1
            if not any(x in S for x in translate):
                return SyndeticVerdict(False, g, checked)
    return SyndeticVerdict(True, None, checked)


def greedy_max_spaced(candidates: FinSet, F: FinSet, seeds: FinSet) -> FinSet:
    """Maximal F-spaced subset of ``candidates`` containing ``seeds``.

    Candidates are scanned in canonical order and kept whenever they stay
    F-apart from everything kept so far.
    """
    if not seeds.issubset(candidates):
        raise ValueError("seeds must be a subset of the candidates")
    if not is_F_spaced(seeds, F):
        raise NotSpacedError("seeds are not F-spaced")
    mul = F.group.mul
    chosen = set(seeds.elements)
    covered = {mul(f, s) for s in seeds.elements for f in F.elements}
    for c in candidates.elements:
        if c in chosen:
            continue
        Fc = [mul(f, c) for f in F.elements]
        if not any(x in covered for x in Fc):
            chosen.add(c)
            covered.update(Fc)
    return FinSet._trusted(F.group, frozenset(chosen))

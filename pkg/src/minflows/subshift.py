"""Finite-pattern machinery for subshifts over a group H.

Subshifts here are intensional. Each one knows its irreducibility radius
``D``, decides whether a finite pattern extends to a point (``accepts``),
and can extend pairwise D-apart accepted patterns to a common pattern on a
larger window (``complete``). Blending two patterns is a special case.

H acts by right shift, (h.x)(c) = x(ch). Pattern-valued symbols are
frozensets of G elements (the positions carrying a 1); G moves them by
right multiplication.
"""
from __future__ import annotations

import itertools
import random
from typing import Any, Callable, Iterable, Iterator, Mapping

from .certificates import Certificate, timed
from .errors import AlphabetError, BlendError, BudgetExceeded, TilingError
from .group_core import FinSet, Group, set_inverse, set_product, sets_apart, singleton


class Pattern:
    """A finite map support -> symbol on the group H."""

    __slots__ = ("group", "_values", "_support", "_hash")

    def __init__(self, group: Group, values: Mapping):
        self.group = group
        self._values = dict(values)
        self._support = None
        self._hash = None

    @property
    def support(self) -> FinSet:
        if self._support is None:
            self._support = FinSet(self.group, frozenset(self._values), check=False)
        return self._support

    def __getitem__(self, h):
        return self._values[h]

    def get(self, h, default=None):
        return self._values.get(h, default)

    def __contains__(self, h):
        return h in self._values

    def __len__(self):
        return len(self._values)

    def items(self):
        return [(h, self._values[h]) for h in self.support]

    def as_dict(self) -> dict:
        return dict(self._values)

    def restrict(self, S: Iterable) -> "Pattern":
        return Pattern(self.group, {h: self._values[h] for h in S})

    def map(self, f: Callable) -> "Pattern":
        return Pattern(self.group, {h: f(v) for h, v in self._values.items()})

    def translate(self, h) -> "Pattern":
        """h.p, defined on support * h^-1 by (h.p)(c) = p(c h)."""
        mul, hinv = self.group.mul, self.group.inv(h)
        return Pattern(self.group, {mul(x, hinv): v for x, v in self._values.items()})

    def merge(self, other: "Pattern") -> "Pattern":
        vals = dict(self._values)
        for h, v in other._values.items():
            if h in vals and vals[h] != v:
                raise BlendError(f"patterns disagree at {h!r}")
            vals[h] = v
        return Pattern(self.group, vals)

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self._values == other._values

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._values.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{h!r}: {v!r}" for h, v in self.items()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"Pattern({{{body}{more}}})"

    def encode(self, encode_symbol: Callable = lambda s: s) -> dict:
        items = self.items()
        return {
            "support": [self.group.encode(h) for h, _ in items],
            "values": [encode_symbol(v) for _, v in items],
        }


def merge_all(group: Group, patterns: Iterable[Pattern]) -> Pattern:
    out = Pattern(group, {})
    for p in patterns:
        out = out.merge(p)
    return out


def symbol_key(s, ggroup: Group | None = None):
    """A total order on symbols, used to list patterns reproducibly."""
    if isinstance(s, frozenset):
        keyf = ggroup.key if ggroup is not None else repr
        return (0, len(s), tuple(sorted(keyf(a) for a in s)))
    if isinstance(s, tuple):
        return (1, tuple(symbol_key(t, ggroup) for t in s))
    return (2, s)


def pattern_key(p: Pattern, ggroup: Group | None = None):
    return tuple(symbol_key(v, ggroup) for _, v in p.items())


class Subshift:
    """Base class; subclasses set ``kind``, ``radius`` and the methods below."""

    kind = "abstract"
    gsupport: FinSet | None = None  # set A when symbols are subsets of A
    ggroup: Group | None = None

    def __init__(self, group: Group, radius: FinSet):
        self.group = group
        self.radius = radius

    def is_symbol(self, s) -> bool:
        raise NotImplementedError

    def symbols(self) -> Iterator:
        raise NotImplementedError

    def symbol_count(self) -> int:
        raise NotImplementedError

    def random_symbol(self, rng: random.Random):
        raise NotImplementedError

    def encode_symbol(self, s):
        if isinstance(s, frozenset):
            g = self.ggroup
            return [g.encode(a) for a in sorted(s, key=g.key)]
        if isinstance(s, tuple):
            return [self.encode_symbol(t) for t in s]
        return s

    def _check_alphabet(self, p: Pattern):
        for h, v in p._values.items():
            if not self.is_symbol(v):
                raise AlphabetError(f"{self.kind}: symbol {v!r} at {h!r} is not in the alphabet")

    def accepts(self, p: Pattern) -> bool:
        self._check_alphabet(p)
        return self._accepts(p)

    def _accepts(self, p: Pattern) -> bool:
        raise NotImplementedError

    def complete(self, pieces: list[Pattern], target: Iterable, rng: random.Random | None = None) -> Pattern:
        """A pattern on ``target`` (and the pieces' supports) agreeing with
        every piece. Pieces must be accepted and pairwise D-apart."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind, "radius": self.radius.encode()}


def _targets(group, pieces, target) -> list:
    cells = set(target)
    for p in pieces:
        cells.update(p._values)
    return sorted(cells, key=group.key)


class FullShift(Subshift):
    """All configurations over a finite alphabet; D = {1}.

    With ``gsupport`` set the alphabet is the power set of that G-set.
    """

    kind = "full"

    def __init__(self, group: Group, symbols=None, *, gsupport: FinSet | None = None):
        super().__init__(group, singleton(group))
        if (symbols is None) == (gsupport is None):
            raise ValueError("give exactly one of symbols, gsupport")
        self._symbols = tuple(symbols) if symbols is not None else None
        if gsupport is not None:
            self.gsupport = gsupport
            self.ggroup = gsupport.group

    def is_symbol(self, s) -> bool:
        if self._symbols is not None:
            return s in self._symbols
        return isinstance(s, frozenset) and s <= self.gsupport.members

    def symbols(self):
        if self._symbols is not None:
            yield from self._symbols
            return
        A = self.gsupport.elements
        for k in range(len(A) + 1):
            for c in itertools.combinations(A, k):
                yield frozenset(c)

    def symbol_count(self) -> int:
        return len(self._symbols) if self._symbols is not None else 2 ** len(self.gsupport)

    def random_symbol(self, rng):
        if self._symbols is not None:
            return rng.choice(self._symbols)
        bits = rng.getrandbits(len(self.gsupport)) if len(self.gsupport) else 0
        return frozenset(a for i, a in enumerate(self.gsupport.elements) if bits >> i & 1)

    def _default(self):
        return self._symbols[0] if self._symbols is not None else frozenset()

    def _accepts(self, p):
        return True

    def complete(self, pieces, target, rng=None):
        base = merge_all(self.group, pieces).as_dict()
        for h in _targets(self.group, pieces, target):
            if h not in base:
                base[h] = self.random_symbol(rng) if rng is not None else self._default()
        return Pattern(self.group, base)

    def describe(self):
        d = super().describe()
        d["alphabet"] = self.symbol_count()
        return d


def powerset_shift(H: Group, A: FinSet) -> FullShift:
    """(2^A)^H."""
    return FullShift(H, gsupport=A)


def part_extend(C: FinSet, n: int, partial: Pattern, target: Iterable, rng: random.Random | None = None) -> Pattern:
    """Extend a coloring with C-spaced classes to ``target``.

    Cells are visited in canonical order; each takes the least legal color,
    or a uniformly random legal one when ``rng`` is given. With
    n >= |C^-1 C| a legal color always exists.
    """
    H = C.group
    mul = H.mul
    e = H.identity
    conflicts = [d for d in set_product(set_inverse(C), C) if d != e]
    colors = dict(partial.as_dict())
    for h, v in colors.items():
        if not (isinstance(v, int) and 0 <= v < n):
            raise AlphabetError(f"color {v!r} at {h!r} outside range({n})")
        if any(colors.get(mul(d, h)) == v for d in conflicts):
            raise BlendError(f"partial coloring is not valid at {h!r}")
    for h in _targets(H, [partial], target):
        if h in colors:
            continue
        used = {colors.get(mul(d, h)) for d in conflicts}
        legal = [k for k in range(n) if k not in used]
        if not legal:
            raise BlendError(f"greedy coloring stuck at {h!r}: all {n} colors blocked")
        colors[h] = rng.choice(legal) if rng is not None else legal[0]
    return Pattern(H, colors)


class Part(Subshift):
    """Colorings H -> range(n) whose color classes are C-spaced; D = C.

    Membership checks the local rule only, which is exact when
    n >= |C^-1 C| because valid patterns then always extend.
    """

    kind = "part"

    def __init__(self, C: FinSet, n: int):
        super().__init__(C.group, C)
        self.C = C
        self.n = n
        e = C.group.identity
        self._conflicts = [d for d in set_product(set_inverse(C), C) if d != e]

    def is_symbol(self, s):
        return isinstance(s, int) and not isinstance(s, bool) and 0 <= s < self.n

    def symbols(self):
        return iter(range(self.n))

    def symbol_count(self):
        return self.n

    def random_symbol(self, rng):
        return rng.randrange(self.n)

    def _accepts(self, p):
        mul = self.group.mul
        vals = p._values
        return not any(vals.get(mul(d, h)) == v for h, v in vals.items() for d in self._conflicts)

    def complete(self, pieces, target, rng=None):
        return part_extend(self.C, self.n, merge_all(self.group, pieces), _targets(self.group, pieces, target), rng)

    def describe(self):
        return {**super().describe(), "C": self.C.encode(), "colors": self.n}


class ProductShift(Subshift):
    """X_0 x ... x X_m over tuple symbols; D is the union of the factor radii."""

    kind = "product"

    def __init__(self, factors: list[Subshift]):
        if not factors:
            raise ValueError("empty product")
        H = factors[0].group
        D = factors[0].radius
        for f in factors[1:]:
            D = D | f.radius
        super().__init__(H, D)
        self.factors = list(factors)

    def is_symbol(self, s):
        return isinstance(s, tuple) and len(s) == len(self.factors) and all(f.is_symbol(t) for f, t in zip(self.factors, s))

    def symbols(self):
        return itertools.product(*(f.symbols() for f in self.factors))

    def symbol_count(self):
        out = 1
        for f in self.factors:
            out *= f.symbol_count()
        return out

    def random_symbol(self, rng):
        return tuple(f.random_symbol(rng) for f in self.factors)

    def coordinate(self, p: Pattern, i: int) -> Pattern:
        return p.map(lambda s: s[i])

    def _accepts(self, p):
        return all(f._accepts(self.coordinate(p, i)) for i, f in enumerate(self.factors))

    def complete(self, pieces, target, rng=None):
        cells = _targets(self.group, pieces, target)
        parts = [f.complete([self.coordinate(pc, i) for pc in pieces], cells, rng) for i, f in enumerate(self.factors)]
        return Pattern(self.group, {h: tuple(q[h] for q in parts) for h in cells})

    def describe(self):
        return {**super().describe(), "factors": [f.describe() for f in self.factors]}


class TiledProduct(Subshift):
    """Product of pattern-valued factors with disjoint G-supports.

    A symbol is one subset of the union of the supports; factor i sees its
    intersection with support i.
    """

    kind = "tiled"

    def __init__(self, factors: list[Subshift], H: Group | None = None, G: Group | None = None, label=None):
        if not factors and (H is None or G is None):
            raise ValueError("an empty tiled product needs both groups")
        H = H or factors[0].group
        G = G or factors[0].ggroup
        D = singleton(H)
        seen: set = set()
        for f in factors:
            if f.gsupport is None:
                raise AlphabetError(f"{f.kind} factor is not pattern-valued")
            overlap = seen & f.gsupport.members
            if overlap:
                w = min(overlap, key=G.key)
                raise TilingError(f"factor supports overlap at {w!r}", witness=G.encode(w))
            seen |= f.gsupport.members
            D = D | f.radius
        super().__init__(H, D)
        self.factors = list(factors)
        self.ggroup = G
        self.gsupport = FinSet(G, frozenset(seen), check=False)
        self.label = label
        self._supports = [f.gsupport.members for f in factors]

    def is_symbol(self, s):
        return isinstance(s, frozenset) and s <= self.gsupport.members

    def symbols(self):
        for combo in itertools.product(*(f.symbols() for f in self.factors)):
            yield frozenset().union(*combo)

    def symbol_count(self):
        out = 1
        for f in self.factors:
            out *= f.symbol_count()
        return out

    def random_symbol(self, rng):
        return frozenset().union(*(f.random_symbol(rng) for f in self.factors))

    def coordinate(self, p: Pattern, i: int) -> Pattern:
        sup = self._supports[i]
        return p.map(lambda s: s & sup)

    def _accepts(self, p):
        return all(f._accepts(self.coordinate(p, i)) for i, f in enumerate(self.factors))

    def complete(self, pieces, target, rng=None):
        cells = _targets(self.group, pieces, target)
        parts = [f.complete([self.coordinate(pc, i) for pc in pieces], cells, rng) for i, f in enumerate(self.factors)]
        return Pattern(self.group, {h: frozenset().union(*(q[h] for q in parts)) for h in cells})

    def describe(self):
        d = {**super().describe(), "gsupport_size": len(self.gsupport), "factors": [f.describe() for f in self.factors]}
        if self.label:
            d["label"] = self.label
        return d


def _shift_symbol(G: Group, s: frozenset, g) -> frozenset:
    mul = G.mul
    return frozenset(mul(a, g) for a in s)


class Pullback(Subshift):
    """The base subshift carried from 2^A to 2^(A g): s in 2^(A g) is read
    by the base as s g^-1."""

    kind = "pullback"

    def __init__(self, base: Subshift, g):
        if base.gsupport is None:
            raise AlphabetError(f"cannot pull back a {base.kind} subshift: alphabet is not pattern-valued")
        super().__init__(base.group, base.radius)
        self.base = base
        self.ggroup = base.ggroup
        self.g = g
        self._ginv = self.ggroup.inv(g)
        self.gsupport = base.gsupport.right(g)

    def to_base(self, s):
        return _shift_symbol(self.ggroup, s, self._ginv)

    def from_base(self, s):
        return _shift_symbol(self.ggroup, s, self.g)

    def is_symbol(self, s):
        return isinstance(s, frozenset) and s <= self.gsupport.members

    def symbols(self):
        return (self.from_base(s) for s in self.base.symbols())

    def symbol_count(self):
        return self.base.symbol_count()

    def random_symbol(self, rng):
        return self.from_base(self.base.random_symbol(rng))

    def _accepts(self, p):
        return self.base._accepts(p.map(self.to_base))

    def complete(self, pieces, target, rng=None):
        out = self.base.complete([pc.map(self.to_base) for pc in pieces], target, rng)
        return out.map(self.from_base)

    def describe(self):
        return {**super().describe(), "g": self.ggroup.encode(self.g), "base": self.base.describe()}


def pullback(X: Subshift, g) -> Pullback:
    return Pullback(X, g)


class Print(Subshift):
    """N-tuples of points of ``base`` printing ``alpha`` along a partition.

    Membership asks for a coloring gamma with DC-spaced classes such that
    coordinate gamma(h) shows alpha on C h. For a finite pattern on S, gamma
    only matters on R(S) = (DC)^-1 D S: farther patches are D-apart from S
    and from each other, so they can always be blended in. The search is a
    backtracking search over gamma on R(S); at each leaf every coordinate,
    augmented with its alpha patches, must be accepted by the base.
    """

    kind = "print"

    def __init__(self, base: Subshift, alpha: Pattern, N: int, D: FinSet):
        H = base.group
        C = alpha.support
        if not base.accepts(alpha):
            raise ValueError("alpha is not a pattern of the base subshift")
        self.base = base
        self.alpha = alpha
        self.C = C
        self.N = N
        self.D = D
        self.DC = set_product(D, C)
        DCinv = set_inverse(self.DC)
        super().__init__(H, set_product(set_product(self.DC, DCinv), D))
        self.ggroup = base.ggroup
        self._reach = set_product(DCinv, D).elements  # R(S) = reach * S
        e = H.identity
        self._conflicts = [d for d in set_product(DCinv, self.DC) if d != e]
        self._cache: dict[Pattern, dict | None] = {}

    def is_symbol(self, s):
        return isinstance(s, tuple) and len(s) == self.N and all(self.base.is_symbol(t) for t in s)

    def symbols(self):
        return itertools.product(*(self.base.symbols() for _ in range(self.N)))

    def symbol_count(self):
        return self.base.symbol_count() ** self.N

    def random_symbol(self, rng):
        return tuple(self.base.random_symbol(rng) for _ in range(self.N))

    def coordinate(self, p: Pattern, i: int) -> Pattern:
        return p.map(lambda s: s[i])

    def patch(self, h) -> dict:
        """alpha placed on C h: the cell c h carries alpha(c)."""
        mul = self.group.mul
        return {mul(c, h): v for c, v in self.alpha._values.items()}

    def region(self, S: Iterable) -> list:
        mul = self.group.mul
        return sorted({mul(x, s) for s in S for x in self._reach}, key=self.group.key)

    def _augmented(self, p: Pattern, gamma: Mapping, i: int) -> Pattern:
        vals = {h: s[i] for h, s in p._values.items()}
        for h, col in gamma.items():
            if col == i:
                for x, v in self.patch(h).items():
                    if vals.get(x, v) != v:
                        raise BlendError(f"alpha patch at {h!r} clashes at {x!r}")
                    vals[x] = v
        return Pattern(self.group, vals)

    def witness(self, p: Pattern) -> dict | None:
        """A partition gamma on R(support) witnessing membership, or None."""
        if p in self._cache:
            return self._cache[p]
        result = self._search(p)
        if len(self._cache) > 4096:
            self._cache.clear()
        self._cache[p] = result
        return result

    def _search(self, p: Pattern) -> dict | None:
        H = self.group
        mul = H.mul
        vals = p._values
        R = self.region(vals)
        Rset = set(R)
        alpha = self.alpha._values
        domains: dict[Any, set] = {}
        for h in R:
            allowed = set(range(self.N))
            for c, a in alpha.items():
                x = mul(c, h)
                if x in vals:
                    allowed = {i for i in allowed if vals[x][i] == a}
            domains[h] = allowed
        nbrs = {h: [mul(d, h) for d in self._conflicts if mul(d, h) in Rset] for h in R}

        def leaf(gamma):
            try:
                return all(self.base._accepts(self._augmented(p, gamma, i)) for i in range(self.N))
            except BlendError:
                return False

        def dfs(gamma, doms):
            if len(gamma) == len(R):
                return dict(gamma) if leaf(gamma) else None
            # most constrained cell first, canonical order breaks ties
            h = min((x for x in R if x not in gamma), key=lambda x: len(doms[x]))
            for col in sorted(doms[h]):
                changed = []
                ok = True
                for y in nbrs[h]:
                    if y not in gamma and col in doms[y]:
                        doms[y].discard(col)
                        changed.append(y)
                        if not doms[y]:
                            ok = False
                            break
                if ok:
                    gamma[h] = col
                    found = dfs(gamma, doms)
                    if found is not None:
                        return found
                    del gamma[h]
                for y in changed:
                    doms[y].add(col)
            return None

        if any(not d for d in domains.values()):
            return None
        return dfs({}, domains)

    def _accepts(self, p):
        if not all(self.base._accepts(self.coordinate(p, i)) for i in range(self.N)):
            return False
        return self.witness(p) is not None

    def complete(self, pieces, target, rng=None):
        H = self.group
        witnesses = []
        for pc in pieces:
            w = self.witness(pc)
            if w is None:
                raise BlendError("a piece is not a Print pattern")
            witnesses.append(w)
        # blend the partitions: the pinned regions are DC-apart
        pinned = merge_all(H, [Pattern(H, w) for w in witnesses])
        cells = _targets(H, pieces, target)
        region = self.region(cells)
        gamma = part_extend(self.DC, self.N, pinned, region, rng)
        coords = []
        for i in range(self.N):
            bits = []
            for pc, w in zip(pieces, witnesses):
                bits.append(self._augmented(pc, w, i))
            covered = set(pinned._values)
            for h in region:
                if h not in covered and gamma[h] == i:
                    bits.append(Pattern(H, self.patch(h)))
            z = self.base.complete(bits, cells, rng)
            coords.append(z)
        return Pattern(H, {h: tuple(z[h] for z in coords) for h in cells})

    def describe(self):
        return {
            **super().describe(),
            "C": self.C.encode(),
            "D": self.D.encode(),
            "N": self.N,
            "alpha": self.alpha.encode(self.base.encode_symbol),
            "base": self.base.describe(),
        }


class PhiImage(Subshift):
    """Image of a Print over 2^A under (x_j) -> (g_j^-1 x_j): symbols are
    subsets of the union of the A g_j, coordinate j read back as
    (s ∩ A g_j) g_j^-1."""

    kind = "phi_image"

    def __init__(self, printed: Print, translators: list, label=None):
        A = printed.base.gsupport
        if A is None:
            raise AlphabetError("Print base is not pattern-valued")
        if len(translators) != printed.N:
            raise ValueError(f"need {printed.N} translators, got {len(translators)}")
        super().__init__(printed.group, printed.radius)
        G = A.group
        self.printed = printed
        self.ggroup = G
        self.translators = list(translators)
        self.label = label
        self._blocks = [A.right(g).members for g in self.translators]
        seen: set = set()
        for b in self._blocks:
            if seen & b:
                raise TilingError("translates A g_j overlap")
            seen |= b
        self.gsupport = FinSet(G, frozenset(seen), check=False)
        self._inv = [G.inv(g) for g in self.translators]

    def to_tuple(self, s):
        G = self.ggroup
        return tuple(_shift_symbol(G, s & b, gi) for b, gi in zip(self._blocks, self._inv))

    def from_tuple(self, t):
        G = self.ggroup
        return frozenset().union(*(_shift_symbol(G, w, g) for w, g in zip(t, self.translators)))

    def is_symbol(self, s):
        return isinstance(s, frozenset) and s <= self.gsupport.members

    def symbols(self):
        return (self.from_tuple(t) for t in self.printed.symbols())

    def symbol_count(self):
        return self.printed.symbol_count()

    def random_symbol(self, rng):
        return self.from_tuple(self.printed.random_symbol(rng))

    def _accepts(self, p):
        return self.printed._accepts(p.map(self.to_tuple))

    def complete(self, pieces, target, rng=None):
        out = self.printed.complete([pc.map(self.to_tuple) for pc in pieces], target, rng)
        return out.map(self.from_tuple)

    def describe(self):
        d = {
            **super().describe(),
            "translators": [self.ggroup.encode(g) for g in self.translators],
            "print": self.printed.describe(),
        }
        if self.label:
            d["label"] = self.label
        return d


def pattern_membership(X: Subshift, p: Pattern) -> bool:
    return X.accepts(p)


def blend(X: Subshift, p0: Pattern, p1: Pattern, target: Iterable, rng: random.Random | None = None, radius: FinSet | None = None) -> Pattern:
    """A pattern on ``target`` agreeing with p0 and p1, re-checked on exit.

    ``radius`` overrides the apartness test (used by negative controls).
    """
    D = X.radius if radius is None else radius
    if not sets_apart(D, p0._values, p1._values):
        raise BlendError("supports are not D-apart")
    for p in (p0, p1):
        if not X.accepts(p):
            raise BlendError("an input pattern is not accepted")
    out = X.complete([p0, p1], target, rng)
    for p in (p0, p1):
        if any(out.get(h) != v for h, v in p._values.items()):
            raise BlendError("blend output disagrees with an input")
    if not X.accepts(out):
        raise BlendError("blend output is not accepted")
    return out


def pattern_set(X: Subshift, C: FinSet, budget: int) -> list[Pattern]:
    """All C-patterns of X, each confirmed to extend over a one-radius collar."""
    count = X.symbol_count() ** len(C)
    if count > budget:
        raise BudgetExceeded(f"pattern set on {len(C)} cells", count, budget)
    H = X.group
    collar = set_product(set_product(set_inverse(X.radius), X.radius), C)
    cells = C.elements
    out = []
    symbols = list(X.symbols())
    for combo in itertools.product(symbols, repeat=len(cells)):
        p = Pattern(H, dict(zip(cells, combo)))
        if not X.accepts(p):
            continue
        try:
            ext = X.complete([p], collar)
        except BlendError:
            continue
        if X.accepts(ext):
            out.append(p)
    out.sort(key=lambda p: pattern_key(p, X.ggroup))
    return out


def _nearest_apart(H: Group, D: FinSet, S0: Iterable, window: FinSet) -> tuple[list, list]:
    S0 = list(S0)
    cand = [x for x in window if sets_apart(D, S0, [x])]
    if not cand:
        return [], []
    dist = {x: min(H.length(H.mul(x, H.inv(s))) for s in S0) for x in cand}
    m = min(dist.values())
    return cand, [x for x in cand if dist[x] == m]


def random_apart_supports(X: Subshift, window: FinSet, rng: random.Random, D: FinSet, max_size=3):
    """Two nonempty D-apart subsets of ``window``; half the time the second
    hugs the apartness boundary."""
    H = X.group
    elems = window.elements
    for _ in range(50):
        k0 = rng.randint(1, max_size)
        c0 = rng.choice(elems)
        near = [x for x in elems if H.length(H.mul(x, H.inv(c0))) <= max_size]
        S0 = rng.sample(near, min(k0, len(near)))
        cand, boundary = _nearest_apart(H, D, S0, window)
        if not cand:
            continue
        pool = boundary if rng.random() < 0.5 else cand
        first = rng.choice(pool)
        S1 = [first]
        for _ in range(rng.randint(0, max_size - 1)):
            nxt = [x for x in cand if x not in S1 and H.length(H.mul(x, H.inv(first))) <= max_size]
            if not nxt:
                break
            S1.append(rng.choice(nxt))
        return S0, S1
    raise BlendError("window too small for two D-apart supports")


def trial_rng(seed: int, *parts) -> random.Random:
    return random.Random(":".join(str(x) for x in (seed,) + parts))


def check_irreducible(X: Subshift, trials: int, window: FinSet, seed: int, radius: FinSet | None = None, label=None) -> Certificate:
    """Blend random pairs of D-apart sample patterns inside ``window``."""
    D = X.radius if radius is None else radius
    cert = Certificate(
        "irreducible",
        params={
            "subshift": label or X.kind,
            "trials": trials,
            "window": window.encode(),
            "radius": D.encode(),
            "declared_radius": X.radius.encode(),
        },
        seed=seed,
    )
    if trials == 0:
        cert.notes.append("warning: zero trials, vacuous pass")
    passed = 0
    with timed(cert):
        for t in range(trials):
            rng = trial_rng(seed, "irreducible", t)
            try:
                y0 = X.complete([], window, rng)
                y1 = X.complete([], window, rng)
                S0, S1 = random_apart_supports(X, window, rng, D)
                p0, p1 = y0.restrict(S0), y1.restrict(S1)
            except BlendError as exc:
                cert.record("sampling", False, {"trial": t, "error": str(exc)})
                continue
            try:
                blend(X, p0, p1, window, rng, radius=D)
                ok, err = True, None
            except BlendError as exc:
                ok, err = False, str(exc)
            if ok:
                passed += 1
            cert.record(
                "blend",
                ok,
                None if ok else {"trial": t, "p0": p0.encode(X.encode_symbol), "p1": p1.encode(X.encode_symbol), "error": err},
            )
        cert.results.setdefault("blend", True)
        cert.params["passed"] = passed
    return cert


def check_shift_invariance(X: Subshift, window: FinSet, shifts: Iterable, seed: int, samples=5) -> Certificate:
    """Accepted samples stay accepted after right-translation."""
    cert = Certificate("shift_invariance", params={"subshift": X.kind, "samples": samples}, seed=seed)
    H = X.group
    with timed(cert):
        for t in range(samples):
            y = X.complete([], window, trial_rng(seed, "shift", t))
            for h in shifts:
                moved = y.translate(h)
                cert.record("translate", X.accepts(moved), {"sample": t, "h": H.encode(h)})
    return cert


def check_part_extension(C: FinSet, n: int, partial: Pattern, target: Iterable) -> bool:
    """Whether greedy extension succeeds and is valid and keeps the pins."""
    try:
        out = part_extend(C, n, partial, target)
    except BlendError:
        return False
    X = Part(C, n)
    return X.accepts(out) and all(out[h] == v for h, v in partial.items()) and set(target) <= set(out._values)

"""Systems of spaced level sets inside an exhaustion, and their surgeries.

A system of height n has levels S(0), ..., S(n) inside A_n with S(n) = {1}.
Working downwards, S(k) is a maximal A_k-spaced subset of the k-admissible
elements Ad(k, S). Greedy choices scan candidates in canonical group order.

``restrict`` and ``replace`` cut out and paste in sub-systems; iterating
``replace`` over the top-level strips of a greedy system produces uniform
systems, and the tower of those is a :class:`CoherentSequence`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .certificates import Certificate, timed
from .exhaustion import Exhaustion, power_syndetic
from .group_core import FinSet, greedy_max_spaced, is_F_spaced, set_product, singleton

GENERAL_AD_NOTE = (
    "general admissibility checked for g with A_k*g meeting A_m*S(m) "
    "(nonempty intersection), not for disjoint A_k*g"
)


class ASystem:
    """Levels S(0..n) over an exhaustion; Ad(k) is cached lazily."""

    def __init__(self, exh: Exhaustion, levels, admissible: dict | None = None):
        self.exh = exh
        self.levels: tuple[FinSet, ...] = tuple(levels)
        if self.height > exh.max_level:
            raise ValueError(f"height {self.height} exceeds exhaustion level {exh.max_level}")
        self._ad: dict[int, FinSet] = dict(admissible or {})

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, k) -> FinSet:
        return self.levels[k]

    def admissible(self, k: int) -> FinSet:
        if not 0 <= k < self.height:
            raise IndexError(f"Ad({k}) undefined for height {self.height}")
        if k not in self._ad:
            self._ad[k] = admissible_set(self.exh, self.levels, self.height, k)
        return self._ad[k]

    def __eq__(self, other):
        if not isinstance(other, ASystem):
            return NotImplemented
        return self.exh is other.exh and self.levels == other.levels

    def __hash__(self):
        return hash(self.levels)

    def __repr__(self):
        return f"ASystem(height={self.height}, sizes={[len(L) for L in self.levels]})"

    def to_record(self) -> dict:
        return {"height": self.height, "levels": [L.encode() for L in self.levels]}


def admissible_set(exh: Exhaustion, levels, n: int, k: int) -> FinSet:
    """Ad(k, S): the g in A_n whose A_k-neighbourhood sits inside A_ell(k)*h,
    ell being the first level above k that A_k*g touches."""
    if not 0 <= k < n:
        raise IndexError("admissible_set needs 0 <= k < n")
    if len(levels) != n + 1 or any(levels[j] is None for j in range(k + 1, n + 1)):
        raise ValueError(f"levels {k + 1}..{n} must be set before computing Ad({k})")
    group = exh.group
    mul, inv = group.mul, group.inv
    Ak = exh.A[k].elements
    covers = []
    for ell in range(k + 1, n + 1):
        # x -> the h in S(ell) with x in A_ell*h
        cover: dict[Any, list] = {}
        for h in levels[ell]:
            for a in exh.A[ell]:
                cover.setdefault(mul(a, h), []).append(h)
        covers.append((cover, exh.window(ell, k).members))
    out = []
    for g in exh.A[n]:
        Akg = [mul(a, g) for a in Ak]
        for cover, W in covers:
            hits = {h for x in Akg for h in cover.get(x, ())}
            if hits:
                if any(all(mul(x, inv(h)) in W for x in Akg) for h in hits):
                    out.append(g)
                break
    return FinSet(group, out, check=False)


def build_system(exh: Exhaustion, n: int) -> ASystem:
    """The greedy system of height n, built by reverse induction."""
    if not 0 <= n <= exh.max_level:
        raise ValueError(f"height {n} outside 0..{exh.max_level}")
    e = singleton(exh.group)
    levels: list[FinSet | None] = [None] * (n + 1)
    levels[n] = e
    ad = {}
    for k in range(n - 1, -1, -1):
        ad[k] = admissible_set(exh, levels, n, k)
        if exh.group.identity not in ad[k]:
            raise AssertionError(f"identity not {k}-admissible")
        levels[k] = greedy_max_spaced(ad[k], exh.A[k], e)
    return ASystem(exh, levels, ad)


def trivial_system(exh: Exhaustion) -> ASystem:
    return ASystem(exh, [singleton(exh.group)])


def _admissible_literal(exh: Exhaustion, levels, n: int, k: int) -> FinSet:
    """Direct transcription of the admissibility rule, used as an oracle.

    Materialises A_ell*S(ell) and every translate A_ell(k)*h rather than
    using the cover map of :func:`admissible_set`.
    """
    group = exh.group
    mul = group.mul
    Ak = exh.A[k]
    per_level = []
    for ell in range(k + 1, n + 1):
        reach = set_product(exh.A[ell], levels[ell]).members
        translates = [exh.window(ell, k).right(h).members for h in levels[ell]]
        per_level.append((reach, translates))
    out = []
    for g in exh.A[n]:
        Akg = {mul(a, g) for a in Ak}
        for reach, translates in per_level:
            if not Akg.isdisjoint(reach):
                if any(Akg <= t for t in translates):
                    out.append(g)
                break
    return FinSet(group, out, check=False)


def check_system(sys: ASystem) -> Certificate:
    """Re-derive a system's defining conditions and the lemmas about it."""
    exh = sys.exh
    group = exh.group
    enc = group.encode
    mul = group.mul
    e = group.identity
    n = sys.height
    cert = Certificate("system", params={"height": n, "sizes": [len(L) for L in sys.levels]})
    cert.notes.append(GENERAL_AD_NOTE)
    with timed(cert):
        cert.record("top_level", sys.levels[n] == singleton(group), {"level": sys.levels[n].encode()})
        for k in range(n - 1, -1, -1):
            Sk = sys.levels[k]
            Ak = exh.A[k]
            ad = _admissible_literal(exh, sys.levels, n, k)
            if k in sys._ad:
                diff = ad.members ^ sys._ad[k].members
                cert.record(
                    "admissible_oracle", not diff, {"k": k, "element": enc(min(diff, key=group.key))} if diff else None
                )
            cert.record("identity_admissible", e in ad, {"k": k})
            cert.record("identity_in_level", e in Sk, {"k": k})
            outside = Sk.members - ad.members
            cert.record(
                "level_admissible", not outside, {"k": k, "element": enc(min(outside, key=group.key))} if outside else None
            )
            cert.record("spaced", is_F_spaced(Sk, Ak), {"k": k})
            addable = next((c for c in ad if c not in Sk and is_F_spaced(Sk.elements + (c,), Ak)), None)
            cert.record("maximal", addable is None, None if addable is None else {"k": k, "element": enc(addable)})

            # general admissibility (nonempty-intersection reading)
            for m in range(k + 1, n + 1):
                reach = set_product(exh.A[m], sys.levels[m]).members
                translates = [(b, exh.window(m, k).right(b).members) for b in sys.levels[m]]
                for g in ad:
                    Akg = {mul(a, g) for a in Ak}
                    if Akg.isdisjoint(reach):
                        continue
                    ok = any(Akg <= t for _, t in translates)
                    if not cert.record("general_admissible", ok, {"k": k, "m": m, "g": enc(g)}):
                        break

            # admissible elements see S(k) within A_k^2
            Ak2 = exh.power(k, 2)
            for g in ad:
                if not cert.record("admissible_syndetic", any(mul(f, g) in Sk for f in Ak2), {"k": k, "g": enc(g)}):
                    break

            # the shell A_k^2 A_ell(k+1) h minus A_k A_ell(k+1) h is admissible
            for ell in range(k + 1, n + 1):
                W = exh.window(ell, k + 1)
                shell = set_product(Ak2, W).members - set_product(Ak, W).members
                for h in sys.levels[ell]:
                    bad = next((x for x in (mul(s, h) for s in shell) if x not in ad), None)
                    if not cert.record(
                        "inside_admissible", bad is None, None if bad is None else {"k": k, "ell": ell, "h": enc(h), "element": enc(bad)}
                    ):
                        break

            verdict = power_syndetic(exh, Sk, k, 5, exh.A[n])
            cert.record("syndetic_A_k^5", verdict.ok, {"k": k, "g": enc(verdict.witness)} if not verdict.ok else None)
            cert.params.setdefault("syndetic_translates_checked", {})[k] = verdict.checked
    return cert


def _restricted_levels(sys: ASystem, g, m: int) -> list[FinSet]:
    group = sys.exh.group
    mul = group.mul
    ginv = group.inv(g)
    Amg = sys.exh.A[m].right(g).members
    return [FinSet(group, [mul(x, ginv) for x in sys.levels[k] if x in Amg], check=False) for k in range(m + 1)]


def restrict(sys: ASystem, g, m: int) -> ASystem:
    """(g*S)|_m: level k is (S(k) ∩ A_m*g)*g^-1 for k <= m."""
    if not 0 <= m <= sys.height:
        raise ValueError(f"m = {m} outside 0..{sys.height}")
    if g not in sys.levels[m]:
        raise ValueError(f"{g!r} is not in S({m})")
    return ASystem(sys.exh, _restricted_levels(sys, g, m))


def replace(sys: ASystem, sub: ASystem, g) -> ASystem:
    """(S, T, g): below level m = height(T), replace S inside A_m*g by T*g.

    Level k < m becomes (S(k) minus A_m*g) ∪ T(k)*g.
    """
    m = sub.height
    if sub.exh is not sys.exh:
        raise ValueError("systems belong to different exhaustions")
    if not m < sys.height:
        raise ValueError(f"sub-system height {m} must be below {sys.height}")
    if g not in sys.levels[m]:
        raise ValueError(f"{g!r} is not in S({m})")
    Amg = sys.exh.A[m].right(g)
    levels = [(sys.levels[k] - Amg) | sub.levels[k].right(g) for k in range(m)]
    levels += list(sys.levels[m:])
    return ASystem(sys.exh, levels)


class UniformVerdict(NamedTuple):
    ok: bool
    witness: dict | None


def is_uniform(sys: ASystem) -> UniformVerdict:
    """Whether all restrictions (g*S)|_m, g in S(m), agree for every m."""
    group = sys.exh.group
    for m in range(sys.height + 1):
        elems = sys.levels[m].elements
        if len(elems) < 2:
            continue
        g = elems[0]
        ref = _restricted_levels(sys, g, m)
        for h in elems[1:]:
            other = _restricted_levels(sys, h, m)
            for k in range(m + 1):
                if ref[k] != other[k]:
                    return UniformVerdict(
                        False,
                        {
                            "m": m,
                            "g": group.encode(g),
                            "h": group.encode(h),
                            "k": k,
                            "levels": [ref[k].encode(), other[k].encode()],
                        },
                    )
    return UniformVerdict(True, None)


@dataclass
class CoherentSequence:
    """Uniform systems S_0..S_N with S_n restricted to m equal to S_m."""

    exh: Exhaustion
    systems: list[ASystem]
    # per height n: the replacement points g_i with their level phi(i)
    enumerations: list[list[tuple[Any, int]]] = field(default_factory=list)
    certificate: Certificate | None = None

    @property
    def height(self) -> int:
        return len(self.systems) - 1

    def __getitem__(self, n) -> ASystem:
        return self.systems[n]


def strips(sys: ASystem) -> list[FinSet]:
    """T(k) = S(k) minus the union of A_m*S(m) over k < m < n."""
    exh = sys.exh
    n = sys.height
    out = []
    for k in range(n):
        shadow = set()
        for m in range(k + 1, n):
            shadow |= set_product(exh.A[m], sys.levels[m]).members
        out.append(FinSet(exh.group, sys.levels[k].members - shadow, check=False))
    return out


def build_coherent_sequence(exh: Exhaustion, N: int) -> CoherentSequence:
    """Forward induction: uniformise the greedy height-n system by pasting
    the already-built S_phi(i) at each strip point g_i."""
    if not 0 <= N <= exh.max_level:
        raise ValueError(f"height {N} outside 0..{exh.max_level}")
    group = exh.group
    systems = [trivial_system(exh)]
    enumerations: list[list[tuple[Any, int]]] = [[]]
    for n in range(1, N + 1):
        current = build_system(exh, n)
        T = strips(current)
        points = sorted(((g, k) for k in range(n) for g in T[k]), key=lambda p: group.key(p[0]))
        for g, phi in points:
            current = replace(current, systems[phi], g)
        systems.append(current)
        enumerations.append(points)
    seq = CoherentSequence(exh, systems, enumerations)
    seq.certificate = check_coherence(seq)
    return seq


def check_coherence(seq: CoherentSequence) -> Certificate:
    group = seq.exh.group
    cert = Certificate("coherent_sequence", params={"height": seq.height})
    with timed(cert):
        for n, sys in enumerate(seq.systems):
            cert.record("height", sys.height == n, {"n": n})
            verdict = is_uniform(sys)
            cert.record("uniform", verdict.ok, verdict.witness and {"n": n, **verdict.witness})
            for m in range(n + 1):
                r = restrict(sys, group.identity, m)
                cert.record("coherent", r.levels == seq.systems[m].levels, {"n": n, "m": m})
    return cert

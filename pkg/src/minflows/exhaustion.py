"""Exhaustions A_0 ⊆ A_1 ⊆ ... with A_n = A_0^3 A_1^3 ... A_{n-1}^3 B_n.

Windows ``A_n(k) = A_k^3 ... A_{n-1}^3 B_n`` are cached on the exhaustion.
By convention ``window(n, n) = B_n`` (the empty product of cubes), which is
what the inside-admissible check needs when k+1 = ell.
"""
from __future__ import annotations

from .certificates import Certificate, timed
from .errors import SymmetryError
from .group_core import FinSet, Group, SyndeticVerdict, ball, is_F_syndetic_in, product_chain, set_power, set_product, singleton


class Exhaustion:
    def __init__(self, group: Group, A, B, radii=None):
        if len(A) != len(B) or not A:
            raise ValueError("need matching, nonempty A and B level lists")
        self.group = group
        self.A: tuple[FinSet, ...] = tuple(A)
        self.B: tuple[FinSet, ...] = tuple(B)
        self.radii = tuple(radii) if radii is not None else None
        self._cubes: dict[int, FinSet] = {}
        self._windows: dict[tuple[int, int], FinSet] = {}
        self._powers: dict[tuple[int, int], FinSet] = {}

    @property
    def max_level(self) -> int:
        return len(self.A) - 1

    def cube(self, k: int) -> FinSet:
        if k not in self._cubes:
            self._cubes[k] = set_power(self.A[k], 3)
        return self._cubes[k]

    def power(self, k: int, e: int) -> FinSet:
        """A_k^e, cached."""
        if e == 3:
            return self.cube(k)
        key = (k, e)
        if key not in self._powers:
            if e <= 1:
                self._powers[key] = self.A[k] if e == 1 else singleton(self.group)
            else:
                self._powers[key] = set_product(self.power(k, e - 1), self.A[k])
        return self._powers[key]

    def power_within(self, k: int, e: int, cap: int) -> FinSet | None:
        """A_k^e, or None once a partial product has more than ``cap`` elements.

        Syndeticity inside a window D only needs F = A_k^e when |F| <= |D|.
        """
        key = (k, e)
        if key in self._powers or (e == 3 and k in self._cubes):
            return self.power(k, e)
        acc = singleton(self.group)
        for i in range(1, e + 1):
            cached = self._powers.get((k, i)) if i != 3 else self._cubes.get(k)
            acc = cached if cached is not None else set_product(acc, self.A[k])
            if len(acc) > cap:
                return None
            if cached is None:
                if i == 3:
                    self._cubes[k] = acc
                else:
                    self._powers[(k, i)] = acc
        return acc

    def window(self, n: int, k: int) -> FinSet:
        """A_n(k) = A_k^3 ... A_{n-1}^3 B_n for 0 <= k <= n <= max_level."""
        if not (0 <= k <= n <= self.max_level):
            raise IndexError(f"window({n}, {k}) out of range for max level {self.max_level}")
        key = (n, k)
        if key not in self._windows:
            if k == n:
                self._windows[key] = self.B[n]
            else:
                self._windows[key] = set_product(self.cube(k), self.window(n, k + 1))
        return self._windows[key]

    def levels(self):
        return list(zip(self.A, self.B))

    def to_record(self) -> dict:
        return {
            "group": self.group.describe(),
            "radii": list(self.radii) if self.radii is not None else None,
            "levels": [{"A": A.encode(), "B": B.encode()} for A, B in zip(self.A, self.B)],
        }


def power_syndetic(exh: Exhaustion, S: FinSet, k: int, e: int, D: FinSet) -> SyndeticVerdict:
    """is_F_syndetic_in(S, A_k^e, D), vacuous without building A_k^e when it
    outgrows D."""
    F = exh.power_within(k, e, len(D))
    if F is None:
        return SyndeticVerdict(True, None, 0)
    return is_F_syndetic_in(S, F, D)


def _from_B(group, A0, Bs, radii=None):
    A = [A0]
    B = [A0]
    prefix = singleton(group)
    for n, Bn in enumerate(Bs, start=1):
        prefix = set_product(prefix, set_power(A[n - 1], 3))
        An = set_product(prefix, Bn)
        for a in An:
            if group.inv(a) not in An:
                raise SymmetryError(n, a)
        A.append(An)
        B.append(Bn)
    return Exhaustion(group, A, B, radii)


def build_exhaustion(group: Group, b_radii) -> Exhaustion:
    """A_0 = ball(b_radii[0]); B_n = ball(b_radii[n]) for n >= 1."""
    b_radii = list(b_radii)
    if not b_radii:
        raise ValueError("b_radii must be nonempty")
    if any(r < 0 for r in b_radii):
        raise ValueError("radii must be nonnegative")
    A0 = ball(group, b_radii[0])
    return _from_B(group, A0, [ball(group, r) for r in b_radii[1:]], b_radii)


def exhaustion_from_sets(group: Group, A0: FinSet, Bs) -> Exhaustion:
    """Same product rule with caller-chosen sets; asymmetric results raise."""
    return _from_B(group, A0, list(Bs))


def exhaustion_from_levels(group: Group, levels) -> Exhaustion:
    """Wrap hand-built (A_n, B_n) pairs without checking anything."""
    A, B = zip(*levels)
    return Exhaustion(group, A, B)


def validate_exhaustion(exh: Exhaustion) -> Certificate:
    """Recompute every standing assumption on an exhaustion from scratch."""
    cert = Certificate("exhaustion", params={"group": exh.group.describe(), "radii": exh.radii})
    group = exh.group
    enc = group.encode
    e = group.identity
    with timed(cert):
        for n, (An, Bn) in enumerate(exh.levels()):
            for name, X in (("A", An), ("B", Bn)):
                cert.record("identity", e in X, {"level": n, "set": name})
                bad = next((a for a in X if group.inv(a) not in X), None)
                cert.record("symmetric", bad is None, None if bad is None else {"level": n, "set": name, "element": enc(bad)})
        for n in range(1, exh.max_level + 1):
            An = exh.A[n]
            # independent recomputation: fresh powers, no cached windows
            prefix = product_chain(*[set_power(exh.A[i], 3) for i in range(n)])
            full = set_product(prefix, exh.B[n])
            diff = (full.members ^ An.members)
            cert.record("decomposition", not diff, {"level": n, "element": enc(min(diff, key=group.key))} if diff else None)
            miss = prefix.members - An.members
            cert.record("prefix_inside", not miss, {"level": n, "element": enc(min(miss, key=group.key))} if miss else None)
            for m in range(n):
                miss = exh.A[m].members - An.members
                cert.record("nesting", not miss, {"m": m, "n": n, "element": enc(min(miss, key=group.key))} if miss else None)
            for k in range(n):
                Wk = exh.window(n, k)
                head = product_chain(*([singleton(group)] + [set_power(exh.A[i], 3) for i in range(k)]))
                split = set_product(head, Wk)
                diff = split.members ^ An.members
                cert.record("split", not diff, {"n": n, "k": k, "element": enc(min(diff, key=group.key))} if diff else None)
                cover = set_product(exh.A[k], Wk)
                miss = An.members - cover.members
                cert.record("cover", not miss, {"n": n, "k": k, "element": enc(min(miss, key=group.key))} if miss else None)
                for kp in range(k):
                    miss = Wk.members - exh.window(n, kp).members
                    cert.record(
                        "window_monotone",
                        not miss,
                        {"n": n, "k": k, "k_prime": kp, "element": enc(min(miss, key=group.key))} if miss else None,
                    )
        # stabilization in finite groups is just nesting with equal sets
        cert.params["sizes"] = [len(A) for A in exh.A]
    return cert

"""Blueprints: the level sets of a coherent sequence, truncated at height N.

Level n of the blueprint is S_N(n). Every syndeticity claim is checked
inside A_N, the finite window the truncation can see.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .asystem import ASystem, CoherentSequence, is_uniform
from .certificates import Certificate, timed
from .exhaustion import Exhaustion, power_syndetic
from .group_core import FinSet, is_F_spaced, set_product


@dataclass
class Blueprint:
    exh: Exhaustion
    N: int
    levels: tuple[FinSet, ...]
    source: ASystem | None = None

    def __getitem__(self, n) -> FinSet:
        return self.levels[n]

    def to_record(self) -> dict:
        return {"N": self.N, "levels": [L.encode() for L in self.levels]}


def extract_blueprint(seq: CoherentSequence, N: int) -> Blueprint:
    if not 0 <= N <= seq.height:
        raise ValueError(f"N = {N} outside 0..{seq.height}")
    return Blueprint(seq.exh, N, seq[N].levels, seq[N])


def from_system(sys: ASystem) -> Blueprint:
    """Treat any system's levels as a candidate blueprint (for negative checks)."""
    return Blueprint(sys.exh, sys.height, sys.levels, sys)


def density_bound(exh: Exhaustion, n: int) -> Fraction:
    """|A_n^2 B_{n+1}| / |A_n^5| as an exact rational."""
    return Fraction(len(set_product(exh.power(n, 2), exh.B[n + 1])), len(exh.power(n, 5)))


def verify_blueprint(bp: Blueprint) -> Certificate:
    exh = bp.exh
    G = exh.group
    mul, inv, enc = G.mul, G.inv, G.encode
    N = bp.N
    L = bp.levels
    AN = exh.A[N]
    cert = Certificate("blueprint", params={"N": N, "sizes": [len(x) for x in L]})
    with timed(cert):
        for n in range(N):
            missing = L[n + 1].members - L[n].members
            cert.record("nesting", not missing, {"n": n, "element": enc(min(missing, key=G.key))} if missing else None)

        # (a) spaced, and A_n^5-syndetic inside A_N
        checked = {}
        for n in range(N + 1):
            cert.record("a_spaced", is_F_spaced(L[n], exh.A[n]), {"n": n})
            verdict = power_syndetic(exh, L[n], n, 5, AN)
            checked[n] = verdict.checked
            cert.record("a_syndetic", verdict.ok, None if verdict.ok else {"n": n, "translate": enc(verdict.witness)})
        cert.params["a_translates_checked"] = checked

        # (b) A_k g meets A_n h only when A_k g sits in A_n(k) h; for k = n
        # this says distinct translates are disjoint
        for n in range(N + 1):
            An = exh.A[n]
            owner = {}
            for h in L[n]:
                for a in An:
                    owner.setdefault(mul(a, h), []).append(h)
            for k in range(n + 1):
                W = exh.window(n, k).members if k < n else None
                for g in L[k]:
                    Akg = [mul(a, g) for a in exh.A[k]]
                    hits = {h for x in Akg for h in owner.get(x, ())}
                    for h in hits:
                        if k == n:
                            ok = h == g
                        else:
                            hinv = inv(h)
                            ok = all(mul(x, hinv) in W for x in Akg)
                        if not cert.record("b_window", ok, {"k": k, "n": n, "g": enc(g), "h": enc(h)}):
                            break

        # (c) all translates in level n see the same pattern of level k
        for n in range(N + 1):
            An = exh.A[n]
            elems = L[n].elements
            for k in range(n + 1):
                ref = None
                for g in elems:
                    Ang = An.right(g).members
                    ginv = inv(g)
                    view = frozenset(mul(x, ginv) for x in L[k] if x in Ang)
                    if ref is None:
                        ref, g0 = view, g
                    elif not cert.record("c_uniform", view == ref, {"k": k, "n": n, "g": enc(g0), "h": enc(g)}):
                        break
        if bp.source is not None:
            agrees = is_uniform(bp.source).ok == cert.results.get("c_uniform", True)
            cert.record("c_matches_is_uniform", agrees)

        # (d) density, exact
        dens = {}
        for n in range(N):
            lhs = len([x for x in L[n] if x in exh.A[n + 1]])
            rhs = density_bound(exh, n)
            dens[n] = [lhs, f"{rhs.numerator}/{rhs.denominator}"]
            cert.record("d_density", lhs >= rhs, {"n": n, "count": lhs, "bound": str(rhs)})
        cert.params["d_density"] = dens
    return cert

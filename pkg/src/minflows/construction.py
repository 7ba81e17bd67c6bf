"""Stage-by-stage product flows Y_n over H with G-pattern symbols.

Stage 0 is the full shift over 2^{A_0}. Stage n tiles A_n by the strips
T_n(k) = A_k S_n(k) of the coherent system S_n and fills them with
translated copies of earlier stages, plus the printing factors Q_i that
force every C_{n-1}-pattern of Y_{n-1} to show up near each block.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .asystem import CoherentSequence, build_coherent_sequence, strips
from .certificates import Certificate, timed
from .errors import ResourceLimitError, SizeConditionError, TilingError, WindowTooSmall
from .exhaustion import Exhaustion, build_exhaustion
from .group_core import FinSet, Group, ball, is_F_syndetic_in, set_inverse, set_product, singleton
from .subshift import (
    Pattern,
    PhiImage,
    Print,
    Pullback,
    Subshift,
    TiledProduct,
    pattern_set,
    powerset_shift,
    trial_rng,
)


def h_exhaustion(H: Group, radii) -> list[FinSet]:
    """C_n = ball(radii[n]); radii must be nondecreasing."""
    radii = list(radii)
    if any(r < 0 for r in radii) or any(a > b for a, b in zip(radii, radii[1:])):
        raise ValueError("H radii must be nonnegative and nondecreasing")
    return [ball(H, r) for r in radii]


@dataclass
class StageLayout:
    n: int
    exh: Exhaustion
    S: list[FinSet]  # S_n(k), k < n
    T: list[FinSet]  # T_n(k), k <= n
    C: FinSet  # C_{n-1}
    D: FinSet  # D_{n-1}
    q: int
    r: int
    bound: int  # r must exceed this
    alphas: list[Pattern]
    F: list[FinSet]  # F_0..F_{l-1}, then F_l

    @property
    def ell(self) -> int:
        return len(self.alphas)

    def enumeration(self, i: int) -> tuple:
        """g_0^i, ..., g_{q-1}^i."""
        return self.F[i].elements

    def to_record(self, encode_symbol=None) -> dict:
        return {
            "n": self.n,
            "S": [s.encode() for s in self.S],
            "T": [t.encode() for t in self.T],
            "q": self.q,
            "r": self.r,
            "bound": self.bound,
            "ell": self.ell,
            "alphas": [a.encode(encode_symbol) if encode_symbol else a.encode() for a in self.alphas],
            "F": [f.encode() for f in self.F],
        }


@dataclass
class StageFlow:
    n: int
    Y: Subshift
    D: FinSet
    Z: Subshift | None = None
    layout: StageLayout | None = None
    Q: list = field(default_factory=list)


def check_tiling(A: FinSet, parts: list[FinSet]) -> tuple[bool, dict | None]:
    """Whether ``parts`` are pairwise disjoint and cover exactly A."""
    G = A.group
    seen: dict[Any, int] = {}
    for k, P in enumerate(parts):
        for x in P:
            if x in seen:
                return False, {"element": G.encode(x), "parts": [seen[x], k], "reason": "doubly covered"}
            if x not in A:
                return False, {"element": G.encode(x), "parts": [k], "reason": "outside A_n"}
            seen[x] = k
    missing = A.members - seen.keys()
    if missing:
        return False, {"element": G.encode(min(missing, key=G.key)), "reason": "uncovered"}
    return True, None


def _radius_hint(exh: Exhaustion, n: int, bound: int, steps=8):
    if exh.radii is None:
        return None
    radii = list(exh.radii[: n + 1])
    for rho in range(radii[n] + 1, radii[n] + steps + 1):
        try:
            trial = build_exhaustion(exh.group, radii[:n] + [rho])
            seq = build_coherent_sequence(trial, n)
        except ResourceLimitError:
            return None
        if len(strips(seq[n])[n - 1]) > bound:
            return rho
    return None


def layout_stage(seq: CoherentSequence, n: int, Cs: list[FinSet], prevD: FinSet, prevY: Subshift, budget: int) -> StageLayout:
    if n < 1:
        raise ValueError("layouts start at stage 1")
    if seq.height < n:
        raise ValueError(f"coherent sequence has height {seq.height} < {n}")
    if len(Cs) < n:
        raise ValueError(f"need C_{n - 1} in the H exhaustion")
    exh = seq.exh
    G = exh.group
    sys = seq[n]
    S = strips(sys)
    T = [set_product(exh.A[k], S[k]) for k in range(n)]
    used: set = set()
    for t in T:
        used |= t.members
    T.append(FinSet(G, exh.A[n].members - used, check=False))
    ok, witness = check_tiling(exh.A[n], T)
    if not ok:
        raise TilingError(f"stage {n}: T-sets do not tile A_{n}", witness)

    C = Cs[n - 1]
    DC = set_product(prevD, C)
    q = len(set_product(set_inverse(DC), DC))
    r = len(S[n - 1])
    bound = q * 2 ** (len(exh.A[n - 1]) * len(C))
    if r <= bound:
        raise SizeConditionError(n, r, bound + 1, _radius_hint(exh, n, bound))

    alphas = pattern_set(prevY, C, budget)
    e = G.identity
    cands = [g for g in S[n - 1] if g != e]
    F = [FinSet(G, cands[i * q : (i + 1) * q], check=False) for i in range(len(alphas))]
    taken: set = set()
    for f in F:
        taken |= f.members
    F.append(FinSet(G, S[n - 1].members - taken, check=False))
    layout = StageLayout(n, exh, S, T, C, prevD, q, r, bound, alphas, F)
    _check_layout(layout, sys)
    return layout


def _check_layout(layout: StageLayout, sys) -> None:
    n = layout.n
    e = layout.exh.group.identity
    top = layout.S[n - 1].members
    assert top <= sys.levels[n - 1].members <= layout.exh.A[n].members
    assert all(len(f) == layout.q and f.members <= top for f in layout.F[:-1])
    assert e in layout.F[-1]
    total = sum(len(f) for f in layout.F)
    assert total == len(top), "F blocks must partition S_n(n-1)"


def build_Qi(layout: StageLayout, i: int, prevY: Subshift) -> PhiImage:
    if not 0 <= i < layout.ell:
        raise IndexError(f"Q_{i} undefined, l = {layout.ell}")
    printed = Print(prevY, layout.alphas[i], layout.q, layout.D)
    return PhiImage(printed, list(layout.enumeration(i)), label=f"Q_{i}")


def stage_zero(exh: Exhaustion, H: Group) -> StageFlow:
    return StageFlow(0, powerset_shift(H, exh.A[0]), singleton(H))


def build_stage(layout: StageLayout, flows: list[StageFlow]) -> StageFlow:
    n = layout.n
    exh = layout.exh
    G = exh.group
    prev = flows[n - 1]
    H = prev.Y.group
    Q = [build_Qi(layout, i, prev.Y) for i in range(layout.ell)]
    Z = TiledProduct([Pullback(prev.Y, g) for g in layout.F[-1]] + Q, H, G, label=f"Z_{n}")
    factors: list[Subshift] = []
    if layout.T[n]:
        factors.append(powerset_shift(H, layout.T[n]))
    factors.append(Z)
    for k in range(n - 1):
        factors.extend(Pullback(flows[k].Y, g) for g in layout.S[k])
    Y = TiledProduct(factors, H, G, label=f"Y_{n}")
    if Y.gsupport != exh.A[n]:
        diff = Y.gsupport.members ^ exh.A[n].members
        raise TilingError(f"Y_{n} supports miss A_{n}", G.encode(min(diff, key=G.key)))
    D = Y.radius | set_inverse(Y.radius)
    return StageFlow(n, Y, D, Z, layout, Q)


@dataclass
class Tower:
    seq: CoherentSequence
    Cs: list[FinSet]
    flows: list[StageFlow]

    @property
    def exh(self) -> Exhaustion:
        return self.seq.exh


def build_tower(seq: CoherentSequence, Cs: list[FinSet], stages: int, budget: int, H: Group | None = None) -> Tower:
    H = H or Cs[0].group
    flows = [stage_zero(seq.exh, H)]
    for n in range(1, stages + 1):
        prev = flows[-1]
        layout = layout_stage(seq, n, Cs, prev.D, prev.Y, budget)
        flows.append(build_stage(layout, flows))
    return Tower(seq, Cs, flows)


def sample_config(flow: StageFlow, window, seed: int) -> Pattern:
    """A pattern of Y_n on the H-window, built factor by factor."""
    return flow.Y.complete([], window, trial_rng(seed, "sample", flow.n))


def read_block(x: Pattern, A: FinSet, g) -> Pattern:
    """(g.x) restricted to A: cell c carries (x(c) ∩ A g) g^-1."""
    G = A.group
    mul, ginv = G.mul, G.inv(g)
    Ag = A.right(g).members
    return x.map(lambda s: frozenset(mul(a, ginv) for a in s & Ag))


def write_block(x: Pattern, A: FinSet, g, beta: Pattern) -> Pattern:
    """x with its A g block replaced by beta translated to A g."""
    G = A.group
    mul = G.mul
    Ag = A.right(g).members
    vals = x.as_dict()
    for c, s in beta.items():
        vals[c] = (vals[c] - Ag) | frozenset(mul(a, g) for a in s)
    return Pattern(x.group, vals)


def restriction_certificate(tower: Tower, n: int, window: FinSet, seed: int, samples: int = 20, budget: int = 4096) -> Certificate:
    """Sampled Y_n patterns restricted to A_{n-1} are Y_{n-1} patterns."""
    flow, prev = tower.flows[n], tower.flows[n - 1]
    A = tower.exh.A[n - 1]
    G = tower.exh.group
    cert = Certificate("restriction", stage=n, params={"samples": samples, "window": window.encode()}, seed=seed)
    with timed(cert):
        C = tower.Cs[n - 1]
        seen = set()
        for t in range(samples):
            x = flow.Y.complete([], window, trial_rng(seed, "restriction", n, t))
            cert.record("sample_accepted", flow.Y.accepts(x), {"sample": t})
            r = read_block(x, A, G.identity)
            cert.record("restricted_accepted", prev.Y.accepts(r), {"sample": t})
            if C.members <= set(window):
                seen.add(r.restrict(C))
        if C.members <= set(window):
            full = pattern_set(prev.Y, C, budget)
            cert.params["patterns_hit"] = len(seen)
            cert.params["patterns_total"] = len(full)
            cert.record("hits_inside_pattern_set", seen <= set(full))
    return cert


def reachability_certificate(tower: Tower, n: int, window: FinSet, seed: int, level: int = 0) -> Certificate:
    """Every pattern of the full shift over 2^{A_level} on ``window`` occurs
    as the A_level block of some accepted Y_n pattern."""
    flow = tower.flows[n]
    A = tower.exh.A[level]
    G = tower.exh.group
    base = powerset_shift(flow.Y.group, A)
    cert = Certificate("reachability", stage=n, params={"level": level, "window": window.encode()}, seed=seed)
    with timed(cert):
        x = flow.Y.complete([], window, trial_rng(seed, "reach", n))
        symbols = list(base.symbols())
        reached = 0
        total = 0
        for combo in itertools.product(symbols, repeat=len(window)):
            total += 1
            beta = Pattern(flow.Y.group, dict(zip(window.elements, combo)))
            y = write_block(x, A, G.identity, beta)
            ok = flow.Y.accepts(y) and read_block(y, A, G.identity) == beta
            reached += ok
            cert.record("reachable", ok, {"pattern": beta.encode(base.encode_symbol)})
        cert.params["reached"] = reached
        cert.params["total"] = total
    return cert


def visiting_window(exh: Exhaustion, n: int, M: int) -> FinSet:
    """The g in A_M whose A_{n-1} g block lies inside A_M."""
    A, AM = exh.A[n - 1], exh.A[M]
    mul = exh.group.mul
    return FinSet(exh.group, [g for g in AM if all(mul(a, g) in AM.members for a in A)], check=False)


def visiting_set(x: Pattern, layout: StageLayout, i: int, G_window: FinSet) -> FinSet:
    A = layout.exh.A[layout.n - 1]
    alpha = layout.alphas[i]
    G = A.group
    mul, inv = G.mul, G.inv
    out = []
    for g in G_window:
        Ag = A.right(g).members
        ginv = inv(g)
        if all(frozenset(mul(a, ginv) for a in x[c] & Ag) == v for c, v in alpha.items()):
            out.append(g)
    return FinSet(G, out, check=False)


def visiting_certificate(x: Pattern, layout: StageLayout, i: int, G_window: FinSet, H_window: FinSet, seed=None) -> Certificate:
    """Vis(x, V_i) ∩ G_window is A_n^7-syndetic in G_window, where V_i asks
    for alpha_i on A_{n-1} x C_{n-1}."""
    exh = layout.exh
    n = layout.n
    G = exh.group
    if not layout.C.members <= set(x._values):
        raise WindowTooSmall(f"H-window must contain C_{n - 1}", minimal=layout.C.encode())
    F = exh.power(n, 7)
    cert = Certificate("visiting", stage=n, seed=seed, params={"alpha": i, "F": f"A_{n}^7", "F_size": len(F)})
    with timed(cert):
        vis = visiting_set(x, layout, i, G_window)
        verdict = is_F_syndetic_in(vis, F, G_window)
        if verdict.checked == 0:
            raise WindowTooSmall(
                f"no translate of A_{n}^7 ({len(F)} elements) fits in a G-window of {len(G_window)} elements",
                minimal=len(F),
            )
        cert.record("syndetic", verdict.ok, None if verdict.ok else {"uncovered_translate": G.encode(verdict.witness)})
        cert.params["visits"] = len(vis)
        cert.params["translates_checked"] = verdict.checked
        cert.params["visiting_set"] = vis.encode()
    return cert


def visiting_suite(tower: Tower, n: int, samples: int, seed: int, H_window: FinSet | None = None) -> list[Certificate]:
    """Certificates for stage n read off samples of stage n+1."""
    M = n + 1
    if M >= len(tower.flows):
        raise WindowTooSmall(f"visiting certificates for stage {n} need stage {M} built", minimal=M)
    layout = tower.flows[n].layout
    big = tower.flows[M]
    H_window = H_window or tower.Cs[n - 1]
    G_window = visiting_window(tower.exh, n, M)
    certs = []
    for t in range(samples):
        x = big.Y.complete([], H_window, trial_rng(seed, "visit", n, t))
        member = big.Y.accepts(x)
        for i in range(layout.ell):
            cert = visiting_certificate(x, layout, i, G_window, H_window, seed=seed)
            cert.params["sample"] = t
            cert.params["sample_stage"] = M
            cert.record("sample_accepted", member)
            certs.append(cert)
    return certs


def saturated(x: Pattern, A: FinSet) -> Pattern:
    """Every cell set to all of A; a pattern breaking the printing rule."""
    return x.map(lambda s: A.members)


def freeness_certificate(flow: StageFlow, H_window: FinSet, seed: int, A0: FinSet) -> Certificate:
    """For each h != 1 in the window, an accepted x with (h.x)(1) != x(1)."""
    H = flow.Y.group
    G = A0.group
    e_g, e_h = G.identity, H.identity
    cert = Certificate("freeness (windowed)", stage=flow.n, seed=seed, params={"window": H_window.encode()})
    if e_h not in H_window:
        raise WindowTooSmall("H-window must contain the identity")
    with timed(cert):
        x = flow.Y.complete([], H_window, trial_rng(seed, "free", flow.n))
        separated = []
        for h in H_window:
            if h == e_h:
                continue
            y = write_block(
                x,
                A0,
                e_g,
                Pattern(H, {e_h: read_block(x, A0, e_g)[e_h] | {e_g}, h: read_block(x, A0, e_g)[h] - {e_g}}),
            )
            moved = y.translate(h)
            ok = flow.Y.accepts(y) and moved[e_h] != y[e_h]
            cert.record("separated", ok, {"h": H.encode(h)})
            if ok:
                separated.append([H.encode(e_h), H.encode(h)])
        cert.params["separating_cells"] = separated
    return cert

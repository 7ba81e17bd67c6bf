"""Certificate suites driven by a :class:`RunConfig`.

Each runner returns a list of certificates and never writes files; the
CLI serializes them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .asystem import build_coherent_sequence, build_system, check_system, is_uniform
from .blueprint import Blueprint, extract_blueprint, verify_blueprint
from .certificates import Certificate
from .config import RunConfig
from .construction import (
    Tower,
    build_tower,
    check_tiling,
    freeness_certificate,
    h_exhaustion,
    reachability_certificate,
    restriction_certificate,
    visiting_suite,
)
from .exhaustion import build_exhaustion, validate_exhaustion
from .group_core import FinSet, ball, group_from_spec, set_inverse, set_product
from .subshift import (
    FullShift,
    Part,
    Pattern,
    Print,
    ProductShift,
    check_irreducible,
    check_part_extension,
    check_shift_invariance,
    trial_rng,
)


@dataclass
class BlueprintRun:
    certificates: list[Certificate] = field(default_factory=list)
    blueprint: Blueprint | None = None


def make_groups(cfg: RunConfig):
    return group_from_spec(cfg.g_spec, cfg.max_set_size), group_from_spec(cfg.h_spec, cfg.max_set_size)


def run_blueprint(cfg: RunConfig) -> BlueprintRun:
    G, _ = make_groups(cfg)
    run = BlueprintRun()
    exh = build_exhaustion(G, cfg.g_radii[: cfg.height + 1])
    run.certificates.append(validate_exhaustion(exh))
    seq = build_coherent_sequence(exh, cfg.height)
    for n in range(cfg.height + 1):
        for label, sys in (("greedy", build_system(exh, n)), ("coherent", seq[n])):
            cert = check_system(sys)
            cert.stage = n
            cert.params["system"] = label
            run.certificates.append(cert)
        verdict = is_uniform(seq[n])
        cert = Certificate("uniform", stage=n, params={"system": "coherent"})
        cert.record("uniform", verdict.ok, verdict.witness)
        run.certificates.append(cert)
    seq.certificate.params["levels"] = [L.encode() for L in seq[cfg.height].levels]
    run.certificates.append(seq.certificate)
    run.blueprint = extract_blueprint(seq, cfg.height)
    run.certificates.append(verify_blueprint(run.blueprint))
    return run


def print_alpha(C: FinSet) -> Pattern:
    """0 at the identity and 1 elsewhere on C."""
    e = C.group.identity
    return Pattern(C.group, {c: 0 if c == e else 1 for c in C})


def part_extension_certificate(C: FinSet, n: int, trials: int, window: FinSet, seed: int) -> Certificate:
    """Greedy extension from random valid partial colorings."""
    cert = Certificate("part_extension", params={"C": C.encode(), "colors": n, "trials": trials}, seed=seed)
    X = Part(C, n)
    elems = window.elements
    ok_count = 0
    for t in range(trials):
        rng = trial_rng(seed, "part_extension", t)
        target = rng.sample(elems, rng.randint(1, min(12, len(elems))))
        pins = {}
        for h in rng.sample(target, rng.randint(0, len(target))):
            pins[h] = rng.randrange(n)
            if not X.accepts(Pattern(C.group, pins)):
                del pins[h]
        partial = Pattern(C.group, pins)
        ok = check_part_extension(C, n, partial, target)
        ok_count += ok
        cert.record("extends", ok, None if ok else {"trial": t, "partial": partial.encode(), "target": [C.group.encode(h) for h in target]})
    cert.results.setdefault("extends", True)
    cert.params["passed"] = ok_count
    return cert


def run_subshift(cfg: RunConfig) -> list[Certificate]:
    _, H = make_groups(cfg)
    C = ball(H, cfg.part_radius)
    need = len(set_product(set_inverse(C), C))
    n = cfg.part_colors if cfg.part_colors is not None else need
    window = ball(H, cfg.subshift_window)
    certs = []
    part = Part(C, n)
    c = part_extension_certificate(C, n, cfg.trials, window, cfg.seed)
    c.params["needed_colors"] = need
    certs.append(c)
    c = check_irreducible(part, cfg.trials, window, cfg.seed, label="part")
    c.params["needed_colors"] = need
    certs.append(c)
    D = ball(H, cfg.print_radius)
    DC = set_product(D, C)
    N = len(set_product(set_inverse(DC), DC))
    printed = Print(FullShift(H, [0, 1]), print_alpha(C), N, D)
    certs.append(check_irreducible(printed, cfg.trials, window, cfg.seed, label="print"))
    prod = ProductShift([part, printed])
    certs.append(check_irreducible(prod, cfg.trials, window, cfg.seed, label="part x print"))
    shifts = [h for h in C if h != H.identity]
    certs.append(check_shift_invariance(printed, window, shifts, cfg.seed, samples=min(cfg.trials, 3)))
    return certs


def build_from_config(cfg: RunConfig) -> Tower:
    G, H = make_groups(cfg)
    exh = build_exhaustion(G, cfg.g_radii[: cfg.height + 1])
    seq = build_coherent_sequence(exh, cfg.stages)
    Cs = h_exhaustion(H, cfg.h_radii)
    return build_tower(seq, Cs, cfg.stages, cfg.max_pattern_set, H)


def run_construct(cfg: RunConfig) -> list[Certificate]:
    tower = build_from_config(cfg)
    H = tower.flows[0].Y.group
    exh = tower.exh
    window = ball(H, cfg.h_window_radius)
    reach = FinSet(H, window.elements[: cfg.reach_window], check=False)
    certs = []
    for flow in tower.flows:
        n = flow.n
        if flow.layout is not None:
            L = flow.layout
            cert = Certificate("layout", stage=n, params=L.to_record(flow.Y.encode_symbol))
            cert.record("size_condition", L.r > L.bound, {"r": L.r, "bound": L.bound})
            ok, witness = check_tiling(exh.A[n], L.T)
            cert.record("tiling", ok, witness)
            certs.append(cert)
            certs.append(restriction_certificate(tower, n, window, cfg.seed, samples=20, budget=cfg.max_pattern_set))
            if 2 ** (len(exh.A[0]) * len(reach)) <= cfg.max_pattern_set:
                certs.append(reachability_certificate(tower, n, reach, cfg.seed))
            c = check_irreducible(flow.Z, cfg.trials, window, cfg.seed, radius=flow.D, label=f"Z_{n}")
            c.stage = n
            certs.append(c)
        c = check_irreducible(flow.Y, cfg.trials, window, cfg.seed, radius=flow.D, label=f"Y_{n}")
        c.stage = n
        certs.append(c)
        if 1 <= n < len(tower.flows) - 1:
            certs.extend(visiting_suite(tower, n, cfg.samples, cfg.seed))
        certs.append(freeness_certificate(flow, window, cfg.seed, exh.A[0]))
    return certs

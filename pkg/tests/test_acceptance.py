"""Acceptance criteria 1-7. Each criterion prints one PASS/FAIL line in the
terminal summary; a criterion split over several tests passes only if all
of its parts do."""
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from minflows.asystem import build_coherent_sequence, build_system, check_coherence, check_system, is_uniform, replace, restrict
from minflows.blueprint import extract_blueprint, verify_blueprint
from minflows.cli import main
from minflows.construction import (
    build_tower,
    check_tiling,
    freeness_certificate,
    h_exhaustion,
    reachability_certificate,
    restriction_certificate,
    visiting_suite,
)
from minflows.exhaustion import build_exhaustion, validate_exhaustion
from minflows.group_core import DirectProduct, FinSet, FreeGroup, IntegerLattice, ball, cyclic, set_inverse, set_product
from minflows.subshift import FullShift, Part, Pattern, Print, ProductShift, check_irreducible, check_part_extension
from minflows.suites import part_extension_certificate, print_alpha
from oracles import part_valid, z_system

Z = IntegerLattice(1)
CONFIGS = __import__("pathlib").Path(__file__).resolve().parent.parent / "configs"

# radii chosen so that A_3 stays small enough to quantify over exhaustively
CASES = {
    "Z": (Z, [1, 2, 2, 2]),
    "Z^2": (IntegerLattice(2), [0, 1, 1, 1]),
    "F_2": (FreeGroup(2), [0, 0, 1, 0]),
    "Z x C_3": (DirectProduct(Z, cyclic(3)), [1, 1, 1, 1]),
}


def report(key, ok, detail):
    prev_ok, prev = ACCEPTANCE.get(key, (True, ""))
    ACCEPTANCE[key] = (prev_ok and ok, f"{prev}; {detail}" if prev else detail)


@pytest.fixture(scope="module")
def built():
    out = {}
    for name, (G, radii) in CASES.items():
        exh = build_exhaustion(G, radii)
        seq = build_coherent_sequence(exh, 3)
        greedy = [build_system(exh, n) for n in range(4)]
        out[name] = (exh, seq, greedy)
    return out


def test_criterion_1_exhaustions():
    detail = []
    ok = True
    for name, (G, radii) in CASES.items():
        t0 = time.perf_counter()
        for h in range(4):
            cert = validate_exhaustion(build_exhaustion(G, radii[: h + 1]))
            ok &= cert.passed
        dt = time.perf_counter() - t0
        ok &= dt < 10
        detail.append(f"{name} {dt:.2f}s")
    report("1", ok, "exhaustion invariants at heights 0..3: " + ", ".join(detail))
    assert ok


def test_criterion_2_lemmas(built):
    t0 = time.perf_counter()
    ok = True
    count = 0
    for name, (exh, seq, greedy) in built.items():
        for sys in greedy + list(seq.systems):
            cert = check_system(sys)
            count += 1
            ok &= cert.passed
            if sys.height:
                for claim in ("general_admissible", "admissible_syndetic", "inside_admissible", "syndetic_A_k^5"):
                    ok &= cert.results.get(claim, False)
    ex = build_exhaustion(Z, [1, 2, 2])
    sys = build_system(ex, 2)
    ref, _ = z_system([1, 2, 2], 2)
    replay = [set(L.members) for L in sys.levels] == ref
    replay &= sys.levels[1].members == {-11, 0, 11}
    replay &= sys.levels[0].members == {0, 3, -3, 7, -7, 10, -10, 13, -13, 18, -18}
    dt = time.perf_counter() - t0
    ok = ok and replay and dt < 30
    report("2", ok, f"{count} systems checked, Z height-2 replay {'exact' if replay else 'MISMATCH'}, {dt:.2f}s")
    assert ok


def _restrict_cases(systems):
    for sys in systems:
        for m in range(sys.height):
            for g in sys.levels[m]:
                yield sys, g, m


def test_criterion_3a_restrict_coherent_and_identity(built):
    total = bad = 0
    for exh, seq, greedy in built.values():
        cases = list(_restrict_cases(seq.systems))
        cases += [(s, s.exh.group.identity, m) for s in greedy for m in range(s.height)]
        for sys, g, m in cases:
            total += 1
            bad += not check_system(restrict(sys, g, m)).passed
    report("3", bad == 0, f"restrict on coherent systems and at g=1: {total - bad}/{total}")
    assert bad == 0


@pytest.mark.xfail(strict=True, reason="restriction of a greedy system away from the identity can drop 1_G from its lowest level")
def test_criterion_3b_restrict_greedy_off_identity(built):
    total = 0
    failures = {}
    for name, (exh, seq, greedy) in built.items():
        for sys, g, m in _restrict_cases(greedy):
            if g == exh.group.identity:
                continue
            total += 1
            cert = check_system(restrict(sys, g, m))
            if not cert.passed:
                failures.setdefault(name, []).append(cert.failures())
    bad = sum(len(v) for v in failures.values())
    claims = sorted({c for v in failures.values() for f in v for c in f})
    detail = ", ".join(f"{k} {len(v)}" for k, v in failures.items())
    report("3", bad == 0, f"restrict on greedy systems at g!=1: {total - bad}/{total} ({detail or 'none'} failing; claims {claims})")
    assert bad == 0


def test_criterion_3c_replace(built):
    # exhaustive up to height 2; at height 3 the first few points of each
    # level in canonical order, since each check quantifies over all of A_3
    total = bad = 0
    for exh, seq, greedy in built.values():
        for sys in greedy + list(seq.systems):
            for m in range(sys.height):
                points = sys.levels[m].elements if sys.height < 3 else sys.levels[m].elements[:4]
                for sub in (greedy[m], seq[m]):
                    for g in points:
                        total += 1
                        bad += not check_system(replace(sys, sub, g)).passed
    report("3", bad == 0, f"replace outputs: {total - bad}/{total}")
    assert bad == 0


def test_criterion_3d_replace_restrict_identity(built):
    total = bad = 0
    for exh, seq, greedy in built.values():
        for sys, g, m in _restrict_cases(greedy + list(seq.systems)):
            total += 1
            bad += replace(sys, restrict(sys, g, m), g) != sys
    ok = bad == 0 and total >= 50
    report("3", ok, f"replace(restrict) identity: {total - bad}/{total}")
    assert ok


def test_criterion_4_blueprints(built):
    ok = True
    for name, (exh, seq, greedy) in built.items():
        ok &= check_coherence(seq).passed and seq.certificate.passed
        for N in range(4):
            ok &= is_uniform(seq[N]).ok
            for m in range(N):
                ok &= restrict(seq[N], exh.group.identity, m) == seq[m]
            cert = verify_blueprint(extract_blueprint(seq, N))
            ok &= cert.passed
    ex = build_exhaustion(Z, [0, 1, 10])
    desk = verify_blueprint(extract_blueprint(build_coherent_sequence(ex, 2), 2))
    z = verify_blueprint(extract_blueprint(build_coherent_sequence(build_exhaustion(Z, [1, 2, 2]), 2), 2))
    dens = z.params["d_density"][0]
    ok &= desk.passed and z.passed and dens == [3, "9/11"] and Fraction(3) >= Fraction(9, 11)
    report("4", ok, f"coherence, uniformity, blueprint (a)-(d) at heights 0..3; Z density {dens[0]} >= {dens[1]}")
    assert ok


def test_criterion_5_irreducibility():
    C = ball(Z, 1)
    n = len(set_product(set_inverse(C), C))
    X = Part(C, n)
    # exhaustive: every partial coloring of every target inside [0, 6) of size <= 6
    cells = list(range(6))
    exhaustive = ext_ok = 0
    import itertools

    for mask in range(1, 64):
        target = [c for i, c in enumerate(cells) if mask >> i & 1]
        for combo in itertools.product([None, *range(n)], repeat=len(target)):
            pins = {h: v for h, v in zip(target, combo) if v is not None}
            if not part_valid(pins, set(C)):
                continue
            exhaustive += 1
            ext_ok += check_part_extension(C, n, Pattern(Z, pins), target)
    ok = ext_ok == exhaustive
    window = ball(Z, 10)
    descriptors = [ball(Z, 1), FinSet(Z, [0, 1]), FinSet(Z, [0, 2]), ball(Z, 2)]
    random_ok = []
    for D in descriptors:
        k = len(set_product(set_inverse(D), D))
        cert = part_extension_certificate(D, k, 500, window, 5)
        random_ok.append(cert.params["passed"])
        ok &= cert.passed and cert.params["passed"] == 500
    printed = Print(FullShift(Z, [0, 1]), print_alpha(C), 5, FinSet(Z, [0]))
    pc = check_irreducible(printed, 100, window, 5, label="print")
    prod = check_irreducible(ProductShift([X, printed]), 100, window, 5, label="product")
    ok &= pc.passed and pc.params["passed"] == 100 and prod.passed and prod.params["passed"] == 100
    few = check_irreducible(Part(C, n - 2), 100, window, 5)
    narrow = check_irreducible(Part(C, n), 100, window, 5, radius=FinSet(Z, [0]))
    narrow_print = check_irreducible(printed, 100, window, 5, radius=ball(Z, 1))
    negatives = [few, narrow, narrow_print]
    ok &= all(not c.passed and c.witnesses for c in negatives)
    report(
        "5",
        ok,
        f"Part exhaustive {ext_ok}/{exhaustive}, random {random_ok}/500, print {pc.params['passed']}/100, "
        f"product {prod.params['passed']}/100, negative controls fail {[100 - c.params['passed'] for c in negatives]}/100",
    )
    assert ok


def test_criterion_6_desk_construction():
    t0 = time.perf_counter()
    exh = build_exhaustion(Z, [0, 1, 10])
    seq = build_coherent_sequence(exh, 2)
    tower = build_tower(seq, h_exhaustion(Z, [0, 0]), 2, 4096, Z)
    L = tower.flows[1].layout
    ok = exh.A[0] == FinSet(Z, [0]) and L.r > 2 and L.bound == 2
    tiled, _ = check_tiling(exh.A[1], L.T)
    ok &= tiled
    window = ball(Z, 3)
    ok &= restriction_certificate(tower, 1, window, 11, samples=20).passed
    reach = []
    for size in range(1, 5):
        W = FinSet(Z, window.elements[:size], check=False)
        cert = reachability_certificate(tower, 1, W, 11)
        reach.append(f"{cert.params['reached']}/{2 ** size}")
        ok &= cert.passed and cert.params["reached"] == 2**size
    vis = visiting_suite(tower, 1, 10, 11)
    alphas = {c.params["alpha"] for c in vis}
    ok &= len(vis) == 20 and alphas == {0, 1} and all(c.passed for c in vis)
    free = freeness_certificate(tower.flows[1], window, 11, exh.A[0])
    ok &= free.passed and len(free.params["separating_cells"]) == len(window) - 1
    dt = time.perf_counter() - t0
    ok &= dt < 120
    report(
        "6",
        ok,
        f"r={L.r} > {L.bound}, tiling {tiled}, reachable {reach}, visiting {sum(c.passed for c in vis)}/{len(vis)}, "
        f"freeness {len(free.params['separating_cells'])}/{len(window) - 1}, {dt:.1f}s",
    )
    assert ok


def test_criterion_7_determinism(tmp_path):
    dirs = [tmp_path / "a", tmp_path / "b"]
    codes = [main(["verify", "-c", str(CONFIGS / "desk_z.toml"), "--out", str(d), "-q"]) for d in dirs]
    names = sorted(p.name for p in dirs[0].iterdir())
    same = names == sorted(p.name for p in dirs[1].iterdir())
    same &= all((dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names)
    ok = same and codes[0] == codes[1] == 0
    report("7", ok, f"two verify runs, files {names}, byte-identical {same}, exit codes {codes}")
    assert ok

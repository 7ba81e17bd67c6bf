from fractions import Fraction

import pytest

from minflows.asystem import build_coherent_sequence, build_system
from minflows.blueprint import density_bound, extract_blueprint, from_system, verify_blueprint
from minflows.exhaustion import build_exhaustion
from minflows.group_core import DirectProduct, FreeGroup, IntegerLattice, cyclic


def test_density_bound_z():
    exh = build_exhaustion(IntegerLattice(1), [1, 2, 2])
    assert density_bound(exh, 0) == Fraction(9, 11)
    assert density_bound(exh, 1) == Fraction(25, 51)


def test_z_blueprint_passes():
    exh = build_exhaustion(IntegerLattice(1), [1, 2, 2])
    bp = extract_blueprint(build_coherent_sequence(exh, 2), 2)
    cert = verify_blueprint(bp)
    assert cert.passed, cert.failures()
    assert cert.params["d_density"][0] == [3, "9/11"]
    assert cert.params["d_density"][1] == [3, "25/51"]


def test_greedy_system_is_not_a_blueprint():
    exh = build_exhaustion(IntegerLattice(1), [1, 2, 2])
    cert = verify_blueprint(from_system(build_system(exh, 2)))
    assert not cert.results["c_uniform"]
    assert not cert.results["nesting"]
    assert cert.results["c_matches_is_uniform"]


@pytest.mark.parametrize(
    "group, radii",
    [
        (IntegerLattice(2), [0, 1, 1, 1]),
        (FreeGroup(2), [0, 0, 1, 0]),
        (DirectProduct(IntegerLattice(1), cyclic(3)), [1, 1, 1, 1]),
        (IntegerLattice(1), [1, 2, 2, 2]),
    ],
)
def test_height_three_blueprints(group, radii):
    exh = build_exhaustion(group, radii)
    cert = verify_blueprint(extract_blueprint(build_coherent_sequence(exh, 3), 3))
    assert cert.passed, cert.failures()


def test_extract_out_of_range():
    exh = build_exhaustion(IntegerLattice(1), [1, 2])
    with pytest.raises(ValueError):
        extract_blueprint(build_coherent_sequence(exh, 1), 2)

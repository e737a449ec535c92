import math

import pytest

from golden_codes.arith import GoldenInt, QuarticInt
from golden_codes.geometry import (
    LorentzVector,
    conjugate_by_P,
    coxeter_generators,
    coxeter_relations,
    dihedral_angle,
    displacement_lower_bound,
    distance_bound_chain,
    golden_scale,
    hypercube_orbifold_euler,
    map_entries,
    mat_eq,
    mat_mul,
    metric_J,
    metric_J_tilde,
    identity,
    lorentz_inner,
    preserves_metric,
    translation_generators,
    verify_coxeter_relations,
)

PHI_F = (1 + 5**0.5) / 2


@pytest.mark.parametrize("metric", ["J", "J_tilde"])
def test_generators_are_reflections_preserving_metric(metric):
    form = metric_J() if metric == "J" else metric_J_tilde()
    for r in coxeter_generators(metric):
        assert preserves_metric(r, form)
        one = r[0][0] - r[0][0] + 1
        assert mat_eq(mat_mul(r, r), identity(5, one))


@pytest.mark.parametrize("metric", ["J", "J_tilde"])
def test_coxeter_relations_exact(metric):
    report = verify_coxeter_relations(coxeter_generators(metric))
    assert report.ok, report.first_failure
    assert len(report.checked) == 5 + 4 + 6


def test_relation_checker_catches_a_wrong_order():
    gens = coxeter_generators("J_tilde")
    report = verify_coxeter_relations(gens, orders=(4, 3, 3, 10))
    assert not report.ok and report.first_failure == "(r3r4)^10"


def test_relation_list_shape():
    names = [name for name, _, _ in coxeter_relations()]
    assert "(r0r1)^4" in names and "(r3r4)^5" in names and "(r0r4)^2" in names


def test_translations_preserve_J_and_invert():
    J = metric_J()
    for g, g_inv in translation_generators():
        assert preserves_metric(g, J)
        assert mat_eq(mat_mul(g, g_inv), identity(5, QuarticInt(1)))


def test_p_conjugation_matches_tilde_generators():
    for rJ, rT in zip(coxeter_generators("J"), coxeter_generators("J_tilde")):
        assert mat_eq(conjugate_by_P(rJ), map_entries(rT, QuarticInt.coerce))


def test_golden_scale_and_dihedral_angle():
    t = golden_scale()
    assert math.cosh(t) == pytest.approx(PHI_F, abs=1e-12)
    assert dihedral_angle(t) == pytest.approx(2 * math.pi / 5, abs=1e-12)
    # flat limit: Euclidean cube has right dihedral angles
    assert dihedral_angle(0.0) == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError):
        dihedral_angle(-1.0)


def test_lorentz_inner_modes():
    u = LorentzVector((1.0, 0, 0, 0, 0))
    assert lorentz_inner(u, u) == -1.0
    e = LorentzVector((GoldenInt(1), GoldenInt(0), GoldenInt(0), GoldenInt(0), GoldenInt(0)), "exact")
    with pytest.raises(ValueError):
        lorentz_inner(u, e)


def test_displacement_bound():
    assert displacement_lower_bound(4.0) == 0.0
    assert displacement_lower_bound(2 * math.cosh(2.0) + 3) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        displacement_lower_bound(-1)


def test_distance_chain_clamps_at_small_n():
    b = distance_bound_chain(5, 234_000)
    assert not b.asymptotic_regime_reached
    assert b.distance_bound == 0.0 and b.two_face_area == pytest.approx(2 * math.pi / 5)
    big = distance_bound_chain(10**6, 10**40)
    assert big.asymptotic_regime_reached and big.distance_bound > 0


def test_orbifold_euler_characteristic():
    from fractions import Fraction

    assert hypercube_orbifold_euler() == Fraction(17, 75)
    # 48,750 hypercubes of the sqrt5 quotient
    assert hypercube_orbifold_euler() * 48750 == 11050

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from golden_codes.arith import (
    PHI,
    S,
    SQRT5,
    GoldenInt,
    IntegerModRing,
    PrincipalIdeal,
    QuarticInt,
    enumerate_ideals_up_to_norm,
    galois_conjugate,
    reduce_mod,
    sign_of,
)

small = st.integers(-50, 50)
golden = st.builds(GoldenInt, small, small)
quartic = st.builds(QuarticInt, small, small, small, small)
PHI_F = (1 + 5**0.5) / 2


def test_phi_squared():
    assert PHI * PHI == PHI + 1
    assert SQRT5 * SQRT5 == GoldenInt(5, 0)
    assert float(SQRT5) == pytest.approx(5**0.5)


def test_s_minimal_polynomial():
    assert S**4 == S**2 + 1
    assert QuarticInt.coerce(PHI) == S * S
    assert float(S) == pytest.approx(PHI_F**0.5)


@given(golden, golden, golden)
def test_golden_ring_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == GoldenInt(0, 0)


@given(golden, golden)
def test_norm_multiplicative_and_conjugation(x, y):
    assert (x * y).norm() == x.norm() * y.norm()
    assert galois_conjugate(x * y) == galois_conjugate(x) * galois_conjugate(y)
    assert float(x) == pytest.approx(x.a + x.b * PHI_F, abs=1e-9)


@given(quartic, quartic, quartic)
def test_quartic_ring_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-9, abs=1e-6)


@given(quartic)
@settings(max_examples=200)
def test_sign_matches_float(x):
    v = float(x)
    if abs(v) > 1e-6:
        assert sign_of(x) == (1 if v > 0 else -1)
    if not x:
        assert sign_of(x) == 0


def test_sign_of_tiny_value():
    # phi^-20 is positive but far below float noise of its coefficients
    tiny = (PHI - 1) ** 20
    assert sign_of(tiny) == 1
    assert sign_of(-tiny) == -1


@given(golden)
def test_reduction_is_canonical(x):
    ideal = PrincipalIdeal(SQRT5)
    a, b = ideal.reduce(x)
    assert ideal.contains(x - GoldenInt(a, b))
    assert ideal.reduce(GoldenInt(a, b)) == (a, b)


@pytest.mark.parametrize("gen,norm", [(SQRT5, 5), (2, 4), (3, 9), (GoldenInt(3, 1), 11), (GoldenInt(2, 1), 5)])
def test_ideal_norms_and_quotient_order(gen, norm):
    ideal = PrincipalIdeal(gen)
    assert ideal.norm == norm
    assert ideal.ring.order == norm


def test_sqrt5_quotient_is_f5_with_phi_three():
    ring = PrincipalIdeal(SQRT5).ring
    assert ring.prime_field_label(ring.index(PHI)) == 3
    # ring tables agree with arithmetic in Z[phi]
    for x in ring.elements:
        for y in ring.elements:
            assert ring.add[ring.index(x), ring.index(y)] == ring.index(x + y)
            assert ring.mul[ring.index(x), ring.index(y)] == ring.index(x * y)


def test_associates_give_same_ideal():
    assert PrincipalIdeal(SQRT5) == PrincipalIdeal(SQRT5 * PHI)
    assert PrincipalIdeal(SQRT5) == PrincipalIdeal(GoldenInt(2, 1))
    assert PrincipalIdeal(2) != PrincipalIdeal(3)
    assert reduce_mod(GoldenInt(5, 0), PrincipalIdeal(SQRT5)) == 0


def test_zero_ideal_rejected():
    with pytest.raises(ValueError):
        PrincipalIdeal(0)


def test_ideal_enumeration():
    ideals = enumerate_ideals_up_to_norm(11)
    norms = [I.norm for I in ideals]
    # split primes 5 (ramified), 11 (two ideals); inert 2 and 3 give norms 4 and 9
    assert norms == sorted(norms)
    assert norms.count(5) == 1 and norms.count(4) == 1 and norms.count(9) == 1 and norms.count(11) == 2
    assert len(set(I.hnf for I in ideals)) == len(ideals)


def test_integer_mod_ring():
    r = IntegerModRing(6)
    assert r.add[5, 3] == 2 and r.mul[4, 5] == 2 and r.neg[1] == 5
    with pytest.raises(ValueError):
        IntegerModRing(1)


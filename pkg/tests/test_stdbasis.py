from fractions import Fraction as F

import pytest

from congrmod import GLOBAL, LOCAL, PolyRing, in_ideal, normal_form, std_basis
from congrmod.config import EngineConfig
from congrmod.errors import DegreeBoundExceeded, NonIntegralEntry
from congrmod.stdbasis import _spoly


@pytest.fixture
def R1(O5):
    return PolyRing(O5, ("x",))


@pytest.fixture
def R2(O5):
    return PolyRing(O5, ("x", "y"))


def test_single_variable(R1):
    B = std_basis([R1.parse("x")], LOCAL)
    assert [str(g) for g in B.gens] == ["x"]
    assert str(normal_form(R1.parse("pi"), B)) == "5"


def test_principal_local_basis(R1):
    B = std_basis([R1.parse("x*(x - pi)")], LOCAL)
    assert len(B.gens) == 1
    # leading term under the local order is the low-degree part
    assert LOCAL.leading(B.gens[0])[0] == (1,)
    assert normal_form(R1.parse("x^2 - pi*x"), B).is_zero
    # the canonical irreducible representative of the class of x^2
    nf = normal_form(R1.parse("x^2"), B)
    assert nf == R1.parse("x^2")
    assert normal_form(R1.parse("pi*x"), B) == R1.parse("x^2")
    assert normal_form(nf, B) == nf  # idempotent


def test_local_membership_sees_local_units(R1):
    # 1 - x is invertible locally, so x lies in (x - x^2)
    B = std_basis([R1.parse("x - x^2")], LOCAL)
    assert in_ideal(R1.parse("x"), B)
    Bg = std_basis([R1.parse("x - x^2")], GLOBAL)
    assert not in_ideal(R1.parse("x"), Bg)


def test_ring_b_membership(R2):
    gens = [R2.parse("x*(x - pi)"), R2.parse("y*(y - pi)"), R2.parse("x*y")]
    for order in (LOCAL, GLOBAL):
        B = std_basis(gens, order)
        assert in_ideal(R2.parse("x*y*(y - pi)"), B)
        for g in gens:
            assert in_ideal(g, B)


def test_strong_spairs_reduce_to_zero(R2):
    gens = [R2.parse("x*(x - pi)"), R2.parse("pi^2*x"), R2.parse("x*y")]
    for order in (LOCAL, GLOBAL):
        B = std_basis(gens, order)
        for i in range(len(B.gens)):
            for j in range(i + 1, len(B.gens)):
                s = _spoly(B.gens[i], B.gens[j], order)
                assert normal_form(s, B).is_zero


def test_coefficient_divisibility(R1):
    # pi*x does not reduce x
    B = std_basis([R1.parse("pi*x")], GLOBAL)
    assert str(normal_form(R1.parse("x"), B)) == "x"
    assert normal_form(R1.parse("pi*x^3"), B).is_zero


def test_randomized_membership(R2, rng):
    gens = [R2.parse("x*(x - pi)"), R2.parse("y*(y - pi)"), R2.parse("x*y")]
    for order in (GLOBAL, LOCAL):
        B = std_basis(gens, order)
        mons = [R2.one, R2.parse("x"), R2.parse("y"), R2.parse("x + y"),
                R2.parse("pi"), R2.parse("x*y - pi")]
        for _ in range(40):
            f = sum((rng.choice(mons) * rng.choice(gens) for _ in range(2)),
                    R2.zero)
            g = rng.choice(mons) * rng.choice(gens)
            assert normal_form(f + g, B).is_zero


def test_nf_idempotent_and_difference_in_ideal(R2, rng):
    gens = [R2.parse("x*(x - pi^2)")]
    B = std_basis(gens, GLOBAL)
    mons = [R2.one, R2.parse("x"), R2.parse("y"), R2.parse("x^2 - y")]
    for _ in range(25):
        f = sum((rng.choice(mons) * rng.choice(mons) for _ in range(2)), R2.zero)
        nf = normal_form(f, B)
        assert normal_form(nf, B) == nf
        assert in_ideal(f - nf, B)


def test_empty_generators_rejected(R1):
    with pytest.raises(NonIntegralEntry):
        std_basis([], GLOBAL)
    with pytest.raises(NonIntegralEntry):
        std_basis([R1.parse("x").scale(F(1, 5))], GLOBAL)


def test_degree_cap(R1):
    cfg = EngineConfig(degree_cap=2)
    with pytest.raises(DegreeBoundExceeded):
        std_basis([R1.parse("x^3 - x")], GLOBAL, cfg)


def test_valuation_cap(R1):
    cfg = EngineConfig(valuation_cap=3)
    with pytest.raises(DegreeBoundExceeded):
        std_basis([R1.parse("pi^62*x")], GLOBAL, cfg)

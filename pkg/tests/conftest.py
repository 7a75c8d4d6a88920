import random

import pytest

from congrmod import Dvr, PolyRing, build_algebra


@pytest.fixture
def O5():
    return Dvr.p_adic(5)


@pytest.fixture
def O3():
    return Dvr.p_adic(3)


@pytest.fixture
def rng():
    return random.Random(20240613)


def make_An(p, n, branch=0):
    """The congruence ring {(a, b) : a = b mod pi^n} with one of its two
    augmentations (x -> 0 or x -> pi^n)."""
    O = Dvr.p_adic(p)
    R = PolyRing(O, ("x",))
    f = R.parse(f"x*(x - pi^{n})")
    aug = [O.zero if branch == 0 else O.pi_pow(n)]
    return build_algebra(R, [f], aug, 0, claimed_mcm=True, claimed_depth=1,
                         claimed_gorenstein=True, name=f"A({n})")


def make_ring_B(p):
    """Triple congruence ring {(a, b, c) : a = b = c mod pi}."""
    O = Dvr.p_adic(p)
    R = PolyRing(O, ("x", "y"))
    rels = [R.parse("x*(x - pi)"), R.parse("y*(y - pi)"), R.parse("x*y")]
    return build_algebra(R, rels, [O.zero, O.zero], 0, claimed_depth=1,
                         claimed_mcm=True, name="B")


def make_depth_zero_example(p):
    """The dimension-two, depth-zero ring with codimension-one augmentation
    whose congruence ideal still matches the Fitting ideal."""
    O = Dvr.p_adic(p)
    R = PolyRing(O, ("x", "y"))
    rels = [R.parse("x*(x - pi)"), R.parse("pi^2*x"), R.parse("x*y")]
    return build_algebra(R, rels, [O.zero, O.zero], 1, name="D")


def make_hypersurface_2var(p, n):
    """O[[x, y]]/(x(x - pi^n)) with the zero augmentation, codimension 1."""
    O = Dvr.p_adic(p)
    R = PolyRing(O, ("x", "y"))
    return build_algebra(R, [R.parse(f"x*(x - pi^{n})")], [O.zero, O.zero], 1,
                         claimed_mcm=True, claimed_depth=2,
                         claimed_gorenstein=True, name=f"H({n})")

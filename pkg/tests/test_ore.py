from __future__ import annotations

import random
import warnings

import pytest

from artifact.algebra_core import FracK, PolyA, field
from artifact.ore import (RightDivisionUnavailable, TwistedPoly, mat, mat_mul, mat_scalar, mat_zero,
                          symbolic_eval, substitute_forms)
from artifact.series import is_zero
from artifact.submodule import coordinate_names, form_text
from artifact.tmodule import make_carlitz_tensor

F2 = field(2)
Z = FracK.zero(F2)
O = FracK.one(F2)
T = FracK(PolyA.T(F2))


def rand_frac(rng, F=F2, deg=3):
    num = PolyA([rng.randrange(F.q) for _ in range(rng.randint(0, deg))], F)
    den = PolyA([rng.randrange(F.q) for _ in range(rng.randint(0, 2))] + [1], F)
    return FracK(num, den)


def rand_twisted(rng, m=1, deg=3, F=F2):
    cs = [mat([[rand_frac(rng, F) for _ in range(m)] for _ in range(m)]) for _ in range(rng.randint(1, deg + 1))]
    return TwistedPoly(cs, F.q, FracK.zero(F), m)


def test_carlitz_square():
    C = TwistedPoly.scalar([T, O], 2, Z)
    sq = C.compose(C)
    assert sq == TwistedPoly.scalar([T * T, T * T + T, O], 2, Z)
    assert str(sq) == "T^2 + (T^2 + T)τ + τ^2"


def test_identity_is_neutral():
    rng = random.Random(0)
    f = rand_twisted(rng, 2)
    I = TwistedPoly.identity(2, 2, Z)
    assert f.compose(I) == f and I.compose(f) == f


def test_c2_tensor_square_symbolic():
    M = make_carlitz_tensor(2)
    P = M.phi_T.compose(M.phi_T)
    img = symbolic_eval(P, Z)
    names = coordinate_names(2)
    assert form_text(img[0], names, 2) == "T^2*X + X^2"
    assert form_text(img[1], names, 2) == "(T^2 + T)*X^2 + T^2*Y + Y^2"
    X0, Y0 = 0, 1
    want0 = {(X0, 0): T * T, (X0, 1): O}
    want1 = {(Y0, 0): T * T, (X0, 1): T + T * T, (Y0, 1): O}
    assert {(v, k): c for v, k, c in img[0].terms} == want0
    assert {(v, k): c for v, k, c in img[1].terms} == want1


def test_symbolic_substitution_matches_composition():
    rng = random.Random(1)
    for _ in range(10):
        f, g = rand_twisted(rng, 2, 2), rand_twisted(rng, 2, 2)
        assert substitute_forms(f, symbolic_eval(g, Z)) == symbolic_eval(f.compose(g), Z)


def test_right_divide_examples():
    tau2 = TwistedPoly.tau(1, 2, Z, 2)
    g = TwistedPoly.scalar([O, O], 2, Z)
    Q, R = tau2.right_divide(g)
    assert Q == g and R == TwistedPoly.scalar([O], 2, Z)
    Q, R = g.right_divide(g)
    assert Q == TwistedPoly.identity(1, 2, Z) and R.is_zero()
    Q, R = g.right_divide(tau2)
    assert Q.is_zero() and R == g


def test_right_divide_round_trip():
    rng = random.Random(2)
    for _ in range(40):
        f, g = rand_twisted(rng, 1, 5), rand_twisted(rng, 1, 3)
        if g.is_zero():
            continue
        Q, R = f.right_divide(g)
        assert Q.compose(g) + R == f
        assert R.is_zero() or R.degree() < g.degree()


def test_right_divide_non_invertible_leading():
    lead = mat([[O, Z], [Z, Z]])
    g = TwistedPoly([mat_scalar(2, O, Z), lead], 2, Z, 2)
    f = TwistedPoly.tau(2, 2, Z, 3)
    with pytest.raises(RightDivisionUnavailable):
        f.right_divide(g)


def test_differential_examples():
    M = make_carlitz_tensor(2)
    assert M.differential() == mat([[T, O], [Z, T]])
    assert TwistedPoly.identity(3, 2, Z).differential() == mat_scalar(3, O, Z)
    P2 = M.phi_T.compose(M.phi_T)
    assert P2.differential() == mat_scalar(2, T * T, Z)


def test_differential_is_multiplicative():
    rng = random.Random(3)
    for _ in range(20):
        f, g = rand_twisted(rng, 2, 2), rand_twisted(rng, 2, 2)
        assert f.compose(g).differential() == mat_mul(f.differential(), g.differential())


def test_composition_is_evaluation_composition():
    rng = random.Random(4)
    for _ in range(20):
        f, g = rand_twisted(rng, 2, 2), rand_twisted(rng, 2, 2)
        x = (rand_frac(rng), rand_frac(rng))
        assert f.compose(g)(x) == f(g(x))


def test_q3_tau_commutation():
    F3 = field(3)
    z = FracK.zero(F3)
    c = FracK(PolyA([1, 2], F3))
    tau = TwistedPoly.tau(1, 3, z)
    lhs = tau.compose(TwistedPoly.scalar([c], 3, z))
    assert lhs == TwistedPoly.scalar([z, c**3], 3, z)


def test_text_round_trip():
    rng = random.Random(5)
    for m in (1, 2):
        for q in (2, 3):
            f = rand_twisted(rng, m, 3, field(q))
            assert TwistedPoly.from_text(f.to_text()) == f
    assert TwistedPoly.from_text("[[] [1]; [] []]τ^1").coeff(1) == mat([[Z, O], [Z, Z]])

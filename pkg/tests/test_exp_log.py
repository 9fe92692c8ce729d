from __future__ import annotations

import random
from fractions import Fraction

import pytest

from artifact.algebra_core import FracK, PolyA, field
from artifact.exp_log import (TailNotCertifiable, carlitz_D, carlitz_L, carlitz_period, compose_series,
                              exp_coeffs, exp_eval, exp_tail_certificate, functional_equation_defects,
                              log_coeffs, log_eval)
from artifact.laurent import ExtField, Laurent, lattice_decompose
from artifact.ore import mat_identity, mat_is_zero, mat_zero
from artifact.tmodule import carlitz, evaluate_on_laurent, make_carlitz_tensor

F2 = field(2)
Tp = PolyA.T(F2)
O = FracK.one(F2)


def small(rng, v_min=1, n=12):
    return Laurent._make(F2, rng.randint(v_min, v_min + 2), [1] + [rng.randrange(2) for _ in range(n)], None)


@pytest.mark.parametrize("q", [2, 3])
def test_carlitz_exp_matches_closed_form(q):
    M = carlitz(q)
    E = exp_coeffs(M, 5 if q == 2 else 3)
    for i in range(E.order + 1):
        assert E[i][0][0] * FracK(carlitz_D(i, M.F)) == FracK.one(M.F)


def test_explicit_low_coefficients():
    E = exp_coeffs(carlitz(2), 2)
    assert E[0][0][0] == O
    assert E[1][0][0] == O / FracK(Tp * Tp + Tp)
    D2 = (Tp**4 + Tp) * (Tp * Tp + Tp) ** 2
    assert E[2][0][0] == O / FracK(D2)


def test_carlitz_log_closed_form():
    Lg = log_coeffs(carlitz(2), 5)
    assert Lg[1][0][0] == O / FracK(Tp * Tp + Tp)
    for i in range(6):
        assert Lg[i][0][0] * FracK(carlitz_L(i, F2)) == O


@pytest.mark.parametrize("m", [1, 2, 3])
def test_log_exp_round_trip(m):
    M = make_carlitz_tensor(m)
    E = exp_coeffs(M, 3)
    Lg = log_coeffs(M, 3, E)
    I = mat_identity(m, M.zero, FracK.one(M.F))
    for comp in (compose_series(Lg, E), compose_series(E, Lg)):
        assert comp[0] == I
        assert all(mat_is_zero(c) for c in comp[1:])


def test_functional_equation_c2_order3():
    E = exp_coeffs(make_carlitz_tensor(2), 3)
    assert E.order == 3
    assert all(mat_is_zero(d) for d in functional_equation_defects(E))


def test_exp_of_zero():
    E = exp_coeffs(carlitz(2), 4)
    (v,), _ = exp_eval(E, [Laurent.zero(F2)])
    assert v.is_zero()


def test_period_and_torsion_values():
    P = carlitz_period(2, 64)
    xi = P.xi
    assert xi.valuation() == -2
    E = exp_coeffs(carlitz(2), 6)
    T = Laurent.T(F2)
    (e1,), _ = exp_eval(E, [xi * Laurent.monomial(1, F2)], 60)
    assert e1.agreement(T) >= 60
    (e0,), _ = exp_eval(E, [xi], 58)
    assert e0.is_zero()
    (e2,), _ = exp_eval(E, [xi * Laurent.from_poly(Tp + 1)], 56)
    assert e2.is_zero()


def test_period_decomposes_to_one():
    P = carlitz_period(2, 40)
    Lf = ExtField([Laurent.one(F2), Laurent.one(F2)])
    w = [Lf.elem([P.xi])]
    assert lattice_decompose(w, [w]) == [Laurent.one(F2)]
    z = [Lf.elem([P.xi * Laurent.monomial(1, F2)])]
    (c,) = lattice_decompose(z, [w])
    assert c.agreement(Laurent.monomial(1, F2)) >= 30


def test_exp_additive_and_functional_equation_pointwise():
    rng = random.Random(9)
    M = carlitz(2)
    E = exp_coeffs(M, 6)
    T = Laurent.T(F2)
    prec = 40
    for _ in range(10):
        z1, z2 = small(rng), small(rng)
        (a,), _ = exp_eval(E, [z1], prec)
        (b,), _ = exp_eval(E, [z2], prec)
        (c,), _ = exp_eval(E, [z1 + z2], prec)
        assert (a + b).agreement(c) >= prec - 2
        (d,), _ = exp_eval(E, [T * z1], prec - 2)
        assert (T * a + a * a).agreement(d) >= prec - 4


def test_functional_equation_pointwise_c2():
    rng = random.Random(10)
    M = make_carlitz_tensor(2)
    E = exp_coeffs(M, 6)
    prec = 30
    for _ in range(5):
        z = [small(rng, 2), small(rng, 2)]
        ez, _ = exp_eval(E, z, prec)
        dz = evaluate_on_laurent(
            __import__("artifact.ore", fromlist=["TwistedPoly"]).TwistedPoly.constant(M.differential(), 2, M.zero), z, prec + 8)
        edz, _ = exp_eval(E, dz, prec - 2)
        rhs = evaluate_on_laurent(M.phi_T, ez, prec)
        for u, v in zip(edz, rhs):
            assert u.agreement(v) >= prec - 4


def test_log_inverts_exp_pointwise():
    rng = random.Random(12)
    M = carlitz(2)
    E = exp_coeffs(M, 6)
    Lg = log_coeffs(M, 6, E)
    for _ in range(5):
        z = small(rng, 2)
        (w,), _ = exp_eval(E, [z], 40)
        (back,), cert = log_eval(Lg, [w], 36)
        assert back.agreement(z) >= 36
        assert cert.tail_valuation >= 36


def test_tail_refused_outside_domain():
    E = exp_coeffs(carlitz(2), 3)
    with pytest.raises(TailNotCertifiable):
        exp_tail_certificate(E, 2, Fraction(5))
    Lg = log_coeffs(carlitz(2), 4)
    with pytest.raises(TailNotCertifiable):
        log_eval(Lg, [Laurent.T(F2, 3)], 20)

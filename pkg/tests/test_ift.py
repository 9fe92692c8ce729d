from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from artifact.algebra_core import FracK, PolyA, field
from artifact.ift import (IFTHypothesisError, NotRegularPoint, check_implicit, composition_residual,
                          implicit_multivar, inverse_form, inverse_pair_check, jacobian_rank, majorant_s2,
                          majorant_series, majorant_series_generic,
                          random_instance, series_from_json, series_to_json, solve_s1)
from artifact.series import TruncSeries, monomials

F2 = field(2)
Z, O = FracK.zero(F2), FracK.one(F2)
T = FracK(PolyA.T(F2))


def S(n, D, terms, zero=Z):
    return TruncSeries(n, D, terms, zero)


def example_F(D=12):
    return S(2, D, {(0, 1): O, (1, 1): O, (2, 0): O})


def test_geometric_oracle():
    h = solve_s1(example_F(12))
    # h = z^2 / (1 + z) = z^2 + z^3 + ... in characteristic 2
    assert dict(h.items()) == {(k,): O for k in range(2, 13)}
    assert composition_residual(example_F(12), h).is_zero()


def test_first_order_coefficients_q2():
    a1, a2, a3 = T + 1, T, T * T + 1
    F = S(3, 4, {(1, 0, 0): a1, (0, 1, 0): a2, (0, 0, 1): a3, (1, 1, 0): O})
    ht = inverse_form(F)
    assert ht.coeff((0, 0, 1)) == O / a3
    assert ht.coeff((1, 0, 0)) == a1 / a3
    assert ht.coeff((0, 1, 0)) == a2 / a3


def test_first_order_sign_in_odd_characteristic():
    F3 = field(3)
    z, o = FracK.zero(F3), FracK.one(F3)
    t = FracK(PolyA.T(F3))
    F = TruncSeries(2, 3, {(1, 0): t, (0, 1): t + 1, (2, 0): o}, z)
    ht = inverse_form(F)
    assert ht.coeff((1, 0)) == -t / (t + 1)
    assert ht.coeff((0, 1)) == o / (t + 1)


def test_hypotheses_enforced():
    with pytest.raises(IFTHypothesisError, match="F\\(0\\)"):
        solve_s1(S(2, 3, {(0, 0): O, (0, 1): O}))
    with pytest.raises(IFTHypothesisError, match="dF/dz_n"):
        solve_s1(S(2, 3, {(1, 0): O, (0, 2): O}))


def test_uniqueness_under_perturbation():
    F = example_F(8)
    h = solve_s1(F)
    for mu in [(2,), (5,), (8,)]:
        terms = dict(h.items())
        terms[mu] = terms.get(mu, Z) + T
        assert not composition_residual(F, S(1, 8, terms)).is_zero()


def test_random_instances_compose_to_zero():
    rng = random.Random(42)
    for _ in range(6):
        F = random_instance(rng, n=2, D=10)
        h = solve_s1(F)
        assert composition_residual(F, h).is_zero()


def test_inverse_pair():
    F = example_F(8)
    ht = inverse_form(F)
    assert inverse_pair_check(F, ht) == (True, True)


def test_majorant_on_example():
    cert, B = majorant_s2(example_F(12), Fraction(1))
    assert cert.dominated and cert.checked == 23
    assert B.coeff((0, 1)) == 1 / cert.A_n
    assert B.coeff((1, 0)) == cert.linear[0] / cert.A_n
    assert 0 < cert.certified_radius < 1


def test_majorant_dominates_random_instances():
    rng = random.Random(7)
    for _ in range(3):
        F = random_instance(rng, n=3, D=8, density=0.7)
        cert, B = majorant_s2(F)
        ht = inverse_form(F)
        nonzero = [mu for mu in monomials(3, 8, 1) if not ht.coeff(mu).is_zero()]
        assert len(nonzero) >= 50
        assert cert.dominated
        for mu in nonzero:
            assert ht.coeff(mu).abs() <= B.coeff(mu)


def test_implicit_linear_graph():
    Fs = [S(4, 3, {(0, 0, 1, 0): O, (1, 0, 0, 0): O}), S(4, 3, {(0, 0, 0, 1): O, (0, 1, 0, 0): O})]
    sol = implicit_multivar(Fs)
    assert sol.dependent == [2, 3]
    assert dict(sol.h[0].items()) == {(1, 0): O} and dict(sol.h[1].items()) == {(0, 1): O}


def test_implicit_sequential_oracle():
    D = 8
    Fs = [S(4, D, {(0, 0, 1, 0): O, (1, 0, 1, 0): O, (2, 0, 0, 0): O}),
          S(4, D, {(0, 0, 0, 1): O, (0, 0, 1, 1): O, (0, 2, 0, 0): O})]
    sol = implicit_multivar(Fs)
    assert check_implicit(Fs, sol)
    # h_1 from the one-variable oracle z1^2/(1+z1)
    assert dict(sol.h[0].items()) == {(k, 0): O for k in range(2, D + 1)}


def test_implicit_reduces_to_solve_s1():
    F = example_F(8)
    sol = implicit_multivar([F])
    assert sol.h[0] == solve_s1(F)


def test_not_regular_point():
    with pytest.raises(NotRegularPoint):
        implicit_multivar([S(2, 3, {(1, 1): O})])


def test_jacobian_rank_examples():
    assert jacobian_rank([S(1, 2, {(1,): O})]) == 1
    assert jacobian_rank([S(2, 2, {(1, 1): O})]) == 0
    assert jacobian_rank([S(2, 2, {(1, 0): O, (0, 2): O}), S(2, 2, {(0, 1): O})]) == 2


def test_json_round_trip(tmp_path):
    F = random_instance(random.Random(3), n=3, D=5)
    obj = series_to_json(F)
    assert series_from_json(json.loads(json.dumps(obj))) == F


def test_majorant_closed_form_matches_generic_solver():
    rng = random.Random(21)
    for k in range(8):
        F = random_instance(rng, n=2 + k % 2, D=7)
        r = Fraction(1, 1 + k % 3)
        assert majorant_series(F, r, 7) == majorant_series_generic(F, r, 7)

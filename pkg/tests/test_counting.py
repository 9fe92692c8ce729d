from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from artifact.algebra_core import FracK, PolyA, field
from artifact.counting import (
    D_count,
    L_count,
    MobiusComponent,
    PolyComponent,
    PRESETS,
    brute_force_count,
    carlitz_disc_preset,
    carlitz_preset,
    count_members,
    cover_and_interpolate,
    det_bound,
    exact_det,
    exponents,
    graph_parametrization,
    height,
    interpolate_hypersurface,
    invert_region,
    liouville_lower_bound,
    min_degree_sum,
    monomial_matrix,
    parabola_preset,
    point_preset,
    random_parametrization,
    rationals_in_unit_disc,
    threshold_disc_tuples,
    _param_disc_key,
    _random_small,
)
from artifact.series import TruncSeries, monomials
from artifact.tmodule import ENUMERATION_GUARD


F = field(2)
T = PolyA.T(F)


def fk(p: PolyA, d: PolyA | None = None) -> FracK:
    return FracK(p, d if d is not None else PolyA.one(F))


# ---------------------------------------------------------------- exponents


def test_D_2_of_1():
    assert D_count(2, 1) == 3
    assert sorted(monomials(2, 1)) == [(0, 0), (0, 1), (1, 0)]


@pytest.mark.parametrize("a,b", [(1, 3), (2, 2), (2, 4), (3, 3)])
def test_L_and_D_match_enumeration(a, b):
    mus = [mu for mu in product(range(b + 1), repeat=a) if sum(mu) <= b]
    assert D_count(a, b) == len(mus)
    for beta in range(b + 1):
        assert L_count(a, beta) == sum(1 for mu in mus if sum(mu) == beta)


def test_exponents_h1_d2_delta1():
    ex = exponents(1, 2, 1)
    assert (ex.D, ex.b, ex.B) == (3, 2, 3)
    assert D_count(1, 2) <= ex.D <= D_count(1, 3)
    assert ex.V_sum_d == 3
    assert ex.eps_sum_d == 1
    # the degree-sum definition of B agrees with the smallest possible sum
    assert min_degree_sum(1, ex.D) == ex.B


@pytest.mark.parametrize("h,d,delta", [(1, 2, 2), (1, 3, 2), (2, 3, 1), (2, 3, 3)])
def test_B_is_minimal_degree_sum(h, d, delta):
    ex = exponents(h, d, delta)
    assert D_count(h, ex.b) <= ex.D <= D_count(h, ex.b + 1)
    assert ex.B == min_degree_sum(h, ex.D)


def test_exponents_rejects_h_ge_d():
    with pytest.raises(ValueError):
        exponents(2, 2, 1)
    with pytest.raises(ValueError):
        exponents(1, 2, 0)


def test_eps_decreases_to_zero():
    eps = [exponents(1, 2, delta).eps(exponents(1, 2, delta).V_height) for delta in range(1, 30)]
    assert all(x >= y for x, y in zip(eps, eps[1:]))
    assert eps[-1] < Fraction(1, 3)
    sum_d = [exponents(1, 2, delta).eps_sum_d for delta in range(1, 30)]
    assert sum_d[-1] < Fraction(1, 100)


# -------------------------------------------------------------- determinant


def test_det_vanishes_on_a_line():
    xs = [fk(T), fk(T + PolyA.one(F)), FracK(PolyA.one(F), T)]
    pts = [(x, x) for x in xs]
    assert exact_det(monomial_matrix(pts, 1)).is_zero()


def test_det_vanishes_on_a_conic():
    # six points on y = x^2 give a singular 6x6 matrix at delta = 2
    xs = [fk(PolyA.const(c, F) + T * k) for k in (PolyA.zero(F), PolyA.one(F), T) for c in (0, 1)]
    pts = [(x, x * x) for x in xs]
    assert len(pts) == D_count(2, 2)
    assert exact_det(monomial_matrix(pts, 2)).is_zero()


def test_det_nonzero_in_general_position():
    pts = [(FracK.zero(F), FracK.zero(F)), (FracK.one(F), FracK.zero(F)), (FracK.zero(F), FracK.one(F))]
    assert not exact_det(monomial_matrix(pts, 1)).is_zero()


def test_det_bound_random_half_radius():
    rng = random.Random(2024)
    for _ in range(15):
        phi = random_parametrization(rng)
        ex = exponents(phi.h, phi.d, 1)
        params = [(_random_small(rng, F, 3, allow_const=False),) for _ in range(ex.D)]
        assert all(t[0].abs() <= Fraction(1, 2) for t in params)
        res = det_bound(phi, params, 1, Fraction(1, 2))
        assert res.c >= 1
        assert res.holds, (phi.name, res.abs_det, res.bound)


def test_det_bound_needs_D_points():
    phi = random_parametrization(random.Random(0))
    with pytest.raises(ValueError):
        det_bound(phi, [(FracK.zero(F),)], 1, Fraction(1, 2))


def test_liouville_lower_bound():
    rng = random.Random(5)
    pool = [x for x in rationals_in_unit_disc(F, 2)]
    X = Fraction(4)
    nonzero = 0
    for _ in range(40):
        pts = [(rng.choice(pool), rng.choice(pool)) for _ in range(3)]
        assert all(height(x) <= X for P in pts for x in P)
        val, lower = liouville_lower_bound(pts, 1, X)
        assert lower == Fraction(1, 4**6)
        if val != 0:
            nonzero += 1
            assert val >= lower
    assert nonzero > 0


# ------------------------------------------------------------------- cover


def test_cover_of_unit_disc_at_half_radius():
    keys = {_param_disc_key((t,), 1) for t in rationals_in_unit_disc(F, 3)}
    assert len(keys) == 2
    keys = {_param_disc_key((t,), 2) for t in rationals_in_unit_disc(F, 3)}
    assert len(keys) == 4


def test_interpolation_vanishes_on_its_points():
    xs = [fk(T), fk(T * T), FracK(PolyA.one(F), T), fk(T + PolyA.one(F))]
    pts = [(x, x * x + x) for x in xs]
    hyp = interpolate_hypersurface(pts, 2)
    assert hyp.is_nonzero()
    assert all(hyp(P).is_zero() for P in pts)
    # two points always lie on a line
    hyp1 = interpolate_hypersurface(pts[:2], 1)
    assert hyp1.is_nonzero() and all(hyp1(P).is_zero() for P in pts[:2])


def test_interpolation_refuses_independent_points():
    pts = [(FracK.zero(F), FracK.zero(F)), (FracK.one(F), FracK.zero(F)), (FracK.zero(F), FracK.one(F))]
    with pytest.raises(ValueError):
        interpolate_hypersurface(pts, 1)


@pytest.mark.parametrize("seed", range(6))
def test_cover_random_parametrization(seed):
    rng = random.Random(seed)
    phi = random_parametrization(rng)
    a = T * T + T
    cov = cover_and_interpolate(phi, a, 1)
    assert cov.cover_size == 2 ** cov.threshold.N
    assert cov.all_vanish
    for rec in cov.discs:
        assert rec.hypersurface.is_nonzero()
        assert all(max(height(x) for x in P) <= a.abs() for P in rec.points)
    _, _, ok = threshold_disc_tuples(cov, 1)
    assert ok


def test_monomial_composites_match_pointwise():
    zero, one = FracK.zero(F), FracK.one(F)
    g = TruncSeries(1, 8, {(0,): one, (1,): FracK(PolyA.one(F), T), (3,): one}, zero)
    phi = graph_parametrization(PolyComponent(g))
    comps = phi.monomial_composites(2, 8)
    for t in rationals_in_unit_disc(F, 1):
        P = phi((t,))
        for mu, s in comps.items():
            expect = one
            for i, e in enumerate(mu):
                expect = expect * P[i] ** e
            assert s.evaluate([t]) == expect


# ------------------------------------------------------------- brute force


def test_point_preset_counts_one():
    pre = point_preset()
    for a in (T, T * T + PolyA.one(F), T ** 3):
        r = brute_force_count(pre, a)
        assert r.N_bracket == 1
        assert r.exact_bracket


def test_parabola_minus_algebraic_part_is_empty():
    pre = parabola_preset()
    for a in (T, T * T, T ** 3 + T):
        r = brute_force_count(pre, a)
        assert r.N_bracket == 0 and r.N_height == 0
        # without the declared algebraic part the graph has points
        assert count_members(pre.member, [(FracK.zero(F), FracK.zero(F))]) == 1


def test_carlitz_disc_at_T():
    r = brute_force_count(carlitz_disc_preset(), T)
    assert r.N_bracket == 2
    assert r.N_height == 3  # 0, 1/T, 1/(T+1)
    assert r.monotone


@pytest.mark.parametrize("n", [1, 2, 3])
def test_carlitz_counts_and_checks(n):
    a = T ** n
    r = brute_force_count(carlitz_preset(), a, delta=1)
    assert r.N_bracket == 2 ** n
    assert r.exact_bracket and r.exact_height
    assert r.N_bracket <= r.N_height
    assert r.vanishing and r.end_to_end and r.bound_ok
    assert r.passed


def test_union_constant_is_sum_of_pieces():
    pre = carlitz_preset()
    a = T * T
    r = brute_force_count(pre, a, delta=1)
    parts = [cover_and_interpolate(phi, a, 1) for phi in pre.pieces]
    assert r.C == sum(p.threshold.C for p in parts)
    assert r.cover_size == sum(p.cover_size for p in parts)
    assert r.hypersurfaces == sum(p.hypersurfaces for p in parts)


def test_guard():
    with pytest.raises(ValueError, match="guard"):
        brute_force_count(carlitz_preset(), T ** 13, guard=ENUMERATION_GUARD)


def test_csv_row_columns():
    r = brute_force_count(carlitz_preset(), T, delta=1)
    assert list(r.csv_row()) == ["a", "|a|", "N_bracket", "N_height", "cover_size", "hypersurfaces",
                                 "bound", "pass/fail"]
    assert r.csv_row()["pass/fail"] == "pass"
    assert set(PRESETS) == {"carlitz", "carlitz-disc", "point", "parabola"}


# ------------------------------------------------------------------ inversion


def test_inversion_examples():
    P = (fk(T), fk(T * T))
    Q = tuple(x.inv() for x in P)
    assert Q == (FracK(PolyA.one(F), T), FracK(PolyA.one(F), T * T))
    assert [height(x) for x in P] == [height(x) for x in Q]
    z = fk(T ** 3 + T)
    assert z.abs() > 1 and z.inv().abs() < 1


def test_inversion_preserves_counts():
    inner = rationals_in_unit_disc(F, 2)
    pool = [x for x in inner if not x.is_zero()]
    pool += [x.inv() for x in pool if x.abs() < 1]
    pool = list(dict.fromkeys(pool))
    assert all(height(x) <= 4 for x in pool)

    def w2(z):
        return all(x.abs() > 1 for x in z) and z[1] == z[0] * z[0]

    w2_inv = invert_region(w2)
    cands = list(product(pool, repeat=2))
    n1 = count_members(w2, cands)
    n2 = count_members(w2_inv, cands)
    assert n1 == n2 > 0
    assert not w2_inv((FracK.zero(F), FracK.one(F)))


def test_displayed_V_is_too_small_for_the_vanishing_argument():
    # graph of t -> alpha t / (1 + gamma t); with V = V_sum_d the threshold disc
    # of radius 1/16 holds three non-collinear points of height <= |T^3|
    one = PolyA.one(F)
    alpha = FracK(T * T + T + one, T * T)
    gamma = FracK(T + one, T * T)
    phi = graph_parametrization(MobiusComponent(alpha, FracK.zero(F), gamma))
    a = T**3
    coarse = cover_and_interpolate(phi, a, 1, mode="sum_d")
    assert coarse.threshold.N == 4 and not coarse.all_vanish
    bad = [rec for rec in coarse.discs if rec.hypersurface is None]
    assert bad
    det_abs, _ = liouville_lower_bound(bad[0].points[:3], 1, a.abs())
    # the determinant is nonzero yet below |a|^(-V_sum_d), so the displayed V
    # cannot serve as the Liouville exponent; V_height = d delta D can
    assert 0 < det_abs < a.abs() ** -exponents(1, 2, 1).V_sum_d
    assert det_abs >= a.abs() ** -exponents(1, 2, 1).V_height
    assert cover_and_interpolate(phi, a, 1).all_vanish

from __future__ import annotations

from itertools import product

import pytest

from artifact.algebra_core import FracK, PolyA, field, polys_below
from artifact.exp_log import carlitz_period
from artifact.laurent import Laurent
from artifact.ore import TwistedPoly, mat, mat_pow, mat_is_zero
from artifact.tmodule import (carlitz, direct_sum, drinfeld, gallery_check_c2_identity, isogeny_graph_check,
                              lattice_intersection_rank, make_carlitz_tensor, module_by_name, phi_of,
                              torsion_lie_side, torsion_module_side, twist_action)

F2 = field(2)
Tp = PolyA.T(F2)
Z, O, T = FracK.zero(F2), FracK.one(F2), FracK(Tp)


def test_carlitz_and_tensor_shapes():
    C = carlitz(2)
    assert C.phi_T == TwistedPoly.scalar([T, O], 2, Z)
    C2 = make_carlitz_tensor(2)
    assert C2.coefficient(0) == mat([[T, O], [Z, T]])
    assert C2.coefficient(1) == mat([[Z, Z], [O, Z]])
    for m in range(1, 6):
        N = make_carlitz_tensor(m).nilpotent_part()
        assert mat_is_zero(mat_pow(N, m))
        assert m == 1 or not mat_is_zero(mat_pow(N, m - 1))
        assert make_carlitz_tensor(m).nilpotency_order() == m


def test_module_by_name():
    assert module_by_name("carlitz").m == 1
    assert module_by_name("C^2").m == 2
    assert module_by_name("C^{⊗3}").m == 3
    with pytest.raises(ValueError):
        module_by_name("elliptic")


def test_phi_of_examples():
    C = carlitz(2)
    assert phi_of(Tp, C) == C.phi_T
    a = Tp * Tp + Tp
    assert phi_of(a, C) == C.phi_T.compose(C.phi_T) + C.phi_T
    C2 = make_carlitz_tensor(2)
    P = phi_of(Tp * Tp, C2)
    assert P.coeff(0) == mat([[T * T, Z], [Z, T * T]])
    assert P.coeff(1) == mat([[O, Z], [T * T + T, O]])
    assert P.degree() == 1


@pytest.mark.parametrize("name", ["carlitz", "C^2"])
def test_homomorphism_law_exhaustive(name):
    M = module_by_name(name)
    polys = list(polys_below(F2, 4))
    phis = {a: phi_of(a, M) for a in polys}
    for a, b in product(polys, repeat=2):
        assert phi_of(a * b, M) == phis[a].compose(phis[b])
        assert phis[a] + phis[b] == phis[a + b]


def test_lie_torsion_examples():
    t1 = torsion_lie_side(Tp, 1)
    assert {x for (x,) in t1.tuples} == {Z, FracK(PolyA.one(F2), Tp)}
    t2 = torsion_lie_side(Tp * Tp, 1)
    T2 = Tp * Tp
    want = {Z, FracK(PolyA.one(F2), Tp), FracK(PolyA.one(F2), T2), FracK(Tp + 1, T2)}
    assert {x for (x,) in t2.tuples} == want
    assert t2.check_normalization()


@pytest.mark.parametrize("d", [1, 2])
def test_lie_torsion_counts(d):
    for deg in range(0, 5):
        for a in [Tp**deg, Tp**deg + 1] if deg else [PolyA.one(F2)]:
            t = torsion_lie_side(a, d)
            assert len(t) == 2 ** (d * deg)
            assert any(all(x.is_zero() for x in tup) for tup in t.tuples)


def test_lie_torsion_guard():
    with pytest.raises(ValueError, match="guard"):
        torsion_lie_side(Tp**30, 1, guard=1000)


def test_module_torsion_T():
    rep = torsion_module_side(Tp, carlitz(2))
    vals = sorted((p[0].valuation() if not p[0].is_zero() else 99) for p in rep.points)
    assert len(rep) == 2 and vals == [-1, 99]
    nz = next(p[0] for p in rep.points if not p[0].is_zero())
    assert nz == Laurent.T(F2)


def test_module_torsion_T2_contains_hensel_roots():
    rep = torsion_module_side(Tp * Tp, carlitz(2), prec=48)
    assert len(rep) == 4
    T_ = Laurent.T(F2)
    others = [p[0] for p in rep.points if not p[0].is_zero() and p[0] != T_]
    assert len(others) == 2
    for x in others:  # roots of x^2 + T x + T
        assert (x * x + T_ * x + T_).valuation() >= 40


def test_module_torsion_C2():
    M = make_carlitz_tensor(2)
    rep = torsion_module_side(Tp, M)
    assert len(rep) == 2
    P = phi_of(Tp, M)
    for pt in rep.points:
        from artifact.tmodule import evaluate_on_laurent
        assert all(v.is_zero() for v in evaluate_on_laurent(P, list(pt)))


def test_module_torsion_extension_scope():
    rep = torsion_module_side(Tp * Tp + Tp + 1, carlitz(2), field_scope="L", ext_degree=2)
    assert len(rep) == 4


def test_drinfeld_rank_two_reports_ramification():
    phi = drinfeld([T, Z, O])  # T + tau^2
    rep = torsion_module_side(Tp, phi)
    assert any("ramified" in n for n in rep.notes)


def test_gallery_c2_identity():
    res = gallery_check_c2_identity()
    assert res["holds"] and res["coefficientwise"] and res["sqrt_T2_plus_T_is_T_plus_S"]
    assert res["tau_degree"] == [2, 2]


def test_isogeny_identity_and_tau():
    C = carlitz(2)
    tests = [Tp, Tp * Tp + 1]
    act = lambda a: phi_of(a, C)
    assert isogeny_graph_check(act, act, TwistedPoly.identity(1, 2, Z), tests)["stabilized"]
    assert isogeny_graph_check(act, twist_action(C, 1), TwistedPoly.tau(1, 2, Z), tests)["stabilized"]
    res = isogeny_graph_check(act, act, TwistedPoly.tau(1, 2, Z), tests)
    assert not res["stabilized"] and res["rows"][0]["witness"]


def test_lattice_rank_drops_on_proper_subspace():
    xi = carlitz_period(2, 40).xi
    zero = Laurent.zero(F2)
    periods = [[xi, zero], [zero, xi]]  # C x C
    H = [[zero, Laurent.one(F2)]]     # Lie of 0 x G_a
    r = lattice_intersection_rank(periods, H)
    assert r["rank_lattice"] == 2 and r["rank_intersection"] == 1 < r["rank_lattice"]


def test_direct_sum_blocks():
    M = direct_sum(carlitz(2), make_carlitz_tensor(2))
    assert M.m == 3 and M.rank == 2
    assert M.coefficient(1)[2][1] == O

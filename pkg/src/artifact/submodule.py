"""Sub-T^j-modules: dPhi(T^j), stabilization of coordinate subgroups and
linear subspaces, the power-of-p families and the binomial congruences.

A coordinate pattern is the subgroup of G_a^m cut out by X_c = 0 for c in a
constrained set.  Stabilization under Phi(a) is decided symbolically: Phi(a)
is applied to the general point of the pattern and the constrained
coordinates of the image must vanish as q-linear forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .algebra_core import FracK, PolyA, binom_mod_p, pretty
from .ore import (QLinearForm, TwistedPoly, mat_add, mat_is_zero, mat_pow, mat_scalar,
                  mat_vec, mat_zero, substitute_forms)
from .tmodule import TModule, make_carlitz_tensor, phi_of

_ORDINALS = ["first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth"]


@dataclass(frozen=True)
class SubgroupPattern:
    """Either a coordinate pattern (``constrained``) or a linear subspace (``basis``)."""

    m: int
    constrained: frozenset = frozenset()
    basis: tuple | None = None

    def __post_init__(self):
        if any(not 0 <= c < self.m for c in self.constrained):
            raise ValueError("constrained coordinates must lie in 0..m-1")
        if self.basis is not None and self.constrained:
            raise ValueError("give either a coordinate pattern or a basis, not both")

    @classmethod
    def coordinates(cls, m: int, constrained) -> "SubgroupPattern":
        return cls(m, frozenset(constrained))

    @classmethod
    def full(cls, m: int) -> "SubgroupPattern":
        return cls(m)

    @classmethod
    def subspace(cls, m: int, vectors) -> "SubgroupPattern":
        return cls(m, basis=tuple(tuple(v) for v in vectors))

    @property
    def is_coordinate(self) -> bool:
        return self.basis is None

    @property
    def dim(self) -> int:
        if self.is_coordinate:
            return self.m - len(self.constrained)
        return _rank([list(v) for v in self.basis])

    def label(self) -> str:
        """Product notation such as 0 x G_a."""
        if not self.is_coordinate:
            return f"span of {len(self.basis)} vectors"
        return " x ".join("0" if c in self.constrained else "G_a" for c in range(self.m))

    def to_json(self) -> dict:
        if self.is_coordinate:
            return {"m": self.m, "constrained": sorted(self.constrained), "label": self.label()}
        return {"m": self.m, "basis": [[x.to_text() for x in v] for v in self.basis]}


@dataclass
class Verdict:
    holds: bool
    witness: str | None = None
    details: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------- differential

def d_phi_power(M: TModule, j: int):
    """(T I + N)^j = sum_i binom(j, i) T^(j-i) N^i, coefficients reduced mod p."""
    p = M.F.p
    z = M.zero
    N = M.nilpotent_part()
    acc = mat_zero(M.m, z)
    for i in range(min(j, M.m - 1) + 1):
        b = binom_mod_p(j, i, p)
        if not b:
            continue
        c = FracK(PolyA.T(M.F, j - i)) * FracK(PolyA.const(M.F.from_int(b), M.F))
        Ni = mat_pow(N, i)
        acc = mat_add(acc, tuple(tuple(c * x for x in r) for r in Ni))
    return acc


def d_phi_power_direct(M: TModule, j: int):
    """The same matrix read off phi_of(T^j)."""
    return phi_of(PolyA.T(M.F, j), M).differential()


def is_scalar_T_power(M: TModule, A, j: int) -> bool:
    return A == mat_scalar(M.m, FracK(PolyA.T(M.F, j)), M.zero)


# --------------------------------------------------------------- stabilization

def coordinate_names(m: int) -> list[str]:
    if m <= 4:
        return ["X", "Y", "Z", "W"][:m]
    return [f"X{i + 1}" for i in range(m)]


def _coeff_text(c: FracK) -> str:
    s = str(c)
    return f"({s})" if " + " in s and not c.num.is_zero() and c.den.is_one() else s


def form_text(form: QLinearForm, names: list[str], q: int) -> str:
    if form.is_zero():
        return "0"
    parts = []
    for v, k, c in form.terms:
        mon = names[v] if k == 0 else f"{names[v]}^{q ** k}"
        parts.append(mon if c == FracK.one(c.num.F) else f"{_coeff_text(c)}*{mon}")
    return " + ".join(parts)


def _as_poly(M: TModule, a) -> PolyA:
    return a if isinstance(a, PolyA) else PolyA(a, M.F)


def _phi(M: TModule, a) -> TwistedPoly:
    return a if isinstance(a, TwistedPoly) else phi_of(_as_poly(M, a), M)


def is_stabilized(M: TModule, a, S: SubgroupPattern, label: str | None = None) -> Verdict:
    """Does Phi(a) map S into itself?  ``a`` may also be a precomputed Phi(a)."""
    if S.m != M.m:
        raise ValueError("pattern and module dimensions differ")
    P = _phi(M, a)
    if label is None:
        label = f"Phi({pretty(a)})" if isinstance(a, PolyA) else "Phi(a)"
    if S.is_coordinate:
        return _stabilized_coordinates(M, P, S, label)
    return _stabilized_subspace(M, P, S, label)


def _stabilized_coordinates(M: TModule, P: TwistedPoly, S: SubgroupPattern, label: str) -> Verdict:
    one = FracK.one(M.F)
    empty = QLinearForm(())
    point = tuple(empty if c in S.constrained else QLinearForm.variable(c, one) for c in range(M.m))
    image = substitute_forms(P, point)
    names = coordinate_names(M.m)
    arg = ",".join("0" if c in S.constrained else names[c] for c in range(M.m))
    for c in sorted(S.constrained):
        if not image[c].is_zero():
            where = _ORDINALS[c] if c < len(_ORDINALS) else f"coordinate {c + 1}"
            expr = form_text(image[c], names, M.q)
            return Verdict(False, f"{where} coordinate of {label}({arg}) = {expr} != 0",
                           {"coordinate": c, "expression": expr})
    return Verdict(True, None, {"image": [form_text(f, names, M.q) for f in image]})


def _stabilized_subspace(M: TModule, P: TwistedPoly, S: SubgroupPattern, label: str) -> Verdict:
    # x = sum s_k v_k maps to sum_i sum_k (A_i v_k^(q^i)) s_k^(q^i)
    basis = [list(v) for v in S.basis]
    r = _rank(basis)
    for i, A in enumerate(P.coeffs):
        if mat_is_zero(A):
            continue
        for k, v in enumerate(S.basis):
            w = mat_vec(A, tuple(x.frob(i) for x in v))
            if all(x.is_zero() for x in w):
                continue
            if _rank(basis + [list(w)]) > r:
                return Verdict(False, f"tau^{i} coefficient of {label} sends basis vector {k + 1} "
                               f"outside the subspace: ({', '.join(str(x) for x in w)})",
                               {"tau_index": i, "basis_index": k})
    return Verdict(True)


def tangent_stabilized(A, S: SubgroupPattern) -> bool:
    """Is the coordinate subspace Lie(S) stable under the matrix A?"""
    free = [c for c in range(S.m) if c not in S.constrained]
    return all(A[r][c].is_zero() for r in S.constrained for c in free)


def _rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inv()
        for i in range(r + 1, len(rows)):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def all_coordinate_patterns(m: int, proper: bool = True) -> list[SubgroupPattern]:
    lo, hi = (1, m - 1) if proper else (0, m)
    out = []
    for k in range(lo, hi + 1):
        for cs in combinations(range(m), k):
            out.append(SubgroupPattern.coordinates(m, cs))
    return out


# ------------------------------------------------------------ power families

def _T_power_actions(M: TModule, jmax: int) -> dict[int, TwistedPoly]:
    """Phi(T^j) for j = 1..jmax by repeated composition with Phi(T)."""
    out = {1: M.phi_T}
    for j in range(2, jmax + 1):
        out[j] = M.phi_T.compose(out[j - 1])
    return out


def power_family_pattern(m: int, p: int, beta: int) -> SubgroupPattern:
    """X_(s p^beta + 1) = 0 for all s, i.e. (0 x G_a^(p^beta - 1))^(m / p^beta)."""
    step = p**beta
    if m % step:
        raise ValueError(f"p^beta = {step} does not divide m = {m}")
    return SubgroupPattern.coordinates(m, range(0, m, step))


def power_family_scan(m: int, q: int = 2, betas=None) -> list[dict]:
    p = _char(q)
    if betas is None:
        betas = [b for b in range(1, m.bit_length() + 1) if m % p**b == 0]
    M = make_carlitz_tensor(m, q)
    rows = []
    for beta in betas:
        if m % p**beta:
            continue
        S = power_family_pattern(m, p, beta)
        T = PolyA.T(M.F)
        big = is_stabilized(M, T ** (p**beta), S)
        row = {"m": m, "q": q, "beta": beta, "pattern": S.label(),
               "j": p**beta, "stabilized": big.holds, "witness": big.witness}
        if beta >= 1:
            small = is_stabilized(M, T ** (p ** (beta - 1)), S)
            row.update({"j_smaller": p ** (beta - 1), "stabilized_smaller": small.holds,
                        "witness_smaller": small.witness})
        rows.append(row)
    return rows


def _char(q: int) -> int:
    from .algebra_core import field
    return field(q).p


def congruence_condition(j: int, m: int, p: int, cross_validate: bool = True,
                         max_m: int = 4) -> Verdict:
    """binom(j, i) = binom(m, i) mod p for i = 1..m-1, plus a check on C^(x)m."""
    if j < m:
        raise ValueError("congruence_condition expects j >= m")
    bad = [i for i in range(1, m) if binom_mod_p(j, i, p) != binom_mod_p(m, i, p)]
    holds = not bad
    details: dict = {"j": j, "m": m, "p": p, "failing_i": bad}
    witness = None if holds else f"binom({j},{bad[0]}) != binom({m},{bad[0]}) mod {p}"
    if holds and cross_validate and m <= max_m:
        M = make_carlitz_tensor(m, p)
        T = PolyA.T(M.F)
        Pj, Pm = phi_of(T**j, M), phi_of(T**m, M)
        tested, counter = [], []
        for S in all_coordinate_patterns(m):
            if is_stabilized(M, Pj, S):
                tested.append(S.label())
                if not is_stabilized(M, Pm, S):
                    counter.append(S.label())
        details.update({"sub_Tj_patterns": tested, "not_sub_Tm": counter,
                        "cross_validation": not counter})
    return Verdict(holds, witness, details)


# ------------------------------------------------------------------ j-scan

@dataclass
class JScan:
    module: str
    jmax: int
    table: list[dict]
    candidates: list[str]
    j_empirical: int | None
    theorem_bound: int
    bound_holds: bool

    def to_json(self) -> dict:
        return {"module": self.module, "jmax": self.jmax, "theorem_bound": self.theorem_bound,
                "bound_holds": self.bound_holds, "candidates": self.candidates,
                "j_empirical": self.j_empirical, "table": self.table}


def scan_j(M: TModule, jmax: int = 8, patterns: list[SubgroupPattern] | None = None) -> JScan:
    """Stabilization table over j = 1..jmax and the first j stabilizing every candidate.

    Candidates are the scanned patterns stabilized by Phi(T^j) for some
    j <= jmax.  The reported j is evidence over this family only.
    """
    patterns = all_coordinate_patterns(M.m) if patterns is None else patterns
    actions = _T_power_actions(M, jmax)
    p = M.F.p
    table = []
    stab = {}
    for j in range(1, jmax + 1):
        dphi = actions[j].differential()
        for S in patterns:
            v = is_stabilized(M, actions[j], S, label=f"Phi(T^{j})")
            stab[(j, S)] = v.holds
            table.append({"j": j, "pattern": S.label(), "stabilized": v.holds,
                          "tangent_stabilized": tangent_stabilized(dphi, S),
                          "witness": v.witness})
    cands = [S for S in patterns if any(stab[(j, S)] for j in range(1, jmax + 1))]
    j_emp = next((j for j in range(1, jmax + 1) if all(stab[(j, S)] for S in cands)), None)
    n = M.nilpotency_order()
    bound = p**n
    dbound = d_phi_power(M, bound)
    bound_ok = is_scalar_T_power(M, dbound, bound) and all(tangent_stabilized(dbound, S) for S in cands)
    return JScan(M.name, jmax, table, [S.label() for S in cands], j_emp, bound, bound_ok)

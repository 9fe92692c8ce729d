"""T-modules: Carlitz, its tensor powers, Drinfeld modules and products.

``phi_of`` builds Phi(a) by Horner composition.  Torsion is enumerated on
the Lie side as fractions and on the module side as roots in k_inf (or an
unramified extension) of the triangularized additive system.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .algebra_core import FracK, PolyA, field, proper_fractions
from .laurent import DEFAULT_PREC, Laurent, PrecisionError, roots_in_k_inf, solve_linear
from .ore import (TwistedPoly, mat, mat_add, mat_identity, mat_is_zero, mat_mul, mat_pow,
                  mat_scalar, mat_sub, mat_zero)
from .series import is_zero

ENUMERATION_GUARD = 10**7


class TorsionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TModule:
    m: int
    q: int
    phi_T: TwistedPoly
    rank: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.phi_T.m != self.m:
            raise ValueError("dimension of Phi(T) does not match m")
        if self.phi_T.is_zero() or self.phi_T.degree() < 1:
            raise ValueError("Phi(T) must have positive tau-degree")
        N = self.nilpotent_part()
        if not mat_is_zero(mat_pow(N, self.m)):
            raise ValueError("dPhi(T) - T*I is not nilpotent")

    @property
    def F(self):
        return self.phi_T.zero.F

    @property
    def zero(self) -> FracK:
        return self.phi_T.zero

    @property
    def dtilde(self) -> int:
        return self.phi_T.degree()

    def coefficient(self, j: int):
        return self.phi_T.coeff(j)

    def differential(self):
        return self.phi_T.differential()

    def nilpotent_part(self):
        T = FracK(PolyA.T(self.F))
        return mat_sub(self.differential(), mat_scalar(self.m, T, self.zero))

    def nilpotency_order(self) -> int:
        """n(A): least k with N^k = 0."""
        N = self.nilpotent_part()
        k = 0
        while not mat_is_zero(mat_pow(N, k)):
            k += 1
        return k

    def identity(self) -> TwistedPoly:
        return TwistedPoly.identity(self.m, self.q, self.zero)


# --------------------------------------------------------------- constructors

def _frac(x, F) -> FracK:
    if isinstance(x, FracK):
        return x
    if isinstance(x, PolyA):
        return FracK(x)
    if isinstance(x, int):
        return FracK(PolyA.const(x, F))
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def carlitz(q: int = 2) -> TModule:
    return make_carlitz_tensor(1, q)


def make_carlitz_tensor(m: int, q: int = 2) -> TModule:
    """C^{(x)m}: Phi(T) = (T I + N) + E tau with N superdiagonal and E the bottom-left unit."""
    if m < 1:
        raise ValueError("m must be at least 1")
    F = field(q)
    z, o = FracK.zero(F), FracK.one(F)
    T = FracK(PolyA.T(F))
    A0 = mat([[T if i == j else (o if j == i + 1 else z) for j in range(m)] for i in range(m)])
    A1 = mat([[o if (i == m - 1 and j == 0) else z for j in range(m)] for i in range(m)])
    P = TwistedPoly([A0, A1], q, z, m)
    return TModule(m, q, P, rank=1, name="C" if m == 1 else f"C^{m}")


def drinfeld(coeffs, q: int = 2) -> TModule:
    """Phi(T) = T + g_1 tau + ... + g_r tau^r."""
    F = field(q)
    cs = [_frac(c, F) for c in coeffs]
    T = FracK(PolyA.T(F))
    if cs[0] != T:
        raise ValueError("constant coefficient of a Drinfeld module must be T")
    P = TwistedPoly.scalar(cs, q, FracK.zero(F))
    return TModule(1, q, P, rank=P.degree(), name="drinfeld")


def direct_sum(*mods: TModule) -> TModule:
    """Block-diagonal product of T-modules."""
    q = mods[0].q
    F = mods[0].F
    z = FracK.zero(F)
    m = sum(M.m for M in mods)
    deg = max(M.dtilde for M in mods)
    coeffs = []
    for i in range(deg + 1):
        rows = [[z] * m for _ in range(m)]
        off = 0
        for M in mods:
            A = M.coefficient(i)
            for r in range(M.m):
                for c in range(M.m):
                    rows[off + r][off + c] = A[r][c]
            off += M.m
        coeffs.append(mat(rows))
    ranks = [M.rank for M in mods]
    rank = sum(ranks) if all(r is not None for r in ranks) else None
    return TModule(m, q, TwistedPoly(coeffs, q, z, m), rank=rank, name=" x ".join(M.name for M in mods))


def drinfeld_power(phi: TModule, k: int) -> TModule:
    return direct_sum(*([phi] * k))


def from_matrices(matrices, q: int = 2, rank: int | None = None, name: str = "custom") -> TModule:
    F = field(q)
    cs = [mat([[_frac(x, F) for x in r] for r in M]) for M in matrices]
    return TModule(len(cs[0]), q, TwistedPoly(cs, q, FracK.zero(F)), rank=rank, name=name)


def module_by_name(name: str, q: int = 2) -> TModule:
    """'carlitz' / 'C', 'C^m' or 'C^{(x)m}' style names."""
    s = name.strip().replace(" ", "")
    if s.lower() in ("carlitz", "c", "c^1"):
        return carlitz(q)
    for prefix in ("C^", "C^{⊗", "C⊗"):
        if s.startswith(prefix):
            digits = "".join(ch for ch in s[len(prefix):] if ch.isdigit())
            if digits:
                return make_carlitz_tensor(int(digits), q)
    raise ValueError(f"unknown module name {name!r}")


# ------------------------------------------------------------------- action

def phi_of(a: PolyA, M: TModule) -> TwistedPoly:
    """Phi(a) = sum a_k Phi(T)^k by Horner's rule."""
    if a.F != M.F:
        raise ValueError("polynomial and module live over different constant fields")
    z = M.zero
    acc = TwistedPoly([mat_zero(M.m, z)], M.q, z, M.m)
    for c in reversed(a.c):
        acc = acc.compose(M.phi_T)
        if c:
            acc = acc + TwistedPoly.constant(mat_scalar(M.m, FracK(PolyA.const(c, M.F)), z), M.q, z)
    return acc


# ------------------------------------------------------------ Lie-side torsion

@dataclass
class TorsionSetLie:
    a: PolyA
    d: int
    tuples: list

    def __len__(self):
        return len(self.tuples)

    def check_normalization(self) -> bool:
        da = self.a.abs()
        for t in self.tuples:
            for x in t:
                if x.is_zero():
                    continue
                if not (x.num.abs() < x.den.abs() <= da and (self.a % x.den).is_zero()):
                    return False
        return True


def torsion_lie_side(a: PolyA, d: int = 1, guard: int = ENUMERATION_GUARD) -> TorsionSetLie:
    """Representatives z in k^d with a z in A^d, normalized to |z_i| < 1."""
    if a.is_zero():
        raise ValueError("a must be nonzero")
    total = a.F.q ** (d * a.deg())
    if total > guard:
        raise ValueError(f"enumeration guard exceeded: q^(d deg a) = {total} > {guard}")
    base = list(proper_fractions(a))
    return TorsionSetLie(a, d, [tuple(t) for t in product(base, repeat=d)])


# ---------------------------------------------------------- module-side torsion

@dataclass
class TorsionReport:
    a: PolyA
    points: list
    certified_digits: list
    notes: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.points)


def _entry_poly(P: TwistedPoly, r: int, c: int) -> TwistedPoly:
    return TwistedPoly.scalar([A[r][c] for A in P.coeffs], P.q, P.zero)


def triangularize(P: TwistedPoly) -> list[list[TwistedPoly]]:
    """Row-reduce an m x m matrix over K{tau} to upper triangular shape by Euclid."""
    m = P.m
    rows = [[_entry_poly(P, r, c) for c in range(m)] for r in range(m)]
    for col in range(m):
        while True:
            live = [r for r in range(col, m) if not rows[r][col].is_zero()]
            if not live:
                raise TorsionError("Phi(a) is singular: infinite kernel")
            piv = min(live, key=lambda r: rows[r][col].degree())
            others = [r for r in live if r != piv]
            if not others:
                rows[col], rows[piv] = rows[piv], rows[col]
                break
            for r in others:
                Q, _ = rows[r][col].right_divide(rows[piv][col])
                rows[r] = [rows[r][j] - Q.compose(rows[piv][j]) for j in range(m)]
    return rows


def _to_laurent(x: FracK, F_target, prec: int) -> Laurent:
    L = Laurent.from_frac(x, prec)
    if F_target is L.F:
        return L
    return Laurent._make(F_target, L.v, list(L.c), L.prec)


def _additive_coeffs(P: TwistedPoly, F_target, prec: int) -> list[Laurent]:
    """Ordinary coefficient list of x -> P(x) = sum c_i x^(q^i)."""
    cs = P.scalar_coeffs()
    q = P.q
    out = [Laurent.zero(F_target)] * (q ** (len(cs) - 1) + 1)
    for i, c in enumerate(cs):
        out[q**i] = _to_laurent(c, F_target, prec)
    return out


def _apply_scalar(P: TwistedPoly, x: Laurent, prec: int) -> Laurent:
    acc = Laurent.zero(x.F)
    xp = x
    for i, c in enumerate(P.scalar_coeffs()):
        if i:
            xp = xp ** P.q
        if not c.is_zero():
            acc = acc + _to_laurent(c, x.F, prec) * xp
    return acc


def evaluate_on_laurent(P: TwistedPoly, x: list[Laurent], prec: int = DEFAULT_PREC) -> list[Laurent]:
    """Phi(a)(x) for a vector x in k_inf^m; uses ordinary q-th powers."""
    m = P.m
    out = []
    for r in range(m):
        acc = Laurent.zero(x[0].F)
        for c in range(m):
            acc = acc + _apply_scalar(_entry_poly(P, r, c), x[c], prec)
        out.append(acc)
    return out


def torsion_module_side(a: PolyA, M: TModule, field_scope: str = "k_inf", prec: int = 48,
                        ext_degree: int = 1) -> TorsionReport:
    """Roots of Phi(a)(x) = 0 in k_inf^m, or in F_{q^n}((1/T))^m for field_scope 'L'."""
    if a.is_zero():
        raise ValueError("a must be nonzero")
    if field_scope == "k_inf":
        F_target = M.F
    elif field_scope == "L":
        if not M.F.prime:
            raise NotImplementedError("unramified extension scope needs a prime field of constants")
        F_target = field(M.F.q**ext_degree)
    else:
        raise ValueError(f"unknown field scope {field_scope!r}")
    P = phi_of(a, M)
    rows = triangularize(P)
    m = M.m
    notes: list[str] = []
    work = prec + 8
    partial: list[list[Laurent]] = [[]]
    for k in range(m - 1, -1, -1):
        nxt = []
        for tail in partial:
            const = Laurent.zero(F_target)
            for j in range(k + 1, m):
                const = const + _apply_scalar(rows[k][j], tail[j - k - 1], work)
            f = _additive_coeffs(rows[k][k], F_target, work)
            f[0] = f[0] + const
            rep = roots_in_k_inf(f, work)
            notes.extend(rep.notes)
            for x in rep.roots:
                nxt.append([x] + tail)
        partial = nxt
    points, digits = [], []
    for pt in partial:
        res = evaluate_on_laurent(P, pt, work)
        vals = [r.valuation() for r in res]
        cert = min((v for v in vals if v is not None), default=None)
        points.append(tuple(pt))
        digits.append(cert)
    return TorsionReport(a, points, digits, notes)


# --------------------------------------------------------------------- gallery

def gallery_check_c2_identity(samples: int = 8, seed: int = 0) -> dict:
    """C_(2)(T)(sqrt z) = sqrt(C(T^2)(z)) over F_2[S] with T = S^2."""
    F = field(2)
    S = PolyA.T(F)
    T = S * S
    z, o = FracK.zero(F), FracK.one(F)
    C_T = TwistedPoly.scalar([FracK(T), o], 2, z)
    C_T2 = C_T.compose(C_T)
    # sqrt(C(T^2)(x^2)): coefficients of C(T^2) o tau, then inverse Frobenius, shifted down
    shifted = C_T2.compose(TwistedPoly.tau(1, 2, z))
    roots = [c.frob_root() for c in shifted.scalar_coeffs()[1:]]
    computed = TwistedPoly.scalar(roots, 2, z)
    expected = TwistedPoly.scalar([FracK(T), FracK(T + S), o], 2, z)
    sqrt_check = (T * T + T).frob_root() == T + S
    rng = random.Random(seed)
    pointwise = True
    for _ in range(samples):
        num = PolyA([rng.randrange(2) for _ in range(rng.randint(1, 5))], F)
        den = PolyA([rng.randrange(2) for _ in range(rng.randint(0, 3))] + [1], F)
        x = FracK(num, den)
        lhs = computed(x) ** 2
        rhs = C_T2(x * x)
        pointwise &= lhs == rhs
    return {
        "name": "C_(2) identity",
        "holds": computed == expected and sqrt_check and pointwise,
        "coefficientwise": computed == expected,
        "sqrt_T2_plus_T_is_T_plus_S": sqrt_check,
        "pointwise_samples": pointwise,
        "tau_degree": [computed.degree(), C_T2.degree()],
        "C_2(T)": str(computed).replace("T", "S"),
    }


def isogeny_graph_check(phi1, phi2, P: TwistedPoly, test_a: list[PolyA]) -> dict:
    """Is the graph {(y, P(y))} stable under (Phi_1(a), Phi_2(a)) for each a?

    phi1 and phi2 map a polynomial to its twisted polynomial action.  The
    graph is stable under a iff P Phi_1(a) = Phi_2(a) P.
    """
    rows = []
    for a in test_a:
        lhs = P.compose(phi1(a))
        rhs = phi2(a).compose(P)
        diff = lhs - rhs
        rows.append({"a": str(a), "stabilized": diff.is_zero(),
                     "witness": None if diff.is_zero() else str(diff)})
    return {"stabilized": all(r["stabilized"] for r in rows), "rows": rows}


def twist_action(M: TModule, k: int):
    """a -> Phi(a)^(q^k): coefficients raised to q^k (k may be negative when roots exist)."""
    def act(a: PolyA) -> TwistedPoly:
        P = phi_of(a, M)
        fn = (lambda c: c.frob(k)) if k >= 0 else (lambda c: c.frob_root(-k))
        return P.map_coeffs(fn, M.zero)
    return act


def lattice_intersection_rank(periods: list[list[Laurent]], subspace: list[list[Laurent]]) -> dict:
    """k_inf-ranks of the period span and of the periods lying in a subspace H."""
    def rank(vectors):
        if not vectors:
            return 0
        rows = [list(v) for v in vectors]
        r = 0
        cols = len(rows[0])
        for c in range(cols):
            piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][c].inv()
            for i in range(len(rows)):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c] * inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            r += 1
        return r

    h = rank(subspace)
    inside = [w for w in periods if rank(subspace + [w]) == h]
    return {"rank_lattice": rank(periods), "rank_intersection": rank(inside), "dim_H": h}

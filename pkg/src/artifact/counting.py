"""Counting rational points of bounded height by the determinant method.

Pieces: heights, the combinatorial exponents D, b, B, V, the determinant
bound |det(Phi_mu(t_j))| <= c^D r^B, the covering threshold, hypersurface
interpolation through the points of each polydisc, and a brute-force
harness with the Carlitz Lie-side preset.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Callable, Iterable

from .algebra_core import FracK, PolyA, field, monic_polys, polys_below, poly_gcd, proper_fractions
from .laurent import Laurent, det as field_det, disc_key
from .series import TruncSeries, monomials
from .tmodule import ENUMERATION_GUARD

# ------------------------------------------------------------------ heights


def height(x: FracK) -> Fraction:
    """H(alpha/beta) = q^max(deg alpha, deg beta); H(0) = 1."""
    return x.height()


@dataclass(frozen=True)
class HeightedPoint:
    coords: tuple

    @property
    def height(self) -> Fraction:
        return max(height(c) for c in self.coords)

    def inverse(self) -> "HeightedPoint":
        if any(c.is_zero() for c in self.coords):
            raise ZeroDivisionError("inversion needs nonzero coordinates")
        return HeightedPoint(tuple(c.inv() for c in self.coords))


# ---------------------------------------------------------------- exponents

def L_count(a: int, beta: int) -> int:
    """|{mu in N^a : |mu| = beta}|."""
    return comb(beta + a - 1, a - 1) if a > 0 else int(beta == 0)


def D_count(a: int, b: int) -> int:
    """|{mu in N^a : |mu| <= b}|."""
    return comb(b + a, a) if b >= 0 else 0


@dataclass(frozen=True)
class CombinatorialExponents:
    h: int
    d: int
    delta: int
    D: int
    b: int
    B: int
    V_sum_d: int
    V_alt: int
    V_height: int

    def eps(self, V: int) -> Fraction:
        return Fraction(self.h * V, self.B)

    @property
    def eps_sum_d(self) -> Fraction:
        return self.eps(self.V_sum_d)

    def V(self, mode: str) -> int:
        return {"sum_d": self.V_sum_d, "alt": self.V_alt, "height": self.V_height}[mode]

    def to_json(self) -> dict:
        return {"h": self.h, "d": self.d, "delta": self.delta, "D": self.D, "b": self.b, "B": self.B,
                "V_sum_d": self.V_sum_d, "V_alt": self.V_alt,
                "V_height": self.V_height, "eps_sum_d": str(self.eps_sum_d),
                "eps_alt": str(self.eps(self.V_alt)),
                "eps_height": str(self.eps(self.V_height))}


def exponents(h: int, d: int, delta: int) -> CombinatorialExponents:
    if h >= d:
        raise ValueError(f"need h < d, got h={h}, d={d}")
    if delta < 1:
        raise ValueError("delta must be at least 1")
    D = D_count(d, delta)
    b = 0
    while D_count(h, b + 1) <= D:
        b += 1
    B = sum(L_count(h, beta) * beta for beta in range(b + 1)) + (D - D_count(h, b)) * (b + 1)
    V_sum_d = sum(L_count(h, beta) * beta for beta in range(d + 1))
    V_alt = sum(L_count(h, beta) * beta for beta in range(b + 1))
    V_height = d * delta * D
    return CombinatorialExponents(h, d, delta, D, b, B, V_sum_d, V_alt, V_height)


def min_degree_sum(h: int, D: int) -> int:
    """Smallest sum of |nu| over D distinct exponents nu in N^h (equals B)."""
    return sum(sum(nu) for nu in monomials(h, D)[:D]) if D else 0


# ---------------------------------------------------------- parametrizations

class Component:
    """One coordinate function of an analytic map on the closed unit polydisc."""

    def __call__(self, t: tuple) -> FracK:
        raise NotImplementedError

    def series(self, h: int, D: int) -> TruncSeries:
        raise NotImplementedError


@dataclass
class PolyComponent(Component):
    poly: TruncSeries  # coefficients in FracK

    def __call__(self, t):
        return self.poly.evaluate(list(t))

    def series(self, h, D):
        return self.poly.truncate(D) if self.poly.D >= D else self.poly.with_D(D)


@dataclass
class MobiusComponent(Component):
    """(alpha t_i + beta) / (1 + gamma t_i) with |gamma| < 1."""

    alpha: FracK
    beta: FracK
    gamma: FracK
    var: int = 0

    def __post_init__(self):
        if not self.gamma.abs() < 1:
            raise ValueError("pole inside the closed unit disc: need |gamma| < 1")

    def __call__(self, t):
        x = t[self.var]
        return (self.alpha * x + self.beta) / (self.gamma * x + 1)

    def series(self, h, D):
        F = self.alpha.F
        zero = FracK.zero(F)
        terms = {}
        unit = [0] * h
        terms[tuple(unit)] = self.beta
        c = self.alpha - self.beta * self.gamma
        for k in range(1, D + 1):
            mu = list(unit)
            mu[self.var] = k
            terms[tuple(mu)] = c
            c = -c * self.gamma
        return TruncSeries(h, D, terms, zero)


@dataclass
class Parametrization:
    components: list
    h: int
    name: str = ""

    @property
    def d(self) -> int:
        return len(self.components)

    def __call__(self, t) -> tuple:
        return tuple(c(t) for c in self.components)

    def series(self, D: int) -> list[TruncSeries]:
        return [c.series(self.h, D) for c in self.components]

    def monomial_composites(self, delta: int, D: int) -> dict:
        ser = self.series(D)
        F = ser[0].zero.F
        one = TruncSeries.const(FracK.one(F), self.h, D, FracK.zero(F))
        out = {}
        for mu in monomials(self.d, delta):
            acc = one
            for i, e in enumerate(mu):
                for _ in range(e):
                    acc = acc.mul(ser[i], D)
            out[mu] = acc
        return out

    def constant_c(self, delta: int, order: int) -> Fraction:
        """max Gauss norm over the composites Phi_mu and their hyperderivatives.

        Hyperderivative coefficients are binomial multiples of the original
        ones, so their Gauss norms never exceed that of Phi_mu; both are
        scanned through the given order.
        """
        D = max(order, 2 * delta * 3 + 4)
        best = Fraction(1)
        for mu, s in self.monomial_composites(delta, D).items():
            best = max(best, s.gauss_norm())
            for nu in monomials(self.h, order, 1):
                for m, c in s.items():
                    if all(x >= y for x, y in zip(m, nu)):
                        best = max(best, c.abs())
        return best


def graph_parametrization(g: Component, name: str = "graph") -> Parametrization:
    F = _component_field(g)
    t = TruncSeries.var(0, 1, 8, FracK.one(F), FracK.zero(F))
    return Parametrization([PolyComponent(t), g], 1, name)


def _component_field(g):
    if isinstance(g, PolyComponent):
        return g.poly.zero.F
    return g.alpha.F


def _random_small(rng: random.Random, F, max_deg: int = 2, allow_const: bool = True) -> FracK:
    """Random element of F_q[1/T] (so |x| <= 1) with at most max_deg digits."""
    lo = 0 if allow_const else 1
    num = PolyA([rng.randrange(F.q) for _ in range(max_deg + 1)], F)
    x = FracK(num.frob(0), PolyA.T(F, max_deg))
    # x = num(T) / T^max_deg has |x| <= 1; drop the constant digit when asked
    if not allow_const and not x.is_zero():
        x = x - FracK(PolyA.const(num.c[max_deg] if len(num.c) > max_deg else 0, F))
    return x


def random_parametrization(rng: random.Random, q: int = 2) -> Parametrization:
    F = field(q)
    zero, one = FracK.zero(F), FracK.one(F)
    if rng.random() < 0.5:
        deg = rng.randint(1, 3)
        terms = {(k,): _random_small(rng, F) for k in range(deg + 1)}
        if all(c.is_zero() for k, c in terms.items() if k[0] >= 2):
            terms[(2,)] = one
        return graph_parametrization(PolyComponent(TruncSeries(1, 8, terms, zero)), f"poly{deg}")
    gamma = _random_small(rng, F, 2, allow_const=False)
    if gamma.is_zero():
        gamma = FracK(PolyA.one(F), PolyA.T(F))
    return graph_parametrization(MobiusComponent(_random_small(rng, F), _random_small(rng, F), gamma), "mobius")


# -------------------------------------------------------------- determinant

def monomial_matrix(points: list[tuple], delta: int) -> list[list]:
    d = len(points[0])
    mons = monomials(d, delta)
    rows = []
    for P in points:
        row = []
        for mu in mons:
            v = None
            for i, e in enumerate(mu):
                if e:
                    t = P[i] ** e
                    v = t if v is None else v * t
            row.append(v if v is not None else FracK.one(P[0].F))
        rows.append(row)
    return rows


def exact_det(M: list[list]) -> FracK:
    F = M[0][0].F
    return field_det(M, FracK.zero(F), FracK.one(F))


@dataclass
class DetBoundResult:
    det: FracK
    abs_det: Fraction
    c: Fraction
    r: Fraction
    bound: Fraction
    holds: bool


def det_bound(phi: Parametrization, params: list[tuple], delta: int, r: Fraction,
              c: Fraction | None = None) -> DetBoundResult:
    """det(Phi_mu(t_j)) over D parameters in one radius-r polydisc, against c^D r^B."""
    ex = exponents(phi.h, phi.d, delta)
    if len(params) != ex.D:
        raise ValueError(f"need exactly D = {ex.D} points, got {len(params)}")
    if c is None:
        c = phi.constant_c(delta, ex.b + 1)
    pts = [phi(t) for t in params]
    dt = exact_det(monomial_matrix(pts, delta))
    bound = c**ex.D * Fraction(r) ** ex.B
    return DetBoundResult(dt, dt.abs(), c, Fraction(r), bound, dt.abs() <= bound)


def liouville_lower_bound(points: list[tuple], delta: int, X: Fraction) -> tuple[Fraction, Fraction]:
    """(|det|, lower bound valid when det != 0) for points of height <= X.

    Row j becomes integral after multiplying by prod_i den(z_ji)^delta, so
    the cleared determinant is a nonzero polynomial and |det| >= X^(-d delta D).
    """
    d = len(points[0])
    V = d * delta * D_count(d, delta)
    dt = exact_det(monomial_matrix(points, delta))
    return dt.abs(), Fraction(1) / Fraction(X) ** V


# ------------------------------------------------------------ thresholds

def _log_q_exact(x: Fraction, q: int) -> int:
    """k with x = q^k; raises when x is not an integral power of q."""
    y, k = Fraction(x), 0
    while y > 1:
        y /= q
        k += 1
    while y < 1:
        y *= q
        k -= 1
    if y != 1:
        raise ValueError(f"{x} is not a power of {q}")
    return k


@dataclass(frozen=True)
class Threshold:
    N: int
    r: Fraction
    V: int
    V_mode: str
    C: Fraction
    eps: Fraction
    N_literal: int

    def to_json(self) -> dict:
        return {"N": self.N, "r": str(self.r), "V": self.V, "V_mode": self.V_mode,
                "C": str(self.C), "eps": str(self.eps), "N_literal": self.N_literal}


def threshold(ex: CombinatorialExponents, c: Fraction, deg_a: int, q: int = 2, mode: str = "height") -> Threshold:
    """Least N >= 1 with c^D q^(-N B) |a|^V < 1; C and eps bound the cover size q^(hN)."""
    k = _log_q_exact(c, q)
    V = ex.V(mode)
    N = max(1, (ex.D * k + V * deg_a) // ex.B + 1)
    C = Fraction(q) ** ex.h * _q_rational_power(q, Fraction(ex.h * ex.D * k, ex.B))
    eps = ex.eps(V)
    # literal reading: largest q^-N <= ((c/2) |a|^V_sum_d)^(-1/B)
    if q == 2:
        val = k - 1 + ex.V_sum_d * deg_a  # log_2((c/2) |a|^V)
        N_literal = max(0, -(-val // ex.B))
    else:
        N_literal = -1
    return Threshold(N, Fraction(1, q**N), V, mode, C, eps, N_literal)


def _q_rational_power(q: int, e: Fraction) -> Fraction:
    """q^e exactly for integral e, otherwise a rational upper bound to 1e-9."""
    if e.denominator == 1:
        return Fraction(q) ** int(e)
    approx = Fraction(float(q) ** float(e)).limit_denominator(10**9)
    while approx ** e.denominator < Fraction(q) ** e.numerator:
        approx += Fraction(1, 10**9)
    return approx


def bound_value(th: Threshold, deg_a: int, q: int) -> float:
    return float(th.C) * float(q) ** float(th.eps * deg_a)


# --------------------------------------------------- enumeration of points

def rationals_in_unit_disc(F, n: int) -> list[FracK]:
    """All t = alpha/beta in lowest terms with deg alpha <= deg beta <= n (so |t| <= 1)."""
    out = [FracK.zero(F)]
    for k in range(0, n + 1):
        for beta in monic_polys(F, k):
            for alpha in polys_below(F, k + 1):
                if alpha.is_zero():
                    continue
                if poly_gcd(alpha, beta).deg() == 0:
                    out.append(FracK(alpha, beta, _canonical=True))
    return out


def height_bounded_proper(F, n: int) -> list[FracK]:
    """Reduced alpha/beta with deg alpha < deg beta <= n, plus 0."""
    out = [FracK.zero(F)]
    for k in range(1, n + 1):
        for beta in monic_polys(F, k):
            for alpha in polys_below(F, k):
                if alpha.is_zero():
                    continue
                if poly_gcd(alpha, beta).deg() == 0:
                    out.append(FracK(alpha, beta, _canonical=True))
    return out


def _param_disc_key(t: tuple, N: int) -> tuple:
    return disc_key([Laurent.from_frac(x, N + 1) for x in t], N)


# ------------------------------------------------------------ hypersurfaces

@dataclass
class Hypersurface:
    degree: int
    d: int
    coeffs: dict  # mu -> FracK

    def __call__(self, P: tuple) -> FracK:
        F = P[0].F
        acc = FracK.zero(F)
        for mu, c in self.coeffs.items():
            v = c
            for i, e in enumerate(mu):
                if e:
                    v = v * P[i] ** e
            acc = acc + v
        return acc

    def is_nonzero(self) -> bool:
        return any(not c.is_zero() for c in self.coeffs.values())

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": {",".join(map(str, mu)): c.to_text()
                                                  for mu, c in self.coeffs.items() if not c.is_zero()}}


def _rank_rows_cols(M: list[list]) -> tuple[list[int], list[int]]:
    """Row and column indices of a maximal nonsingular minor."""
    rows = [list(r) for r in M]
    nrows, ncols = len(rows), len(rows[0])
    order = list(range(nrows))
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        order[r], order[piv] = order[piv], order[r]
        inv = rows[r][c].inv()
        for i in range(r + 1, nrows):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return sorted(order[:r]), piv_cols


def interpolate_hypersurface(points: list[tuple], delta: int) -> Hypersurface:
    """A nonzero form of degree <= delta vanishing on the points, via the minor determinant."""
    F = points[0][0].F
    d = len(points[0])
    mons = monomials(d, delta)
    M = monomial_matrix(points, delta)
    R, Cs = _rank_rows_cols(M)
    if len(Cs) >= len(mons):
        raise ValueError("points impose independent conditions on all monomials of degree <= delta")
    extra = next(j for j in range(len(mons)) if j not in Cs)
    cols = sorted(Cs + [extra])
    sub = [[M[i][j] for j in cols] for i in R]
    coeffs = {}
    k = len(cols)
    for pos, j in enumerate(cols):
        minor = [[row[c] for c in range(k) if c != pos] for row in sub]
        cof = exact_det(minor) if minor else FracK.one(F)
        sign = (-1) ** (len(R) + pos)
        coeffs[mons[j]] = cof if sign == 1 else -cof
    return Hypersurface(delta, d, coeffs)


@dataclass
class DiscRecord:
    key: tuple
    params: list
    points: list
    hypersurface: Hypersurface | None

    def to_json(self) -> dict:
        return {"disc": [list(k) for k in self.key], "points": [[x.to_text() for x in P] for P in self.points],
                "hypersurface": self.hypersurface.to_json() if self.hypersurface else None}


@dataclass
class CoverResult:
    threshold: Threshold
    cover_size: int
    discs: list
    all_vanish: bool

    @property
    def hypersurfaces(self) -> int:
        return sum(1 for d in self.discs if d.hypersurface is not None)

    @property
    def max_points(self) -> int:
        return max((len(d.points) for d in self.discs), default=0)


def cover_and_interpolate(phi: Parametrization, a: PolyA, delta: int, params: list[tuple] | None = None,
                          mode: str = "height", c: Fraction | None = None) -> CoverResult:
    """Cover B_1^h by radius-r polydiscs at the threshold and interpolate in each occupied one."""
    F = a.F
    q = F.q
    X = a.abs()
    n = a.deg()
    ex = exponents(phi.h, phi.d, delta)
    if c is None:
        c = phi.constant_c(delta, ex.b + 1)
    th = threshold(ex, c, n, q, mode)
    if params is None:
        params = [(t,) for t in rationals_in_unit_disc(F, n + 1)]
    buckets: dict[tuple, list] = {}
    for t in params:
        P = phi(t)
        if max(height(x) for x in P) > X:
            continue
        buckets.setdefault(_param_disc_key(t, th.N), []).append((t, P))
    discs = []
    ok = True
    for key in sorted(buckets):
        items = buckets[key]
        pts = _dedupe([P for _, P in items])
        try:
            hyp = interpolate_hypersurface(pts, delta)
        except ValueError:
            # possible only when the radius is too large for the vanishing argument
            hyp = None
            ok = False
        else:
            ok &= hyp.is_nonzero() and all(hyp(P).is_zero() for P in pts)
        discs.append(DiscRecord(key, [t for t, _ in items], pts, hyp))
    return CoverResult(th, q ** (phi.h * th.N), discs, ok)


def _dedupe(pts: list[tuple]) -> list[tuple]:
    seen, out = set(), []
    for P in pts:
        if P not in seen:
            seen.add(P)
            out.append(P)
    return out


def threshold_disc_tuples(cover: CoverResult, delta: int) -> tuple[int, int, bool]:
    """(tuples checked, non-vacuous discs, all determinants zero) over D-subsets of each disc."""
    D = D_count(cover.discs[0].points[0].__len__(), delta) if cover.discs else 0
    checked, nonvac, ok = 0, 0, True
    for rec in cover.discs:
        if len(rec.points) < D:
            continue
        nonvac += 1
        for tup in combinations(rec.points, D):
            checked += 1
            ok &= exact_det(monomial_matrix(list(tup), delta)).is_zero()
    return checked, nonvac, ok


# -------------------------------------------------------- brute-force counts

Membership = Callable[[tuple], bool]


def torsion_tuples(a: PolyA, d: int, guard: int = ENUMERATION_GUARD):
    total = a.F.q ** (d * a.deg())
    if total > guard:
        raise ValueError(f"enumeration guard exceeded: q^(d deg a) = {total} > {guard}")
    base = list(proper_fractions(a))
    return product(base, repeat=d)


def height_tuples(F, n: int, d: int, guard: int = ENUMERATION_GUARD):
    base = height_bounded_proper(F, n)
    total = len(base) ** d
    if total > guard:
        raise ValueError(f"enumeration guard exceeded: {total} candidates > {guard}")
    return product(base, repeat=d)


def count_members(member: Membership, candidates: Iterable[tuple], algebraic: list[Membership] = ()) -> int:
    n = 0
    for z in candidates:
        if member(z) and not any(alg(z) for alg in algebraic):
            n += 1
    return n


def invert_region(member: Membership) -> Membership:
    """z in W2^-1 iff every coordinate is nonzero and (1/z_i) lies in W2."""
    def inv_member(z):
        if any(x.is_zero() for x in z):
            return False
        return member(tuple(x.inv() for x in z))
    return inv_member


# ------------------------------------------------------------------ presets

@dataclass
class CountPreset:
    name: str
    d: int
    member: Membership
    pieces: list  # parametrizations covering the set (may be empty)
    algebraic: list = dc_field(default_factory=list)
    oracle_bracket: Callable | None = None
    oracle_height: Callable | None = None


def carlitz_preset(q: int = 2) -> CountPreset:
    """Z = {(z1, z2) : |z_i| < 1, T z1 - z2 in A}, the Lie side of the graph of Phi(T).

    Z is the union over c in F_q of the images of t -> (c/T + t/T^2, t/T).
    """
    F = field(q)
    Tp = PolyA.T(F)
    T = FracK(Tp)
    inv_T = FracK(PolyA.one(F), Tp)
    inv_T2 = FracK(PolyA.one(F), Tp * Tp)
    zero = FracK.zero(F)

    scaled: dict = {}

    def member(z):
        if not all(x.num.deg() < x.den.deg() for x in z):
            return False
        # T z1 - z2 lies in A iff the reduced forms share a denominator that divides the numerator difference
        x = scaled.get(z[0])
        if x is None:
            x = scaled[z[0]] = T * z[0]
        y = z[1]
        return x.den == y.den and ((x.num - y.num) % x.den).is_zero()

    pieces = []
    for cst in F.elements():
        c = FracK(PolyA.const(cst, F))
        p0 = TruncSeries(1, 8, {(0,): c * inv_T, (1,): inv_T2}, zero)
        p1 = TruncSeries(1, 8, {(1,): inv_T}, zero)
        pieces.append(Parametrization([PolyComponent(p0), PolyComponent(p1)], 1, f"c={cst}"))

    def oracle_bracket(a):
        return q ** a.deg()

    def oracle_height(a):
        # one point per reduced z2 with |z2| < 1: z1 is fixed by membership
        n = a.deg()
        return 1 + sum((q**k - q ** (k - 1)) * q**k for k in range(1, n + 1))

    return CountPreset("carlitz", 2, member, pieces, [], oracle_bracket, oracle_height)


def carlitz_disc_preset(q: int = 2) -> CountPreset:
    """d = 1: the open unit disc of Lie(C), whose [a]-points are the Lie-side torsion."""
    F = field(q)
    return CountPreset("carlitz-disc", 1, lambda z: z[0].abs() < 1, [],
                       oracle_bracket=lambda a: q ** a.deg())


def point_preset(q: int = 2, d: int = 2) -> CountPreset:
    return CountPreset("point", d, lambda z: all(x.is_zero() for x in z), [], oracle_bracket=lambda a: 1)


def parabola_preset(q: int = 2) -> CountPreset:
    member = lambda z: z[1] == z[0] * z[0]
    return CountPreset("parabola", 2, member, [], algebraic=[member], oracle_bracket=lambda a: 0)


PRESETS = {"carlitz": carlitz_preset, "carlitz-disc": carlitz_disc_preset,
           "point": point_preset, "parabola": parabola_preset}


@dataclass
class CountReport:
    a: PolyA
    abs_a: Fraction
    N_bracket: int
    N_height: int | None
    cover_size: int
    hypersurfaces: int
    bound: float
    bound_ok: bool
    exact_bracket: bool | None
    exact_height: bool | None
    monotone: bool | None
    vanishing: bool
    end_to_end: bool
    C: Fraction | None = None
    eps: Fraction | None = None
    threshold: dict | None = None
    discs: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [self.bound_ok, self.vanishing, self.end_to_end]
        checks += [x for x in (self.exact_bracket, self.exact_height, self.monotone) if x is not None]
        return all(checks)

    def csv_row(self) -> dict:
        return {"a": str(self.a), "|a|": str(self.abs_a), "N_bracket": self.N_bracket,
                "N_height": "" if self.N_height is None else self.N_height,
                "cover_size": self.cover_size, "hypersurfaces": self.hypersurfaces,
                "bound": f"{self.bound:.6g}", "pass/fail": "pass" if self.passed else "fail"}

    def to_json(self) -> dict:
        return {"a": str(self.a), "abs_a": str(self.abs_a), "N_bracket": self.N_bracket,
                "N_height": self.N_height, "cover_size": self.cover_size,
                "hypersurfaces": self.hypersurfaces, "bound": self.bound,
                "C": None if self.C is None else str(self.C), "eps": None if self.eps is None else str(self.eps),
                "checks": {"bound": self.bound_ok, "exact_bracket": self.exact_bracket,
                           "exact_height": self.exact_height, "monotone": self.monotone,
                           "vanishing": self.vanishing, "end_to_end": self.end_to_end},
                "threshold": self.threshold, "pass": self.passed}


def brute_force_count(preset: CountPreset, a: PolyA, delta: int = 1, with_height: bool = True,
                      guard: int = ENUMERATION_GUARD, with_cover: bool = True) -> CountReport:
    F = a.F
    q = F.q
    n = a.deg()
    N_br = count_members(preset.member, torsion_tuples(a, preset.d, guard), preset.algebraic)
    exact_br = None if preset.oracle_bracket is None else N_br == preset.oracle_bracket(a)
    N_h = exact_h = mono = None
    if with_height:
        N_h = count_members(preset.member, height_tuples(F, n, preset.d, guard), preset.algebraic)
        exact_h = None if preset.oracle_height is None else N_h == preset.oracle_height(a)
        mono = N_br <= N_h
    cover_size = hyps = 0
    C_total = None
    eps = None
    th_json = None
    vanish = True
    e2e = True
    discs = []
    bound = float("inf")
    bound_ok = True
    if with_cover and preset.pieces and preset.d > 1:
        C_total = Fraction(0)
        max_pts = 0
        for phi in preset.pieces:
            cov = cover_and_interpolate(phi, a, delta, mode="height")
            cover_size += cov.cover_size
            hyps += cov.hypersurfaces
            C_total += cov.threshold.C
            eps = cov.threshold.eps
            th_json = cov.threshold.to_json()
            vanish &= cov.all_vanish
            max_pts = max(max_pts, cov.max_points)
            discs.extend(d.to_json() for d in cov.discs)
        th_union = Threshold(th_json["N"], Fraction(th_json["r"]), th_json["V"], th_json["V_mode"], C_total, eps,
                             th_json["N_literal"])
        bound = float(C_total) * float(q) ** float(eps * n)
        bound_ok = _le_q_power(hyps, C_total, eps * n, q) and _le_q_power(cover_size, C_total, eps * n, q)
        if N_h is not None:
            e2e = N_h <= hyps * max_pts
        th_json = th_union.to_json()
    return CountReport(a, a.abs(), N_br, N_h, cover_size, hyps, bound, bound_ok, exact_br, exact_h, mono,
                       vanish, e2e, C_total, eps, th_json, discs)


def _le_q_power(count: int, C: Fraction, e: Fraction, q: int) -> bool:
    """count <= C q^e exactly: (count / C)^den <= q^num."""
    lhs = Fraction(count) / C
    if lhs <= 0:
        return True
    return lhs ** e.denominator <= Fraction(q) ** e.numerator

"""Non-archimedean implicit and inverse function theorem, constructively.

``solve_s1`` finds h with F(z*, h(z*)) = 0 degree by degree.  The majorant
system lives over Q with A_mu = M / r^|mu| and yields a certified radius by
an exact monotone fixed-point check.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra_core import FracK, field, parse_frac
from .series import TruncSeries, _one_of, is_zero, monomials


class IFTHypothesisError(ValueError):
    pass


class NotRegularPoint(ValueError):
    pass


def _abs(c) -> Fraction:
    if isinstance(c, Fraction):
        return abs(c)
    return c.abs()


def _unit_vec(n: int, i: int) -> tuple:
    mu = [0] * n
    mu[i] = 1
    return tuple(mu)


def linear_coeffs(F: TruncSeries) -> list:
    return [F.coeff(_unit_vec(F.n, i)) for i in range(F.n)]


def _vars(n_src: int, n_dst: int, D: int, one, zero, offset: int = 0) -> list[TruncSeries]:
    return [TruncSeries.var(i + offset, n_dst, D, one, zero) for i in range(n_src)]


def solve_s1(F: TruncSeries, D: int | None = None) -> TruncSeries:
    """The unique h(z_1..z_(n-1)) with h(0) = 0 and F(z*, h) = 0 through degree D."""
    n = F.n
    D = F.D if D is None else D
    if not is_zero(F.constant()):
        raise IFTHypothesisError("IFT hypothesis violated: F(0) != 0")
    a_n = F.coeff(_unit_vec(n, n - 1))
    if is_zero(a_n):
        raise IFTHypothesisError("IFT hypothesis violated: dF/dz_n(0) = 0")
    inv = a_n.inv() if hasattr(a_n, "inv") else 1 / a_n
    zero, one = F.zero, _one_of(F)
    k = n - 1
    xs = _vars(k, k, D, one, zero)
    h = TruncSeries(k, D, {}, zero)
    for t in range(1, D + 1):
        G = F.compose([x.truncate(t) for x in xs] + [h.truncate(t)])
        R = G.homogeneous(t).with_D(D)
        h = h - R.scale(inv)
    return h


def composition_residual(F: TruncSeries, h: TruncSeries) -> TruncSeries:
    """F(z*, h(z*)) through degree h.D."""
    k = h.n
    one = _one_of(F)
    xs = _vars(k, k, h.D, one, F.zero)
    return F.compose(xs + [h])


def inverse_form(F: TruncSeries, D: int | None = None) -> TruncSeries:
    """h~(u_1..u_n) with F(u*, h~(u)) = u_n, so H(u) = (u*, h~(u)) inverts G(z) = (z*, F(z))."""
    n = F.n
    D = F.D if D is None else D
    zero, one = F.zero, _one_of(F)
    # F~(u_1..u_n, x) = F(u_1..u_(n-1), x) - u_n
    subs = _vars(n - 1, n + 1, D, one, zero) + [TruncSeries.var(n, n + 1, D, one, zero)]
    Ft = F.compose(subs) - TruncSeries.var(n - 1, n + 1, D, one, zero)
    return solve_s1(Ft, D)


def inverse_pair_check(F: TruncSeries, ht: TruncSeries) -> tuple[bool, bool]:
    """(G o H = id, H o G = id) through degree D."""
    n, D = F.n, ht.D
    zero, one = F.zero, _one_of(F)
    us = _vars(n, n, D, one, zero)
    H = us[:-1] + [ht]
    GH = us[:-1] + [F.compose(H)]
    G = us[:-1] + [F.truncate(D)]
    HG = us[:-1] + [ht.compose(G)]
    ok1 = all(a == b for a, b in zip(GH, us))
    ok2 = all(a == b for a, b in zip(HG, us))
    return ok1, ok2


# ----------------------------------------------------------------- majorant

@dataclass
class RadiusCertificate:
    M: Fraction
    r: Fraction
    certified_radius: Fraction
    value_bound: Fraction
    discriminant_witness: Fraction
    A_n: Fraction
    linear: list
    dominated: bool
    checked: int
    q: int = 2

    def to_json(self) -> dict:
        return {"M": str(self.M), "r": str(self.r), "certified_radius": str(self.certified_radius),
                "value_bound": str(self.value_bound),
                "discriminant_witness": {"Delta(0)": str(self.discriminant_witness), "positive": self.discriminant_witness > 0},
                "A_n": str(self.A_n), "linear": [str(x) for x in self.linear],
                "dominated": self.dominated, "coefficients_checked": self.checked}


def majorant_constant(F: TruncSeries, r: Fraction) -> Fraction:
    """M = max_{|mu|>=1} |a_mu| r^|mu|, after checking the truncation shows decay."""
    if F.degree() >= F.D and F.D > 1:
        top = max((_abs(c) * r ** sum(mu) for mu, c in F.items() if sum(mu) == F.D), default=Fraction(0))
        below = max((_abs(c) * r ** sum(mu) for mu, c in F.items() if 1 <= sum(mu) < F.D), default=Fraction(0))
        if top > below:
            raise ValueError(f"no convergence certificate at r = {r}: coefficient decay not observed")
    return max((_abs(c) * r ** sum(mu) for mu, c in F.items() if sum(mu) >= 1), default=Fraction(0))


def majorant_series(F: TruncSeries, r: Fraction, D: int | None = None) -> TruncSeries:
    """Solution B(u_1..u_n) over Q of the positive bounding system.

    Y = (u_n + sum_{i<n} A_i u_i + sum_{|mu|>=2} A_mu (u*, Y)^mu) / A_n with
    A_mu = M / r^|mu|.  The nonlinear part is M (G(u*) Q - 1 - S/r - Y/r) with
    G = prod_{i<n} (1 - u_i/r)^-1 and Q = (1 - Y/r)^-1, so Y is solved one
    homogeneous degree at a time; the Y_t/r terms cancel.
    """
    n = F.n
    D = F.D if D is None else D
    r = Fraction(r)
    M = majorant_constant(F, r)
    lin = [_abs(c) for c in linear_coeffs(F)]
    A_n = lin[-1]
    z0 = Fraction(0)

    def hom(terms: dict) -> TruncSeries:
        return TruncSeries(n, D, terms, z0)

    # G_s: complete homogeneous polynomial of degree s in u_1..u_(n-1), over r^s
    G = [hom({(0,) * n: Fraction(1)})]
    for t in range(1, D + 1):
        G.append(hom({mu + (0,): Fraction(1) / r**t for mu in monomials(n - 1, t, t)} if n > 1 else {}))
    Y = [hom({})]
    Q = [G[0]]
    Y.append(hom({_unit_vec(n, i): (lin[i] if i < n - 1 else Fraction(1)) / A_n for i in range(n)}))
    Q.append(Y[1].scale(1 / r))
    for t in range(2, D + 1):
        Qp = hom({})
        for s in range(1, t):
            Qp = Qp + Y[s].mul(Q[t - s], D, exact_degree=t).scale(1 / r)
        acc = Qp
        for s in range(1, t + 1):
            acc = acc + G[s].mul(Q[t - s], D, exact_degree=t)
        Y.append(acc.scale(M / A_n))
        Q.append(Qp + Y[t].scale(1 / r))
    out = hom({})
    for t in range(1, D + 1):
        out = out + Y[t]
    return out


def majorant_series_generic(F: TruncSeries, r: Fraction, D: int | None = None) -> TruncSeries:
    """The same series through the generic solver on the dense bounding system."""
    n = F.n
    D = F.D if D is None else D
    M = majorant_constant(F, r)
    lin = [_abs(c) for c in linear_coeffs(F)]
    z0 = Fraction(0)
    terms = {mu: M / r ** sum(mu) for mu in monomials(n, D, 2)}
    for i in range(n):
        terms[_unit_vec(n, i)] = lin[i]
    Maj = TruncSeries(n, D, terms, z0)
    # negate the nonlinear part so solve_s1 produces the positive solution
    neg = {mu: (-c if sum(mu) >= 2 else c) for mu, c in Maj.items()}
    neg = {mu: (-c if (sum(mu) == 1 and mu[-1] == 0) else c) for mu, c in neg.items()}
    Mneg = TruncSeries(n, D, neg, z0)
    return inverse_form(Mneg, D)


def _psi(y: Fraction, Y: Fraction, n: int, r: Fraction, M: Fraction, lin: list) -> Fraction:
    A_n = lin[-1]
    G = (1 - y / r) ** (-(n - 1)) * (1 - Y / r) ** (-1)
    nonlinear = M * (G - 1 - (n - 1) * y / r - Y / r)
    return ((1 + sum(lin[:-1])) * y + nonlinear) / A_n


def certified_radius(F: TruncSeries, r: Fraction = Fraction(1), q: int = 2, max_k: int = 40):
    """Largest rho = r q^-k with Psi(rho, R) <= R for some grid value R = r j / 8 < r."""
    n = F.n
    M = majorant_constant(F, r)
    lin = [_abs(c) for c in linear_coeffs(F)]
    for k in range(1, max_k + 1):
        rho = r / Fraction(q) ** k
        for j in range(1, 8):
            R = r * Fraction(j, 8)
            if _psi(rho, R, n, r, M, lin) <= R:
                return rho, R, M, lin
    raise ValueError("no certified radius found on the search grid")


def majorant_s2(F: TruncSeries, r: Fraction = Fraction(1), D: int | None = None, q: int = 2) -> tuple[RadiusCertificate, TruncSeries]:
    """Solve the bounding system, check |b_mu| <= B_mu for the inverse form, certify a radius."""
    D = F.D if D is None else D
    r = Fraction(r)
    B = majorant_series(F, r, D)
    ht = inverse_form(F, D)
    dominated = True
    checked = 0
    for mu in monomials(F.n, D, 1):
        b = ht.coeff(mu)
        if is_zero(b):
            continue
        checked += 1
        if _abs(b) > B.coeff(mu):
            dominated = False
    rho, R, M, lin = certified_radius(F, r, q)
    A_n = lin[-1]
    cert = RadiusCertificate(M, r, rho, R, A_n * A_n, A_n, lin, dominated, checked, q)
    return cert, B


# ------------------------------------------------------------ multivariate

def _rank_and_pivots(rows: list[list]) -> tuple[int, list[int], bool]:
    """Exact rank by elimination; ambiguous when a pivot is zero only at precision."""
    R = [list(r) for r in rows]
    if not R:
        return 0, [], False
    piv_cols, r, ambiguous = [], 0, False
    for c in range(len(R[0])):
        piv = None
        for i in range(r, len(R)):
            x = R[i][c]
            if not is_zero(x):
                piv = i
                break
            if getattr(x, "prec", None) is not None:
                ambiguous = True
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][c].inv() if hasattr(R[r][c], "inv") else 1 / R[r][c]
        for i in range(len(R)):
            if i != r and not is_zero(R[i][c]):
                f = R[i][c] * inv
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        piv_cols.append(c)
        r += 1
    return r, piv_cols, ambiguous


def jacobian(Fs: list[TruncSeries], z0=None) -> list[list]:
    if z0 is not None and any(not is_zero(x) for x in z0):
        Fs = [f.recenter(list(z0)) for f in Fs]
    return [linear_coeffs(f) for f in Fs]


@dataclass
class RankReport:
    rank: int
    ambiguous: bool

    def __int__(self):
        return self.rank

    def __eq__(self, other):
        if isinstance(other, int):
            return self.rank == other
        return NotImplemented


def jacobian_rank(Fs: list[TruncSeries], z0=None) -> RankReport:
    r, _, amb = _rank_and_pivots(jacobian(Fs, z0))
    return RankReport(r, amb)


@dataclass
class ImplicitSolution:
    h: list
    dependent: list
    independent: list
    P: list = dc_field(default_factory=list)


def implicit_multivar(Fs: list[TruncSeries], z0=None, D: int | None = None) -> ImplicitSolution:
    """Solve F_1..F_m = 0 for m of the n+m variables around a regular point z0."""
    m = len(Fs)
    N = Fs[0].n
    n = N - m
    D = Fs[0].D if D is None else D
    zero, one = Fs[0].zero, _one_of(Fs[0])
    if z0 is not None and any(not is_zero(x) for x in z0):
        Fs = [f.recenter(list(z0)) for f in Fs]
    for f in Fs:
        if not is_zero(f.constant()):
            raise NotRegularPoint("not a regular point: F(z0) != 0")
    J = [linear_coeffs(f) for f in Fs]
    # pivot columns chosen from the right so the default is the last m variables
    rev = [list(reversed(row)) for row in J]
    rank, piv, _ = _rank_and_pivots(rev)
    if rank < m:
        raise NotRegularPoint(f"not a regular point: Jacobian rank {rank} < {m}")
    dep = sorted(N - 1 - c for c in piv)
    ind = [i for i in range(N) if i not in dep]
    order = ind + dep
    # permute variables so the dependent ones come last
    perm_subs = [None] * N
    for new, old in enumerate(order):
        perm_subs[old] = TruncSeries.var(new, N, D, one, zero)
    Gs = [f.compose(perm_subs) for f in Fs]
    # Gauss step: left-multiply by the inverse of the dependent block
    Jd = [[linear_coeffs(g)[n + j] for j in range(m)] for g in Gs]
    from .ore import mat_inv

    P = mat_inv(tuple(tuple(r) for r in Jd))
    Gs = [sum_rows([g.scale(P[i][k]) for k, g in enumerate(Gs)], N, D, zero) for i in range(m)]
    sols = _triangular_solve(Gs, n, m, D, one, zero)
    return ImplicitSolution(sols, dep, ind, [list(r) for r in P])


def sum_rows(items, n, D, zero) -> TruncSeries:
    acc = TruncSeries(n, D, {}, zero)
    for s in items:
        acc = acc + s
    return acc


def _triangular_solve(Gs: list[TruncSeries], n: int, m: int, D: int, one, zero) -> list[TruncSeries]:
    """Solve the last equation for the last variable, substitute, recurse, back-substitute."""
    if m == 0:
        return []
    N = n + m
    g = Gs[m - 1]
    h_last = solve_s1(g, D)  # in N-1 vars: x_1..x_n, y_1..y_(m-1)
    subs = [TruncSeries.var(i, N - 1, D, one, zero) for i in range(N - 1)] + [h_last]
    rest = [G.compose(subs) for G in Gs[:m - 1]]
    inner = _triangular_solve(rest, n, m - 1, D, one, zero)
    xs = [TruncSeries.var(i, n, D, one, zero) for i in range(n)]
    h_m = h_last.compose(xs + inner) if (xs + inner) else h_last
    return inner + [h_m]


def check_implicit(Fs: list[TruncSeries], sol: ImplicitSolution) -> bool:
    n = len(sol.independent)
    N = Fs[0].n
    D = sol.h[0].D
    zero, one = Fs[0].zero, _one_of(Fs[0])
    subs = [None] * N
    for k, i in enumerate(sol.independent):
        subs[i] = TruncSeries.var(k, n, D, one, zero)
    for k, i in enumerate(sol.dependent):
        subs[i] = sol.h[k]
    return all(f.compose(subs).is_zero() for f in Fs)


# ------------------------------------------------------------------ random

def random_instance(rng, n: int = 2, D: int = 12, q: int = 2, max_deg: int = 3,
                    coeff_deg: int = 1, density: float = 0.5) -> TruncSeries:
    """F with F(0) = 0, a_n != 0 and sparse F_q[T] coefficients of degree <= coeff_deg."""
    from .algebra_core import PolyA

    F = field(q)
    zero = FracK.zero(F)

    def coeff(nonzero: bool = False) -> FracK:
        while True:
            c = FracK(PolyA([rng.randrange(q) for _ in range(coeff_deg + 1)], F))
            if not nonzero or not c.is_zero():
                return c

    terms = {mu: coeff() for mu in monomials(n, max_deg, 1) if rng.random() < density}
    terms[_unit_vec(n, n - 1)] = coeff(nonzero=True)
    return TruncSeries(n, D, terms, zero)


# ------------------------------------------------------------------- JSON

def series_from_json(obj: dict) -> TruncSeries:
    q = int(obj.get("q", 2))
    F = field(q)
    n, D = int(obj["n"]), int(obj["D"])
    zero = FracK.zero(F)
    terms = {}
    for t in obj["terms"]:
        c = str(t["c"])
        if c.lstrip().startswith("["):
            c = f"q={q};{c}"
        x = FracK.from_text(c) if ";" in c else parse_frac(c, q)
        terms[tuple(t["mu"])] = x
    return TruncSeries(n, D, terms, zero)


def series_to_json(s: TruncSeries) -> dict:
    q = s.zero.F.q
    return {"q": q, "n": s.n, "D": s.D,
            "terms": [{"mu": list(mu), "c": s.coeff(mu).to_text()} for mu in monomials(s.n, s.D) if not is_zero(s.coeff(mu))]}


def load_series(path: str) -> TruncSeries:
    with open(path) as fh:
        return series_from_json(json.load(fh))

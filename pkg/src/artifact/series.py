"""Multivariate power series truncated at a total degree, over any exact ring.

Coefficients only need +, -, * and ``== 0``; the ring's zero is carried along
so empty series still know where they live.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from math import prod
from typing import Callable, Iterable

from .algebra_core import binom_mod_p


def is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    return z() if z is not None else c == 0


def monomials(n: int, D: int, lo: int = 0) -> list[tuple[int, ...]]:
    """Exponent vectors in n variables with lo <= |mu| <= D, graded then lexicographic."""
    out = []
    for t in range(lo, D + 1):
        block = []
        for combo in combinations_with_replacement(range(n), t):
            mu = [0] * n
            for i in combo:
                mu[i] += 1
            block.append(tuple(mu))
        out.extend(sorted(block, reverse=True))
    return out


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class TruncSeries:
    """sum a_mu z^mu over |mu| <= D, stored sparsely by exponent tuple."""

    __slots__ = ("n", "D", "terms", "zero")

    def __init__(self, n: int, D: int, terms: dict | None = None, zero=0):
        self.n, self.D, self.zero = n, D, zero
        self.terms = {}
        for mu, c in (terms or {}).items():
            mu = tuple(mu)
            if len(mu) != n:
                raise ValueError(f"exponent {mu} has wrong length for {n} variables")
            if sum(mu) <= D and not is_zero(c):
                self.terms[mu] = c

    # construction helpers
    @classmethod
    def var(cls, i: int, n: int, D: int, one, zero) -> "TruncSeries":
        mu = [0] * n
        mu[i] = 1
        return cls(n, D, {tuple(mu): one}, zero)

    @classmethod
    def const(cls, c, n: int, D: int, zero) -> "TruncSeries":
        return cls(n, D, {(0,) * n: c}, zero)

    def _same(self, terms: dict) -> "TruncSeries":
        out = object.__new__(TruncSeries)
        out.n, out.D, out.zero, out.terms = self.n, self.D, self.zero, terms
        return out

    # access
    def coeff(self, mu) -> object:
        return self.terms.get(tuple(mu), self.zero)

    def __getitem__(self, mu):
        return self.coeff(mu)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self):
        return self.coeff((0,) * self.n)

    def order(self) -> int | None:
        """Smallest total degree with a nonzero coefficient."""
        return min((sum(m) for m in self.terms), default=None)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous(self, t: int) -> "TruncSeries":
        return self._same({m: c for m, c in self.terms.items() if sum(m) == t})

    def truncate(self, D: int) -> "TruncSeries":
        out = TruncSeries(self.n, D, {m: c for m, c in self.terms.items() if sum(m) <= D}, self.zero)
        return out

    def with_D(self, D: int) -> "TruncSeries":
        """Same terms read as known through degree D (for exact polynomials)."""
        return TruncSeries(self.n, D, self.terms, self.zero)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(is_zero(self.coeff(k) - other.coeff(k)) for k in keys)

    __hash__ = None

    # arithmetic
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        t = dict(self.terms)
        for m, c in other.terms.items():
            if m in t:
                s = t[m] + c
                if is_zero(s):
                    del t[m]
                else:
                    t[m] = s
            else:
                t[m] = c
        out = self._same(t)
        out.D = min(self.D, other.D)
        return out.truncate(out.D) if other.D < self.D or self.D < other.D else out

    def __neg__(self):
        return self._same({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        if is_zero(c):
            return self._same({})
        t = {}
        for m, a in self.terms.items():
            v = a * c
            if not is_zero(v):
                t[m] = v
        return self._same(t)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        return self.mul(other)

    def mul(self, other: "TruncSeries", D: int | None = None, exact_degree: int | None = None):
        D = min(self.D, other.D) if D is None else D
        a = sorted(((sum(m), m, c) for m, c in self.terms.items()), key=lambda x: x[0])
        b = sorted(((sum(m), m, c) for m, c in other.terms.items()), key=lambda x: x[0])
        t: dict = {}
        for da, ma, ca in a:
            if da > D:
                break
            for db, mb, cb in b:
                s = da + db
                if s > D:
                    break
                if exact_degree is not None and s != exact_degree:
                    continue
                m = _add_exp(ma, mb)
                v = ca * cb
                if m in t:
                    t[m] = t[m] + v
                else:
                    t[m] = v
        t = {m: c for m, c in t.items() if not is_zero(c)}
        out = object.__new__(TruncSeries)
        out.n, out.D, out.zero, out.terms = self.n, D, self.zero, t
        return out

    def __pow__(self, k: int) -> "TruncSeries":
        if k == 0:
            return self.one_like()
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def one_like(self, one=None) -> "TruncSeries":
        if one is None:
            one = _one_of(self)
        return TruncSeries(self.n, self.D, {(0,) * self.n: one}, self.zero)

    def map_coeffs(self, fn: Callable, zero=None) -> "TruncSeries":
        return TruncSeries(self.n, self.D, {m: fn(c) for m, c in self.terms.items()},
                           self.zero if zero is None else zero)

    # substitution and evaluation
    def compose(self, subs: list["TruncSeries"], allow_constant: bool = False) -> "TruncSeries":
        """f(s_1, ..., s_n) truncated at the degree of the substituted series."""
        if len(subs) != self.n:
            raise ValueError("need one substitution per variable")
        if not allow_constant:
            for s in subs:
                if not is_zero(s.constant()):
                    raise ValueError("substituted series must vanish at 0")
        tgt = subs[0]
        D = min(s.D for s in subs)
        one = _one_of(self)
        powers: list[dict[int, TruncSeries]] = [dict() for _ in subs]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[k] = TruncSeries(tgt.n, D, {(0,) * tgt.n: one}, self.zero)
                elif k == 1:
                    cache[k] = subs[i].truncate(D)
                else:
                    cache[k] = pw(i, k - 1).mul(pw(i, 1), D)
            return cache[k]

        acc = TruncSeries(tgt.n, D, {}, self.zero)
        for mu, c in self.terms.items():
            term = None
            for i, e in enumerate(mu):
                if e:
                    term = pw(i, e) if term is None else term.mul(pw(i, e), D)
            if term is None:
                term = pw(0, 0)
            acc = acc + term.scale(c)
        return acc

    def evaluate(self, point: list, one=None):
        """Sum of a_mu * point^mu using cached powers; exact on polynomials."""
        if one is None:
            one = _one_of(self)
        cache = [dict() for _ in range(self.n)]

        def pw(i, k):
            if k not in cache[i]:
                cache[i][k] = one if k == 0 else pw(i, k - 1) * point[i]
            return cache[i][k]

        acc = None
        for mu, c in self.terms.items():
            v = c
            for i, e in enumerate(mu):
                if e:
                    v = v * pw(i, e)
            acc = v if acc is None else acc + v
        return self.zero if acc is None else acc

    def hyperderivative(self, nu, point: list, one=None):
        """D^nu f at the point: sum over mu >= nu of prod C(mu_i, nu_i) a_mu point^(mu-nu)."""
        if one is None:
            one = _one_of(self)
        p = _char_of(self)
        acc = None
        for mu, c in self.terms.items():
            if any(m < v for m, v in zip(mu, nu)):
                continue
            k = prod(binom_mod_p(m, v, p) if p else _binom(m, v) for m, v in zip(mu, nu))
            if k == 0:
                continue
            term = c * k if p is None else c * k
            for i, (m, v) in enumerate(zip(mu, nu)):
                if m - v:
                    term = term * (point[i] ** (m - v))
            acc = term if acc is None else acc + term
        return self.zero if acc is None else acc

    def recenter(self, point: list) -> "TruncSeries":
        """f(point + s) as a series in s; exact when f is a polynomial of degree <= D."""
        if not self.terms:
            return self
        out = {}
        for nu in monomials(self.n, self.degree()):
            v = self.hyperderivative(nu, point)
            if not is_zero(v):
                out[nu] = v
        return TruncSeries(self.n, self.D, out, self.zero)

    def derivative(self, i: int) -> "TruncSeries":
        p = _char_of(self)
        t = {}
        for mu, c in self.terms.items():
            if mu[i]:
                k = mu[i] % p if p else mu[i]
                if k:
                    nm = list(mu)
                    nm[i] -= 1
                    t[tuple(nm)] = c * k
        return self._same(t)

    def gauss_norm(self):
        """max |a_mu| (sup norm on the closed unit polydisc)."""
        return max((c.abs() for c in self.terms.values()), default=0)

    def variables_used(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mu in sorted(self.terms, key=lambda m: (sum(m), [-x for x in m])):
            mon = "*".join(f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mu) if e)
            parts.append(f"({self.terms[mu]})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)


def _binom(m, v):
    from math import comb

    return comb(m, v)


def _char_of(s: TruncSeries):
    z = s.zero
    F = getattr(z, "F", None)
    return F.p if F is not None else None


def _one_of(s: TruncSeries):
    z = s.zero
    one = getattr(z, "one_like", None)
    if one is not None:
        return one()
    F = getattr(z, "F", None)
    if F is not None and hasattr(type(z), "one"):
        return type(z).one(F)
    return type(z)(1) if not isinstance(z, int) else 1


def from_dict(n: int, D: int, d: dict, zero) -> TruncSeries:
    return TruncSeries(n, D, d, zero)


def sum_series(items: Iterable[TruncSeries], n: int, D: int, zero) -> TruncSeries:
    acc = TruncSeries(n, D, {}, zero)
    for s in items:
        acc = acc + s
    return acc

"""The local field k_inf = F_q((1/T)) with tracked absolute precision.

A Laurent value is sum c_i X^(v+i) with X = 1/T, known modulo X^prec; an
exact value has ``prec = None``.  Finite extensions, their norms,
Newton polygons with Hensel lifting, polydisc covers and restriction of
scalars live here as well.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from .algebra_core import (GF, FracK, PolyA, _add_lists, _coeff_list_text, _mul_lists,
                           _neg_list, _parse_coeff_list, _scale_list, binom_mod_p, field)
from .series import TruncSeries, is_zero, monomials

DEFAULT_PREC = 64


class PrecisionError(ArithmeticError):
    """Raised when a value is indistinguishable from zero at its precision."""


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Laurent:
    __slots__ = ("F", "v", "c", "prec")

    def __init__(self, v: int, coeffs, prec: int | None = None, F: GF | int = 2):
        if isinstance(F, int):
            F = field(F)
        self.F = F
        self._set(v, list(coeffs), prec)

    def _set(self, v, c, prec):
        k = 0
        while k < len(c) and not c[k]:
            k += 1
        if k:
            c = c[k:]
            v += k
        if prec is not None and v + len(c) > prec:
            c = c[: max(0, prec - v)]
        while c and not c[-1]:
            c.pop()
        if not c:
            v = prec if prec is not None else 0
        self.v, self.c, self.prec = v, tuple(c), prec

    @classmethod
    def _make(cls, F, v, c, prec) -> "Laurent":
        x = object.__new__(cls)
        x.F = F
        x._set(v, c, prec)
        return x

    # constructors
    @classmethod
    def zero(cls, F=2, prec: int | None = None) -> "Laurent":
        F = field(F) if isinstance(F, int) else F
        return cls._make(F, 0, [], prec)

    @classmethod
    def one(cls, F=2) -> "Laurent":
        F = field(F) if isinstance(F, int) else F
        return cls._make(F, 0, [1], None)

    @classmethod
    def monomial(cls, k: int, F=2, c: int = 1) -> "Laurent":
        """c * (1/T)^k, exact."""
        F = field(F) if isinstance(F, int) else F
        return cls._make(F, k, [c], None)

    @classmethod
    def T(cls, F=2, n: int = 1) -> "Laurent":
        return cls.monomial(-n, F)

    @classmethod
    def from_poly(cls, a: PolyA) -> "Laurent":
        if a.is_zero():
            return cls.zero(a.F)
        return cls._make(a.F, -a.deg(), list(reversed(a.c)), None)

    @classmethod
    def from_frac(cls, x: FracK, prec: int | None = DEFAULT_PREC) -> "Laurent":
        """Expansion of x known to absolute precision prec (exact when possible)."""
        num = cls.from_poly(x.num)
        if x.den.is_one():
            return num
        den = cls.from_poly(x.den)
        if prec is None:
            prec = DEFAULT_PREC + x.valuation()
        rel = prec - x.valuation()
        if rel <= 0:
            return cls.zero(x.F, prec)
        out = num * den.inv(rel)
        return out.truncate(prec)

    @classmethod
    def coerce(cls, x, F: GF, prec: int | None = DEFAULT_PREC) -> "Laurent":
        if isinstance(x, Laurent):
            return x
        if isinstance(x, PolyA):
            return cls.from_poly(x)
        if isinstance(x, FracK):
            return cls.from_frac(x, prec)
        if isinstance(x, int):
            return cls._make(F, 0, [F.from_int(x)], None)
        raise TypeError(f"cannot convert {type(x).__name__} to Laurent")

    # queries
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True when every known digit vanishes (exactly zero, or zero at precision)."""
        return not self.c

    def zero_report(self) -> str:
        if self.c:
            return "nonzero"
        return "exact zero" if self.prec is None else f"zero at precision {self.prec}"

    def valuation(self) -> int | None:
        """v_{1/T}; None for exact zero, and the precision bound for zero at precision."""
        if self.c:
            return self.v
        return self.prec

    def abs(self) -> Fraction:
        """|x|_{1/T} = q^(-v); 0 for any value whose known digits vanish."""
        if not self.c:
            return Fraction(0)
        return Fraction(self.F.q) ** (-self.v)

    def abs_bound(self) -> Fraction:
        """Certified upper bound on |x|."""
        if self.c:
            return self.abs()
        if self.prec is None:
            return Fraction(0)
        return Fraction(self.F.q) ** (-self.prec)

    def lead(self) -> int:
        return self.c[0] if self.c else 0

    def coefficient(self, k: int) -> int:
        """Digit of X^k = T^(-k); raises if beyond the known precision."""
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"digit {k} is beyond precision {self.prec}")
        i = k - self.v
        return self.c[i] if 0 <= i < len(self.c) else 0

    def rel_prec(self) -> int | None:
        if self.prec is None:
            return None
        return self.prec - (self.v if self.c else self.prec)

    def truncate(self, prec: int) -> "Laurent":
        return Laurent._make(self.F, self.v, list(self.c), _min_prec(self.prec, prec))

    def exact_value(self) -> "Laurent":
        """Forget the precision bound, treating stored digits as exact."""
        return Laurent._make(self.F, self.v, list(self.c), None)

    def one_like(self) -> "Laurent":
        return Laurent.one(self.F)

    def __bool__(self):
        return bool(self.c)

    # arithmetic
    def _co(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        return Laurent.coerce(other, self.F, self.prec if self.prec is not None else DEFAULT_PREC)

    def __add__(self, other):
        if isinstance(other, ExtElem):
            return other + self
        o = self._co(other)
        prec = _min_prec(self.prec, o.prec)
        if not o.c:
            return self.truncate(prec) if prec is not None else self
        if not self.c:
            return o.truncate(prec) if prec is not None else o
        v = min(self.v, o.v)
        a = [0] * (self.v - v) + list(self.c)
        b = [0] * (o.v - v) + list(o.c)
        return Laurent._make(self.F, v, _add_lists(self.F, a, b), prec)

    __radd__ = __add__

    def __neg__(self):
        return Laurent._make(self.F, self.v, _neg_list(self.F, self.c), self.prec)

    def __sub__(self, other):
        if isinstance(other, ExtElem):
            return (-other) + self
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        if isinstance(other, ExtElem):
            return other * self
        if isinstance(other, int):
            return self.scale(self.F.from_int(other))
        o = self._co(other)
        F = self.F
        if (not self.c and self.prec is None) or (not o.c and o.prec is None):
            return Laurent.zero(F)
        vx = self.v if self.c else self.prec
        vy = o.v if o.c else o.prec
        prec = None
        if self.prec is not None:
            prec = vy + self.prec
        if o.prec is not None:
            prec = _min_prec(prec, vx + o.prec)
        if not self.c or not o.c:
            return Laurent._make(F, vx + vy, [], prec)
        n = -1 if prec is None else prec - (vx + vy)
        if n == 0:
            return Laurent._make(F, vx + vy, [], prec)
        return Laurent._make(F, vx + vy, _mul_lists(F, self.c, o.c, n), prec)

    __rmul__ = __mul__

    def scale(self, x: int) -> "Laurent":
        """Multiply by an element of F_q."""
        if not x:
            return Laurent.zero(self.F, None if self.prec is None else self.prec) if self.prec is not None else Laurent.zero(self.F)
        return Laurent._make(self.F, self.v, _scale_list(self.F, self.c, x), self.prec)

    def shift(self, k: int) -> "Laurent":
        """Multiply by X^k = T^(-k)."""
        return Laurent._make(self.F, self.v + k, list(self.c), None if self.prec is None else self.prec + k)

    def inv(self, rel_prec: int | None = None) -> "Laurent":
        if not self.c:
            raise PrecisionError(f"cannot invert a value that is {self.zero_report()}")
        F = self.F
        if self.prec is None:
            if len(self.c) == 1:
                return Laurent._make(F, -self.v, [F.inv(self.c[0])], None)
            rel = rel_prec if rel_prec is not None else DEFAULT_PREC
        else:
            rel = self.prec - self.v
            if rel_prec is not None:
                rel = min(rel, rel_prec)
        u = list(self.c[:rel]) + [0] * max(0, rel - len(self.c))
        b = [F.inv(u[0])]
        n = 1
        two = F.from_int(2)
        while n < rel:
            n = min(2 * n, rel)
            t = _mul_lists(F, u[:n], b, n)
            t = _neg_list(F, t) + [0] * (n - len(t))
            t[0] = F.add(t[0], two)
            b = _mul_lists(F, b, t, n)
        return Laurent._make(F, -self.v, b, -self.v + rel)

    def __truediv__(self, other):
        o = self._co(other)
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._co(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = Laurent.one(self.F)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frob(self, k: int = 1) -> "Laurent":
        """x^(q^k): exponents scale by q^k, digits are fixed by Frobenius."""
        if k == 0:
            return self
        s = self.F.q**k
        c = [0] * ((len(self.c) - 1) * s + 1) if self.c else []
        for i, x in enumerate(self.c):
            c[i * s] = x
        return Laurent._make(self.F, self.v * s, c, None if self.prec is None else self.prec * s)

    def __eq__(self, other):
        try:
            d = self - other
        except TypeError:
            return NotImplemented
        return d.is_zero()

    __hash__ = None

    def agreement(self, other) -> int | None:
        """Largest N with self = other mod X^N, as certified by the known digits."""
        d = self - other
        return d.valuation()

    # text
    def to_text(self) -> str:
        prec = "inf" if self.prec is None else str(self.prec)
        head = "" if self.F.q == 2 else f"q={self.F.q};"
        return f"{head}v={self.v};prec={prec};coeffs={_coeff_list_text(self.F, self.c)}"

    @classmethod
    def from_text(cls, s: str, q: int = 2) -> "Laurent":
        fields = dict(part.split("=", 1) for part in s.split(";"))
        F = field(int(fields.get("q", q)))
        prec = None if fields["prec"].strip() == "inf" else int(fields["prec"])
        return cls._make(F, int(fields["v"]), _parse_coeff_list(F, fields["coeffs"]), prec)

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if not self.c:
            return "0" if self.prec is None else f"O(T^{-self.prec})"
        terms = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            e = -(self.v + i)
            mon = "1" if e == 0 else ("T" if e == 1 else f"T^{e}")
            cs = str(x)
            terms.append(mon if x == 1 else f"{cs}*{mon}")
        if self.prec is not None:
            terms.append(f"O(T^{-self.prec})")
        return " + ".join(terms)


def laurent_from_digits(F: GF, v: int, digits, prec: int | None = None) -> Laurent:
    return Laurent._make(F, v, list(digits), prec)


# ------------------------------------------------------------ linear algebra

def _is_zero_elem(x) -> bool:
    return is_zero(x)


def solve_linear(A: list[list], b: list, zero, field_name: str = "") -> list:
    """Solve A x = b by Gaussian elimination with largest-|.| pivots."""
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    cols = len(A[0])
    piv_cols = []
    r = 0
    for c in range(cols):
        best, best_abs = None, Fraction(0)
        for i in range(r, n):
            a = M[i][c].abs() if hasattr(M[i][c], "abs") else abs(M[i][c])
            if not _is_zero_elem(M[i][c]) and (best is None or a > best_abs):
                best, best_abs = i, a
        if best is None:
            raise PrecisionError(f"singular system at column {c}{field_name}")
        M[r], M[best] = M[best], M[r]
        inv = M[r][c].inv() if hasattr(M[r][c], "inv") else 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and not _is_zero_elem(M[i][c]):
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    return [M[i][cols] for i in range(cols)]


def det(M: list[list], zero, one):
    """Determinant over a field by elimination."""
    n = len(M)
    A = [list(r) for r in M]
    d = one
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not _is_zero_elem(A[i][c]):
                piv = i
                break
        if piv is None:
            return zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c]
        inv = A[c][c].inv()
        for i in range(c + 1, n):
            if not _is_zero_elem(A[i][c]):
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


# ---------------------------------------------------------------- extensions

class ExtField:
    """L = k_inf[x]/(m(x)) for monic m with every root of absolute value 1.

    ``basis_change`` holds the columns of alpha^j in an orthogonal reference
    basis (1, a0, ..., a0^(n-1)) of an unramified presentation; it is the
    identity when m itself has irreducible reduction.
    """

    def __init__(self, modulus: list[Laurent], basis_change=None, reference: "ExtField | None" = None):
        self.F = modulus[0].F
        m = [Laurent.coerce(c, self.F) for c in modulus]
        if not m[-1] == 1:
            raise ValueError("modulus must be monic")
        self.m = m
        self.n = len(m) - 1
        self.reference = reference
        self.basis_change = basis_change
        self._alpha_q = None
        if not self.abs_alpha_is_one():
            raise ValueError("|alpha| = 1 is not certified for this modulus; renormalize first")

    def abs_alpha_is_one(self) -> bool:
        """Flat Newton polygon at height 0: v(m_i) >= 0 and v(m_0) = 0."""
        m0 = self.m[0]
        if not m0.c or m0.v != 0:
            return False
        return all(c.is_zero() or c.v >= 0 for c in self.m)

    def residual(self) -> list[int]:
        return [c.coefficient(0) if c.c or c.prec is None else 0 for c in self.m]

    def is_unramified(self) -> bool:
        """Reduction of m has no root in F_q^(n/2); decisive for n <= 3."""
        r = self.residual()
        if self.n > 3:
            raise NotImplementedError("irreducibility test only for n <= 3")
        F = self.F
        for x in F.elements():
            acc = 0
            for c in reversed(r):
                acc = F.add(F.mul(acc, x), c)
            if acc == 0:
                return False
        return True

    @classmethod
    def unramified(cls, residual_poly: list[int], F=2) -> "ExtField":
        F = field(F) if isinstance(F, int) else F
        m = [Laurent.monomial(0, F, c) if c else Laurent.zero(F) for c in residual_poly]
        L = cls(m)
        if not L.is_unramified():
            raise ValueError("reduction is reducible; not an unramified presentation")
        return L

    @classmethod
    def from_generator(cls, base: "ExtField", u: "ExtElem") -> "ExtField":
        """L presented by the primitive element u of an unramified base field."""
        n = base.n
        pows = [base.one()]
        for _ in range(n):
            pows.append(pows[-1] * u)
        A = [[pows[j].coords[i] for j in range(n)] for i in range(n)]
        coeffs = solve_linear(A, list(pows[n].coords), Laurent.zero(base.F))
        m = [-c for c in coeffs] + [Laurent.one(base.F)]
        return cls(m, basis_change=A, reference=base)

    def mahler_gamma(self) -> Fraction:
        """gamma with gamma * F_alpha(z) <= |z| <= F_alpha(z)."""
        if self.basis_change is None:
            if self.n == 1 or self.is_unramified():
                return Fraction(1)
            raise ValueError("no orthogonal reference basis recorded for this field")
        P = self.basis_change
        inv_cols = [solve_linear(P, [Laurent.one(self.F) if i == j else Laurent.zero(self.F)
                                     for i in range(self.n)], Laurent.zero(self.F))
                    for j in range(self.n)]
        norm_inv = max(x.abs() for col in inv_cols for x in col)
        norm_P = max(x.abs() for row in P for x in row)
        if norm_P > 1:
            raise ValueError("basis change has entries of absolute value > 1")
        return 1 / norm_inv

    def elem(self, coords) -> "ExtElem":
        cs = [Laurent.coerce(c, self.F) for c in coords]
        cs += [Laurent.zero(self.F)] * (self.n - len(cs))
        return ExtElem(self, tuple(cs))

    def one(self) -> "ExtElem":
        return self.elem([Laurent.one(self.F)])

    def zero(self) -> "ExtElem":
        return self.elem([])

    def alpha(self) -> "ExtElem":
        if self.n == 1:
            return self.elem([-self.m[0]])
        return self.elem([Laurent.zero(self.F), Laurent.one(self.F)])

    def reduce(self, poly: list[Laurent]) -> tuple[Laurent, ...]:
        p = list(poly)
        n = self.n
        for k in range(len(p) - 1, n - 1, -1):
            c = p[k]
            if c.is_zero() and c.prec is None:
                continue
            for j in range(n):
                p[k - n + j] = p[k - n + j] - c * self.m[j]
        p = p[:n] + [Laurent.zero(self.F)] * max(0, n - len(p))
        return tuple(p)

    def alpha_power_coords(self, e: int) -> tuple[Laurent, ...]:
        return (self.alpha() ** e).coords

    def abs_via_norm(self, z: "ExtElem") -> Fraction:
        """|z| = |N(z)|^(1/n) from the determinant of multiplication by z."""
        n = self.n
        cols = [(z * self.elem([Laurent.zero(self.F)] * j + [Laurent.one(self.F)])).coords for j in range(n)]
        Mz = [[cols[j][i] for j in range(n)] for i in range(n)]
        N = det(Mz, Laurent.zero(self.F), Laurent.one(self.F))
        if N.is_zero():
            return Fraction(0)
        v = Fraction(N.v, n)
        return _q_pow(self.F.q, -v)

    def abs(self, z: "ExtElem") -> Fraction:
        """|z| through the orthogonal reference basis when available, else via the norm."""
        if self.basis_change is None and (self.n == 1 or self.is_unramified()):
            return max(c.abs() for c in z.coords)
        if self.reference is not None:
            P = self.basis_change
            n = self.n
            ref = [sum((P[i][j] * z.coords[j] for j in range(n)), Laurent.zero(self.F)) for i in range(n)]
            return max(c.abs() for c in ref)
        return self.abs_via_norm(z)


def _q_pow(q: int, e: Fraction):
    """q^e, returned as a Fraction when e is an integer and as a float otherwise."""
    if e.denominator == 1:
        return Fraction(q) ** int(e)
    return float(q) ** float(e)


@dataclass(frozen=True)
class ExtElem:
    L: ExtField
    coords: tuple

    def _co(self, other) -> "ExtElem":
        if isinstance(other, ExtElem):
            return other
        return self.L.elem([Laurent.coerce(other, self.L.F)])

    def __add__(self, other):
        o = self._co(other)
        return ExtElem(self.L, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.L, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return ExtElem(self.L, tuple(a * other for a in self.coords))
        if not isinstance(other, ExtElem):
            o = Laurent.coerce(other, self.L.F)
            return ExtElem(self.L, tuple(a * o for a in self.coords))
        n = self.L.n
        zero = Laurent.zero(self.L.F)
        prodc = [zero] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a.is_zero() and a.prec is None:
                continue
            for j, b in enumerate(other.coords):
                prodc[i + j] = prodc[i + j] + a * b
        return ExtElem(self.L, self.L.reduce(prodc))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        r = self.L.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            e >>= 1
            if e:
                b = b * b
        return r

    def frob(self, k: int = 1) -> "ExtElem":
        z = self
        for _ in range(k):
            if self.L._alpha_q is None:
                self.L._alpha_q = self.L.alpha() ** self.L.F.q
            aq = self.L._alpha_q
            acc = self.L.zero()
            powr = self.L.one()
            for c in z.coords:
                acc = acc + powr * c.frob()
                powr = powr * aq
            z = acc
        return z

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, (ExtElem, Laurent, int, PolyA, FracK)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def one_like(self) -> "ExtElem":
        return self.L.one()

    def abs(self) -> Fraction:
        return self.L.abs(self)

    def f_alpha(self) -> Fraction:
        return max(c.abs() for c in self.coords)

    def inv(self) -> "ExtElem":
        n = self.L.n
        cols = [(self * self.L.elem([Laurent.zero(self.L.F)] * j + [Laurent.one(self.L.F)])).coords
                for j in range(n)]
        Mz = [[cols[j][i] for j in range(n)] for i in range(n)]
        e0 = [Laurent.one(self.L.F)] + [Laurent.zero(self.L.F)] * (n - 1)
        return self.L.elem(solve_linear(Mz, e0, Laurent.zero(self.L.F)))

    def __truediv__(self, other):
        return self * self._co(other).inv()

    def __repr__(self):
        return "ExtElem(" + ", ".join(str(c) for c in self.coords) + ")"


def renormalize(m: list, b=None):
    """Rescale a root alpha of m to beta = a*alpha + b with |beta| = 1.

    Returns (monic minimal polynomial of beta, a, b).  Only single-slope
    integral Newton polygons are handled; other shapes raise.
    """
    F = m[-1].F if isinstance(m[-1], Laurent) else field(2)
    m = [Laurent.coerce(c, F) for c in m]
    n = len(m) - 1
    segs = newton_polygon(m)
    if len(segs) != 1:
        raise ValueError("roots of different absolute values: modulus is reducible")
    slope = segs[0].slope
    if slope.denominator != 1:
        raise ValueError("root lies in ramified extension")
    w = -int(slope)  # v(alpha)
    a = Laurent.monomial(-w, F)  # T^(v(alpha)) * alpha has valuation 0
    # m_beta(x) = a^n m((x - b)/a); first the scaling
    scaled = [m[i] * (a ** (n - i)) for i in range(n + 1)]
    if b is not None:
        bb = Laurent.coerce(b, F)
        scaled = _taylor_shift(scaled, -bb)
    return scaled, a, (Laurent.zero(F) if b is None else Laurent.coerce(b, F))


# ---------------------------------------------------------- adapted basis etc

def adapted_basis(n: int, m: int) -> list[tuple[int, int]]:
    """(i, j) labels of alpha^(j-1) e_i in the order (i,j) < (i,j+1) < (i+1,j)."""
    return [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]


def adapted_basis_vectors(L: ExtField, m: int) -> list[list[ExtElem]]:
    out = []
    for i, j in adapted_basis(L.n, m):
        vec = [L.zero() for _ in range(m)]
        vec[i - 1] = L.alpha() ** (j - 1)
        out.append(vec)
    return out


def psi(z: list[ExtElem]) -> list[Laurent]:
    """L^m -> k_inf^(nm) in the adapted basis."""
    return [c for zi in z for c in zi.coords]


def psi_inverse(w: list[Laurent], L: ExtField) -> list[ExtElem]:
    n = L.n
    return [L.elem(w[i * n:(i + 1) * n]) for i in range(len(w) // n)]


def f_alpha_norm(z: list[ExtElem]) -> Fraction:
    """max over all k_inf-coordinates in the adapted basis."""
    return max((c.abs() for zi in z for c in zi.coords), default=Fraction(0))


def sup_norm(z: list[ExtElem]) -> Fraction:
    return max((zi.abs() for zi in z), default=Fraction(0))


def _multinomials(k: int, parts: int):
    """All (eta_1..eta_parts) summing to k."""
    if parts == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _multinomials(k - first, parts - 1):
            yield (first,) + rest


def _multinomial_mod_p(k: int, eta, p: int) -> int:
    r, left = 1, k
    for e in eta:
        r = r * binom_mod_p(left, e, p) % p
        left -= e
    return r


def restriction_of_scalars(f: TruncSeries, L: ExtField) -> list[TruncSeries]:
    """h_1..h_n over k_inf in nm variables with f(psi^-1(w)) = sum alpha^(j-1) h_j(w)."""
    if not L.abs_alpha_is_one():
        raise ValueError("|alpha| = 1 is not certified")
    n, m, D = L.n, f.n, f.D
    F = L.F
    p = F.p
    zero = Laurent.zero(F)
    outs: list[dict] = [dict() for _ in range(n)]
    apow: dict[int, tuple] = {}
    for mu, c in f.items():
        per_var = [list(_multinomials(mu[i], n)) for i in range(m)]
        for choice in product(*per_var):
            k = 1
            e = 0
            w_exp = []
            for i, eta in enumerate(choice):
                k = k * _multinomial_mod_p(mu[i], eta, p) % p
                e += sum(j * x for j, x in enumerate(eta))
                w_exp.extend(eta)
            if not k:
                continue
            if e not in apow:
                apow[e] = L.alpha_power_coords(e)
            val = (c * L.elem(apow[e])) * k
            key = tuple(w_exp)
            for j in range(n):
                cj = val.coords[j]
                if key in outs[j]:
                    outs[j][key] = outs[j][key] + cj
                else:
                    outs[j][key] = cj
    return [TruncSeries(n * m, D, outs[j], zero) for j in range(n)]


def lift_to_L(h: TruncSeries, L: ExtField) -> TruncSeries:
    return TruncSeries(h.n, h.D, {mu: L.elem([c]) for mu, c in h.items()}, L.zero())


def compose_with_psi_inverse(f: TruncSeries, L: ExtField) -> TruncSeries:
    """f(sum_j alpha^(j-1) w_{i,j}) by series substitution, as a series over L."""
    n, m = L.n, f.n
    subs = []
    for i in range(m):
        terms = {}
        for j in range(n):
            mu = [0] * (n * m)
            mu[i * n + j] = 1
            terms[tuple(mu)] = L.alpha() ** j
        subs.append(TruncSeries(n * m, f.D, terms, L.zero()))
    return f.compose(subs)


# ------------------------------------------------------------ lattice coords

def lattice_decompose(z: list[ExtElem], periods: list[list[ExtElem]], completion=None):
    """Coordinates of psi(z) in the basis psi(omega_1..omega_d) + completion."""
    basis = [psi(w) for w in periods] + [psi(u) for u in (completion or [])]
    target = psi(z)
    N = len(target)
    if len(basis) != N:
        raise ValueError(f"need {N} basis vectors, got {len(basis)}")
    A = [[basis[j][i] for j in range(N)] for i in range(N)]
    try:
        return solve_linear(A, target, Laurent.zero(target[0].F), " (dependent periods at precision)")
    except PrecisionError as exc:
        raise PrecisionError(f"periods are dependent at working precision: {exc}") from exc


# ----------------------------------------------------------------- polydiscs

@dataclass(frozen=True)
class Polydisc:
    center: tuple
    radius: Fraction

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, z) -> bool:
        return all((Laurent.coerce(zi, self.center[i].F) - self.center[i]).abs_bound() <= self.radius
                   for i, zi in enumerate(z))

    def same_as(self, other: "Polydisc") -> bool:
        return self.radius == other.radius and self.contains(other.center)


def cover_unit_polydisc(h: int, N: int, F=2) -> list[Polydisc]:
    """The q^(hN) radius q^-N polydiscs tiling the closed unit polydisc of k_inf^h."""
    F = field(F) if isinstance(F, int) else F
    r = Fraction(1, F.q**N)
    one_dim = [Laurent._make(F, 0, list(d), None) for d in product(F.elements(), repeat=N)]
    return [Polydisc(tuple(c), r) for c in product(one_dim, repeat=h)]


def disc_key(z: list[Laurent], N: int) -> tuple:
    """Index of the radius q^-N disc containing z (first N digits of each coordinate)."""
    return tuple(tuple(zi.coefficient(k) for k in range(N)) for zi in z)


# ------------------------------------------------------ Newton polygon / roots

@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    slope: Fraction

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope

    @property
    def length(self) -> int:
        return self.end - self.start


def newton_polygon(f: list[Laurent]) -> list[Segment]:
    pts = [(i, c.v) for i, c in enumerate(f) if c.c]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [Segment(a[0], b[0], Fraction(b[1] - a[1], b[0] - a[0])) for a, b in zip(hull, hull[1:])]


def poly_eval(f: list, x):
    acc = None
    for c in reversed(f):
        acc = c if acc is None else acc * x + c
    return acc


def poly_derivative(f: list[Laurent]) -> list[Laurent]:
    return [c * i for i, c in enumerate(f)][1:]


def _taylor_shift(f: list[Laurent], x0: Laurent) -> list[Laurent]:
    """Coefficients of f(x0 + y) in y (repeated synthetic division)."""
    g = list(f)
    n = len(g)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            g[j] = g[j] + x0 * g[j + 1]
    return g


def residual_polynomial(f: list[Laurent], seg: Segment) -> list[int]:
    """Leading digits of the coefficients lying on the segment."""
    w = -seg.slope
    lam = f[seg.start].v + w * seg.start
    out = []
    for i in range(seg.start, seg.end + 1):
        c = f[i]
        if c.c and c.v + w * i == lam:
            out.append(c.lead())
        else:
            out.append(0)
    return out


def _residual_roots(F: GF, r: list[int]) -> dict[int, int]:
    """Nonzero roots of r over F_q with multiplicities."""
    roots = {}
    for u in range(1, F.q):
        mult = 0
        coeffs = list(r)
        while True:
            acc = 0
            for c in reversed(coeffs):
                acc = F.add(F.mul(acc, u), c)
            if acc:
                break
            mult += 1
            # synthetic division by (x - u)
            nxt = [0] * (len(coeffs) - 1)
            carry = 0
            for k in range(len(coeffs) - 1, 0, -1):
                carry = F.add(coeffs[k], F.mul(carry, u))
                nxt[k - 1] = carry
            coeffs = nxt
            if not coeffs:
                break
        if mult:
            roots[u] = mult
    return roots


class HenselError(ArithmeticError):
    pass


@dataclass
class RootReport:
    roots: list
    precision: list
    notes: list


def hensel_root(f: list[Laurent], seg: Segment, u0: int | None = None, prec: int = DEFAULT_PREC) -> Laurent:
    """Lift a simple residual root on an integral-slope segment to a root known mod X^prec."""
    F = f[-1].F
    if seg.slope.denominator != 1:
        raise HenselError("root lies in ramified extension")
    r = residual_polynomial(f, seg)
    roots = _residual_roots(F, r)
    if u0 is None:
        simple = [u for u, k in roots.items() if k == 1]
        if not simple:
            raise HenselError("not Hensel-liftable here: no simple residual root on this segment")
        u0 = simple[0]
    elif roots.get(u0) != 1:
        raise HenselError("not Hensel-liftable here: residual root is not simple")
    w = int(-seg.slope)
    return _newton_lift(f, w, u0, prec)


def _newton_lift(f: list[Laurent], w: int, u0: int, prec: int) -> Laurent:
    F = f[-1].F
    # exact polynomials are lifted in the scaled variable u with x = X^w u
    lam = min(c.v + w * i for i, c in enumerate(f) if c.c)
    g = [(c.shift(w * i - lam)) for i, c in enumerate(f)]
    dg = poly_derivative(g)
    target = prec - w
    work = target + 4
    u = Laurent._make(F, 0, [u0], None)
    for _ in range(64):
        uw = u.truncate(work) if u.prec is None or u.prec > work else u
        val = poly_eval([c.truncate(work + 8) if c.prec is None else c for c in g], uw.exact_value())
        der = poly_eval(dg, uw.exact_value())
        if not der.c or der.v != 0:
            raise HenselError("derivative lost its unit part during lifting")
        vf = val.valuation()
        if vf is None or vf >= target:
            break
        step = val * der.inv(work + 2)
        u = (uw.exact_value() - step).truncate(work).exact_value()
    val = poly_eval([c for c in g], u)
    cert = val.valuation()
    cert = target if cert is None else min(cert, target)
    return u.truncate(cert).shift(w)


def roots_in_k_inf(f: list[Laurent], prec: int = DEFAULT_PREC, _floor: int | None = None,
                   _depth: int = 0) -> RootReport:
    """All roots of f in k_inf (f without repeated roots), each known mod X^prec.

    Multiple residual roots are resolved by shifting to the approximate root
    and recomputing the Newton polygon.  Non-integral slopes are reported.
    """
    F = f[-1].F
    roots, precs, notes = [], [], []
    g = list(f)
    if len(g) > 1 and g[0].is_zero():
        roots.append(Laurent.zero(F))
        precs.append(g[0].prec)
        g = g[1:]
        if len(g) > 1 and g[0].is_zero():
            notes.append("repeated root at 0")
    for seg in newton_polygon(g):
        if seg.slope.denominator != 1:
            notes.append(f"slope {seg.slope}: root lies in ramified extension")
            continue
        w = int(-seg.slope)
        if _floor is not None and w <= _floor:
            continue
        r = residual_polynomial(g, seg)
        for u0, mult in _residual_roots(F, r).items():
            if mult == 1:
                x = _newton_lift(g, w, u0, prec)
                roots.append(x)
                precs.append(x.prec)
            else:
                if w >= prec or _depth > 4 * prec:
                    notes.append(f"cluster of {mult} roots near valuation {w} unresolved at precision {prec}")
                    continue
                x0 = Laurent.monomial(w, F, u0)
                shifted = _taylor_shift(g, x0)
                sub = roots_in_k_inf(shifted, prec, _floor=w, _depth=_depth + 1)
                for y, py in zip(sub.roots, sub.precision):
                    roots.append(x0 + y)
                    precs.append(py)
                notes.extend(sub.notes)
    return RootReport(roots, precs, notes)


def gamma_lower_bound(L: ExtField) -> Fraction:
    return L.mahler_gamma()


def laurent_json(x: Laurent) -> dict:
    return {"v": x.v, "prec": x.prec, "coeffs": list(x.c)}

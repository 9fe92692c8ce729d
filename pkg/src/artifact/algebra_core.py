"""Exact arithmetic in F_q, A = F_q[T] and k = F_q(T).

Field elements are small ints: the integer sum(d_i p^i) stands for
sum(d_i g^i) where g is a root of the fixed modulus of F_q over F_p.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import kernels

# Conway polynomials (low-to-high over F_p) for the non-prime q <= 16.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
}

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def _prime_power(q: int) -> tuple[int, int]:
    for p in SMALL_PRIMES:
        e, r = 0, q
        while r % p == 0:
            r //= p
            e += 1
        if r == 1 and e >= 1:
            return p, e
    raise ValueError(f"q={q} is not a power of a prime <= 13")


class GF:
    """The finite field F_q, q = p^e <= 16, with precomputed operation tables."""

    __slots__ = ("p", "e", "q", "modulus", "add_t", "mul_t", "neg_t", "inv_t", "_hash")

    def __init__(self, p: int, e: int):
        self.p, self.e, self.q = p, e, p**e
        if self.q > 16:
            raise ValueError("supported fields have q <= 16")
        self.modulus = CONWAY.get((p, e), (0, 1))
        q = self.q
        digits = [self._digits(x) for x in range(q)]
        self.add_t = [self._encode([(u + v) % p for u, v in zip(digits[x], digits[y])])
                      for x in range(q) for y in range(q)]
        self.mul_t = [self._encode(self._mulvec(digits[x], digits[y]))
                      for x in range(q) for y in range(q)]
        self.neg_t = [self._encode([(-u) % p for u in digits[x]]) for x in range(q)]
        self.inv_t = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self.mul_t[x * q + y] == 1:
                    self.inv_t[x] = y
        self._hash = hash(("GF", p, e))

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, d) -> int:
        x = 0
        for c in reversed(list(d)):
            x = x * self.p + c
        return x

    def _mulvec(self, u, v):
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                prod[i + j] = (prod[i + j] + a * b) % p
        mod = self.modulus
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
        return prod[:e]

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GF({self.q})"

    @property
    def prime(self) -> bool:
        return self.e == 1

    def elements(self) -> range:
        return range(self.q)

    def add(self, x: int, y: int) -> int:
        return self.add_t[x * self.q + y]

    def sub(self, x: int, y: int) -> int:
        return self.add_t[x * self.q + self.neg_t[y]]

    def mul(self, x: int, y: int) -> int:
        return self.mul_t[x * self.q + y]

    def neg(self, x: int) -> int:
        return self.neg_t[x]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_t[x]

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            return 1 if n == 0 else 0
        r = 1
        for _ in range(n % (self.q - 1)):
            r = self.mul(r, x)
        return r

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p inside F_q."""
        return n % self.p

    def digits(self, x: int) -> list[int]:
        return self._digits(x)

    def from_digits(self, d) -> int:
        return self._encode(d)


@lru_cache(maxsize=None)
def field(q: int = 2) -> GF:
    """Shared F_q instance."""
    p, e = _prime_power(q)
    return GF(p, e)


# ---------------------------------------------------------------- polynomials

def _mul_lists(F: GF, a, b, n: int = -1) -> list:
    if F.prime:
        return kernels.conv_p(a, b, F.p, n)
    return kernels.conv_tab(a, b, F.add_t, F.mul_t, F.q, n)


def _add_lists(F: GF, a, b) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.prime:
        p = F.p
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % p
    else:
        add, q = F.add_t, F.q
        for i, y in enumerate(b):
            out[i] = add[out[i] * q + y]
    while out and not out[-1]:
        out.pop()
    return out


def _neg_list(F: GF, a) -> list:
    return [F.neg_t[x] for x in a]


def _scale_list(F: GF, a, c: int) -> list:
    if not c:
        return []
    return [F.mul_t[x * F.q + c] for x in a]


class PolyA:
    """Element of A = F_q[T] as a low-to-high coefficient tuple."""

    __slots__ = ("F", "c")

    def __init__(self, coeffs=(), F: GF | int = 2):
        if isinstance(F, int):
            F = field(F)
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.F = F
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c, F: GF) -> "PolyA":
        obj = object.__new__(cls)
        obj.F = F
        obj.c = tuple(c)
        return obj

    # constructors
    @classmethod
    def zero(cls, F) -> "PolyA":
        return cls((), F)

    @classmethod
    def one(cls, F) -> "PolyA":
        return cls((1,), F)

    @classmethod
    def T(cls, F=2, n: int = 1) -> "PolyA":
        return cls([0] * n + [1], F)

    @classmethod
    def const(cls, x: int, F) -> "PolyA":
        return cls((x,), F)

    # basic queries
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if isinstance(other, PolyA):
            return self.c == other.c and self.F == other.F
        if isinstance(other, int):
            return self.c == ((self.F.from_int(other),) if self.F.from_int(other) else ())
        if isinstance(other, FracK):
            return other.den.is_one() and other.num == self
        return NotImplemented

    def __hash__(self):
        return hash((self.F.q, self.c))

    def _coerce(self, other) -> "PolyA":
        if isinstance(other, PolyA):
            return other
        if isinstance(other, int):
            return PolyA._raw((self.F.from_int(other),) if self.F.from_int(other) else (), self.F)
        raise TypeError(f"cannot combine PolyA with {type(other).__name__}")

    # ring operations
    def __add__(self, other):
        if isinstance(other, FracK):
            return FracK.from_poly(self) + other
        o = self._coerce(other)
        return PolyA._raw(_add_lists(self.F, self.c, o.c), self.F)

    __radd__ = __add__

    def __neg__(self):
        return PolyA._raw(_neg_list(self.F, self.c), self.F)

    def __sub__(self, other):
        if isinstance(other, FracK):
            return FracK.from_poly(self) - other
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, FracK):
            return FracK.from_poly(self) * other
        o = self._coerce(other)
        return PolyA._raw(_mul_lists(self.F, self.c, o.c), self.F)

    __rmul__ = __mul__

    def scale(self, x: int) -> "PolyA":
        return PolyA._raw(_scale_list(self.F, self.c, x), self.F)

    def __pow__(self, n: int):
        result = PolyA.one(self.F)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return FracK.from_poly(self) / other

    def __rtruediv__(self, other):
        return FracK.from_poly(self._coerce(other)) / self

    def divmod(self, other: "PolyA") -> tuple["PolyA", "PolyA"]:
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.F
        if F.prime:
            qt, r = kernels.divmod_p(self.c, o.c, F.p)
        else:
            qt, r = kernels.divmod_tab(self.c, o.c, F.add_t, F.mul_t, F.neg_t, F.inv_t, F.q)
        return PolyA._raw(qt, F), PolyA._raw(r, F)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "PolyA":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def frob(self, k: int = 1) -> "PolyA":
        """a^(q^k); coefficients are fixed by Frobenius, so this is a(T^(q^k))."""
        if k == 0 or len(self.c) <= 1:
            return self
        step = self.F.q**k
        out = [0] * ((len(self.c) - 1) * step + 1)
        for i, x in enumerate(self.c):
            out[i * step] = x
        return PolyA._raw(out, self.F)

    def frob_root(self, k: int = 1) -> "PolyA":
        """Inverse of frob when every exponent is divisible by q^k."""
        step = self.F.q**k
        if any(x and i % step for i, x in enumerate(self.c)):
            raise ValueError("polynomial is not a q^k-th power")
        return PolyA._raw(self.c[::step], self.F)

    def __call__(self, x):
        """Horner evaluation at any ring element supporting + and *."""
        acc = None
        for ci in reversed(self.c):
            acc = ci if acc is None else acc * x + ci
        return 0 if acc is None else acc

    def derivative(self) -> "PolyA":
        F = self.F
        return PolyA([F.mul(x, F.from_int(i)) for i, x in enumerate(self.c)][1:], F)

    def abs(self) -> Fraction:
        return abs_1_over_T(self)

    def valuation(self):
        """1/T-adic valuation, -deg; None for zero."""
        return -self.deg() if self.c else None

    # text forms
    def to_text(self) -> str:
        return f"q={self.F.q};{_coeff_list_text(self.F, self.c)}"

    @classmethod
    def from_text(cls, s: str) -> "PolyA":
        head, _, body = s.partition(";")
        F = field(int(head.strip().removeprefix("q=")))
        return cls(_parse_coeff_list(F, body), F)

    def __repr__(self):
        return f"PolyA({pretty(self)}, q={self.F.q})"

    def __str__(self):
        return pretty(self)


def _coeff_list_text(F: GF, coeffs) -> str:
    if F.prime:
        return "[" + ",".join(str(x) for x in coeffs) + "]"
    return "[" + ",".join("[" + ",".join(map(str, F.digits(x))) + "]" for x in coeffs) + "]"


def _parse_coeff_list(F: GF, body: str) -> list[int]:
    import json

    raw = json.loads(body.strip())
    out = []
    for x in raw:
        if isinstance(x, list):
            out.append(F.from_digits([v % F.p for v in x]))
        else:
            if not 0 <= int(x) < F.q:
                raise ValueError(f"coefficient {x} outside F_{F.q}")
            out.append(int(x))
    return out


def _coeff_str(F: GF, x: int) -> str:
    if F.prime:
        return str(x)
    d = F.digits(x)
    terms = []
    for i, c in enumerate(d):
        if c:
            mon = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            terms.append((str(c) if c != 1 or not mon else "") + mon if mon else str(c))
    return "(" + "+".join(terms) + ")" if len(terms) > 1 else terms[0]


def pretty(a: PolyA, var: str = "T") -> str:
    if a.is_zero():
        return "0"
    terms = []
    for i in range(len(a.c) - 1, -1, -1):
        x = a.c[i]
        if not x:
            continue
        cs = _coeff_str(a.F, x)
        if i == 0:
            terms.append(cs)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            terms.append(mon if x == 1 else f"{cs}*{mon}")
    return " + ".join(terms)


_TERM = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?(?:(g)(?:\^(\d+))?\s*\*?\s*)?(?:([A-Za-z])(?:\^(\d+))?)?\s*$")


def parse_poly(s: str, q: int = 2, var: str = "T") -> PolyA:
    """Parse a sum of terms like "T^3+T", "2T^2+1" or "g*T+1" (g generates F_q)."""
    F = field(q)
    s = s.replace(" ", "").replace("-", "+-")
    acc = PolyA.zero(F)
    for term in filter(None, s.split("+")):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        m = _TERM.match(term)
        if not m or not term:
            raise ValueError(f"cannot parse term {term!r}")
        num, g, gexp, v, vexp = m.groups()
        if v is not None and v != var:
            raise ValueError(f"unexpected variable {v!r}")
        if g is None and v is None and num is None:
            raise ValueError(f"cannot parse term {term!r}")
        c = F.from_int(sign * (int(num) if num else 1))
        if g:
            if F.prime:
                raise ValueError("generator g only exists for non-prime q")
            c = F.mul(c, F.pow(F.p, int(gexp) if gexp else 1))
        e = (int(vexp) if vexp else 1) if v else 0
        acc = acc + PolyA([0] * e + [c], F)
    return acc


def abs_1_over_T(a) -> Fraction:
    """|a|_{1/T} = q^deg(a) for nonzero a, 0 for a = 0; fractions are multiplicative."""
    if isinstance(a, FracK):
        if a.is_zero():
            return Fraction(0)
        return Fraction(a.num.F.q) ** (a.num.deg() - a.den.deg())
    if a.is_zero():
        return Fraction(0)
    return Fraction(a.F.q) ** a.deg()


def poly_gcd(a: PolyA, b: PolyA) -> PolyA:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def gcd_lcm(a: PolyA, b: PolyA) -> tuple[PolyA, PolyA]:
    """Monic gcd and monic lcm of a and b (not both zero)."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd_lcm of two zero polynomials is undefined")
    g = poly_gcd(a, b)
    if a.is_zero() or b.is_zero():
        return g, PolyA.zero(a.F)
    return g, (a * b // g).monic()


def binom_mod_p(h: int, i: int, p: int) -> int:
    """C(h, i) mod p by Lucas' theorem."""
    if i < 0 or i > h:
        raise ValueError(f"binom_mod_p requires 0 <= i <= h, got i={i}, h={h}")
    r = 1
    while h or i:
        hd, idig = h % p, i % p
        if idig > hd:
            return 0
        r = r * comb(hd, idig) % p
        h //= p
        i //= p
    return r


def monic_polys(F: GF, deg: int):
    """All monic polynomials of exact degree deg."""
    from itertools import product

    for tail in product(F.elements(), repeat=deg):
        yield PolyA._raw(tuple(tail) + (1,), F)


def polys_below(F: GF, deg: int):
    """All polynomials of degree < deg (including zero), low-to-high lexicographic."""
    from itertools import product

    for c in product(F.elements(), repeat=deg):
        yield PolyA(c, F)


# ------------------------------------------------------------------ fractions

class FracK:
    """Element of k = F_q(T) in canonical form: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical: bool = False):
        if isinstance(num, int):
            F = den.F if isinstance(den, PolyA) else field(2)
            num = PolyA.const(F.from_int(num), F)
        if den is None:
            den = PolyA.one(num.F)
        if _canonical:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, PolyA.one(num.F)
            return
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num // g, den // g
        lc = den.lead()
        if lc != 1:
            inv = num.F.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, a: PolyA) -> "FracK":
        return cls(a, PolyA.one(a.F), _canonical=True)

    @classmethod
    def zero(cls, F) -> "FracK":
        F = field(F) if isinstance(F, int) else F
        return cls(PolyA.zero(F), PolyA.one(F), _canonical=True)

    @classmethod
    def one(cls, F) -> "FracK":
        F = field(F) if isinstance(F, int) else F
        return cls(PolyA.one(F), PolyA.one(F), _canonical=True)

    @property
    def F(self) -> GF:
        return self.num.F

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other) -> "FracK":
        if isinstance(other, FracK):
            return other
        if isinstance(other, PolyA):
            return FracK.from_poly(other)
        if isinstance(other, int):
            return FracK.from_poly(PolyA.zero(self.F)._coerce(other))
        raise TypeError(f"cannot combine FracK with {type(other).__name__}")

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.is_one():
            return hash(self.num)
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return FracK(self.num + o.num, self.den)
        if self.den.is_one():
            return FracK(self.num * o.den + o.num, o.den, _canonical=True)
        if o.den.is_one():
            return FracK(self.num + o.num * self.den, self.den, _canonical=True)
        return FracK(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FracK(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return FracK.zero(self.F)
        # cross-cancel before multiplying keeps the result canonical
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.is_one() else (self.num // g1, o.den // g1)
        n2, d1 = (o.num, self.den) if g2.is_one() else (o.num // g2, self.den // g2)
        num, den = n1 * n2, d1 * d2
        lc = den.lead()
        if lc != 1:
            inv = self.F.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        return FracK(num, den, _canonical=True)

    __rmul__ = __mul__

    def inv(self) -> "FracK":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in k")
        return FracK(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return FracK(self.num**n, self.den**n, _canonical=True)

    def frob(self, k: int = 1) -> "FracK":
        return FracK(self.num.frob(k), self.den.frob(k), _canonical=True)

    def frob_root(self, k: int = 1) -> "FracK":
        return FracK(self.num.frob_root(k), self.den.frob_root(k), _canonical=True)

    def abs(self) -> Fraction:
        return abs_1_over_T(self)

    def valuation(self):
        """1/T-adic valuation deg(den) - deg(num); None for zero."""
        if self.is_zero():
            return None
        return self.den.deg() - self.num.deg()

    def height(self) -> Fraction:
        """H(a/b) = q^max(deg a, deg b); H(0) = 1."""
        if self.is_zero():
            return Fraction(1)
        return Fraction(self.F.q) ** max(self.num.deg(), self.den.deg())

    def is_poly(self) -> bool:
        return self.den.is_one()

    def to_text(self) -> str:
        F = self.F
        return f"q={F.q};{_coeff_list_text(F, self.num.c)}/{_coeff_list_text(F, self.den.c)}"

    @classmethod
    def from_text(cls, s: str) -> "FracK":
        head, _, body = s.partition(";")
        F = field(int(head.strip().removeprefix("q=")))
        num_s, slash, den_s = body.partition("/")
        num = PolyA(_parse_coeff_list(F, num_s), F)
        den = PolyA(_parse_coeff_list(F, den_s), F) if slash else PolyA.one(F)
        return cls(num, den)

    def __repr__(self):
        return f"FracK({self})"

    def __str__(self):
        if self.den.is_one():
            return pretty(self.num)
        return f"({pretty(self.num)})/({pretty(self.den)})"


def parse_frac(s: str, q: int = 2) -> FracK:
    """Parse "num" or "num/den" with polynomial parts, e.g. "(T+1)/T^2"."""
    num_s, slash, den_s = s.partition("/")
    strip = lambda t: t.strip().removeprefix("(").removesuffix(")")
    num = parse_poly(strip(num_s), q)
    den = parse_poly(strip(den_s), q) if slash else PolyA.one(field(q))
    if den.is_zero():
        raise ZeroDivisionError(f"zero denominator in {s!r}")
    return FracK(num, den)


def to_frac(x, F: GF) -> FracK:
    if isinstance(x, FracK):
        return x
    if isinstance(x, PolyA):
        return FracK.from_poly(x)
    if isinstance(x, int):
        return FracK.from_poly(PolyA.const(F.from_int(x), F))
    raise TypeError(f"cannot convert {type(x).__name__} to FracK")


def proper_fractions(a: PolyA):
    """All c/a with deg c < deg a, reduced to lowest terms, in numerator order."""
    for c in polys_below(a.F, a.deg()):
        yield FracK(c, a)

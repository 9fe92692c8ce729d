"""Twisted polynomials sum M_i tau^i with tau * c = c^(q) * tau.

Coefficients are square matrices (tuples of rows) over a field whose
elements provide ``frob``; scalars are 1x1 matrices.  Frobenius acts on a
matrix entrywise.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

from .algebra_core import FracK, PolyA, _coeff_list_text, _parse_coeff_list, field
from .series import is_zero

Matrix = tuple  # tuple of row tuples


class RightDivisionUnavailable(ArithmeticError):
    pass


class PrecisionLossWarning(UserWarning):
    pass


# -------------------------------------------------------------- matrix helpers

def mat(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def mat_zero(m: int, zero) -> Matrix:
    return tuple((zero,) * m for _ in range(m))


def mat_identity(m: int, zero, one) -> Matrix:
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def mat_scalar(m: int, c, zero) -> Matrix:
    return tuple(tuple(c if i == j else zero for j in range(m)) for i in range(m))


def mat_is_zero(A: Matrix) -> bool:
    return all(is_zero(x) for r in A for x in r)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_neg(A: Matrix) -> Matrix:
    return tuple(tuple(-a for a in r) for r in A)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return mat_add(A, mat_neg(B))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k = len(A), len(B)
    cols = len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = None
            for t in range(k):
                a, b = A[i][t], B[t][j]
                if is_zero(a) or is_zero(b):
                    continue
                v = a * b
                acc = v if acc is None else acc + v
            row.append(acc if acc is not None else _zero_like(A, B))
        out.append(tuple(row))
    return tuple(out)


def _zero_like(A: Matrix, B: Matrix):
    x = A[0][0]
    return x - x


def mat_frob(A: Matrix, k: int = 1) -> Matrix:
    if k == 0:
        return A
    return tuple(tuple(x.frob(k) for x in r) for r in A)


def mat_vec(A: Matrix, v) -> tuple:
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            if is_zero(a):
                continue
            t = a * x
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else v[0] - v[0])
    return tuple(out)


def mat_inv(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
    n = len(A)
    zero = _zero_like(A, A)
    one = zero.one_like() if hasattr(zero, "one_like") else type(zero).one(zero.F)
    M = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not is_zero(M[i][c])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inv()
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and not is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def mat_pow(A: Matrix, k: int) -> Matrix:
    zero = _zero_like(A, A)
    one = zero.one_like() if hasattr(zero, "one_like") else type(zero).one(zero.F)
    R = mat_identity(len(A), zero, one)
    for _ in range(k):
        R = mat_mul(R, A)
    return R


def _one_from_zero(zero):
    if hasattr(zero, "one_like"):
        return zero.one_like()
    return type(zero).one(zero.F)


# --------------------------------------------------------------- TwistedPoly

class TwistedPoly:
    """Immutable element of M_m(K){tau}; ``coeffs[i]`` is the tau^i matrix."""

    __slots__ = ("coeffs", "m", "q", "zero")

    def __init__(self, coeffs, q: int, zero, m: int | None = None):
        cs = [mat(c) for c in coeffs]
        if m is None:
            if not cs:
                raise ValueError("dimension needed for an empty twisted polynomial")
            m = len(cs[0])
        for c in cs:
            if len(c) != m or any(len(r) != m for r in c):
                raise ValueError(f"coefficient is not {m}x{m}")
        while cs and mat_is_zero(cs[-1]):
            cs.pop()
        self.coeffs, self.m, self.q, self.zero = tuple(cs), m, q, zero

    # constructors
    @classmethod
    def scalar(cls, coeffs, q: int, zero) -> "TwistedPoly":
        return cls([((c,),) for c in coeffs], q, zero, 1)

    @classmethod
    def identity(cls, m: int, q: int, zero) -> "TwistedPoly":
        return cls([mat_identity(m, zero, _one_from_zero(zero))], q, zero, m)

    @classmethod
    def constant(cls, M: Matrix, q: int, zero) -> "TwistedPoly":
        return cls([M], q, zero, len(M))

    @classmethod
    def tau(cls, m: int, q: int, zero, k: int = 1) -> "TwistedPoly":
        Z = mat_zero(m, zero)
        return cls([Z] * k + [mat_identity(m, zero, _one_from_zero(zero))], q, zero, m)

    def _like(self, coeffs) -> "TwistedPoly":
        return TwistedPoly(coeffs, self.q, self.zero, self.m)

    # queries
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Matrix:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return mat_zero(self.m, self.zero)

    def leading(self) -> Matrix:
        return self.coeffs[-1]

    def scalar_coeffs(self) -> list:
        if self.m != 1:
            raise ValueError("not a scalar twisted polynomial")
        return [c[0][0] for c in self.coeffs]

    def _check(self, other: "TwistedPoly"):
        if not isinstance(other, TwistedPoly):
            raise TypeError("expected a TwistedPoly")
        if other.m != self.m:
            raise ValueError(f"dimension mismatch: {self.m} vs {other.m}")
        if other.q != self.q:
            raise ValueError(f"Frobenius base mismatch: {self.q} vs {other.q}")

    # ring operations
    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like([mat_add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return self._like([mat_neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def compose(self, other: "TwistedPoly") -> "TwistedPoly":
        """self * other in M_m(K){tau}, i.e. x -> self(other(x))."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return self._like([])
        Z = mat_zero(self.m, self.zero)
        out = [Z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, A in enumerate(self.coeffs):
            if mat_is_zero(A):
                continue
            for j, B in enumerate(other.coeffs):
                if mat_is_zero(B):
                    continue
                out[i + j] = mat_add(out[i + j], mat_mul(A, mat_frob(B, i)))
        return self._like(out)

    __mul__ = compose

    def lmul(self, M: Matrix) -> "TwistedPoly":
        """M * self for a constant matrix M."""
        return self._like([mat_mul(M, c) for c in self.coeffs])

    def __pow__(self, k: int) -> "TwistedPoly":
        r = TwistedPoly.identity(self.m, self.q, self.zero)
        for _ in range(k):
            r = r.compose(self)
        return r

    def differential(self) -> Matrix:
        return self.coeff(0)

    def map_coeffs(self, fn, zero) -> "TwistedPoly":
        return TwistedPoly([tuple(tuple(fn(x) for x in r) for r in c) for c in self.coeffs],
                           self.q, zero, self.m)

    def right_divide(self, g: "TwistedPoly") -> tuple["TwistedPoly", "TwistedPoly"]:
        """(Q, R) with self = Q * g + R and deg R < deg g."""
        self._check(g)
        if g.is_zero():
            raise RightDivisionUnavailable("right division unavailable: divisor is zero")
        lead = g.leading()
        if _approx_zero_lead(lead):
            warnings.warn("leading coefficient of the divisor is zero only at working precision",
                          PrecisionLossWarning, stacklevel=2)
        try:
            mat_inv(lead)
        except ZeroDivisionError:
            raise RightDivisionUnavailable("right division unavailable: leading coefficient is not invertible") from None
        l = g.degree()
        Z = mat_zero(self.m, self.zero)
        R = list(self.coeffs)
        Q = [Z] * max(0, len(R) - l)
        invs: dict[int, Matrix] = {}
        for a in range(len(R) - 1, l - 1, -1):
            top = R[a]
            if mat_is_zero(top):
                continue
            k = a - l
            if k not in invs:
                invs[k] = mat_inv(mat_frob(lead, k))
            c = mat_mul(top, invs[k])
            Q[k] = c
            for j, B in enumerate(g.coeffs):
                R[k + j] = mat_sub(R[k + j], mat_mul(c, mat_frob(B, k)))
            if not mat_is_zero(R[a]):
                warnings.warn("cancellation incomplete: coefficients are approximate",
                              PrecisionLossWarning, stacklevel=2)
                R[a] = Z
        return self._like(Q), self._like(R[:l])

    # evaluation
    def __call__(self, x):
        """Evaluate on a vector (length m) or, when m = 1, on a scalar."""
        scalar = self.m == 1 and not isinstance(x, (tuple, list))
        v = (x,) if scalar else tuple(x)
        if len(v) != self.m:
            raise ValueError(f"dimension mismatch: point has {len(v)} coordinates, expected {self.m}")
        acc = None
        cur = v
        for i, A in enumerate(self.coeffs):
            if i:
                cur = tuple(c.frob(1) for c in cur)
            if mat_is_zero(A):
                continue
            t = mat_vec(A, cur)
            acc = t if acc is None else tuple(a + b for a, b in zip(acc, t))
        if acc is None:
            acc = tuple(c - c for c in v)
        return acc[0] if scalar else acc

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return self.m == other.m and (self - other).is_zero()

    __hash__ = None

    # text
    def to_text(self) -> str:
        F = self.zero.F
        head = "" if F.q == 2 else f"q={F.q}:"
        terms = []
        for i, M in enumerate(self.coeffs):
            if mat_is_zero(M):
                continue
            rows = "; ".join(" ".join(_entry_text(x) for x in r) for r in M)
            terms.append(f"[{rows}]τ^{i}")
        return head + (" + ".join(terms) if terms else f"[{'; '.join(' '.join('[]' for _ in range(self.m)) for _ in range(self.m))}]τ^0")

    @classmethod
    def from_text(cls, s: str, q: int = 2, frob_q: int | None = None) -> "TwistedPoly":
        s = s.strip()
        mq = re.match(r"q=(\d+):", s)
        if mq:
            q = int(mq.group(1))
            s = s[mq.end():]
        F = field(q)
        zero = FracK.zero(F)
        coeffs: dict[int, Matrix] = {}
        m = None
        for body, exp in re.findall(r"\[((?:[^\[\]]|\[[^\[\]]*(?:\[[^\[\]]*\][^\[\]]*)*\])*)\]\s*τ\^(\d+)", s):
            rows = [r.split() for r in body.split(";")]
            M = mat([[_parse_entry(F, e) for e in r] for r in rows])
            m = len(M)
            k = int(exp)
            coeffs[k] = mat_add(coeffs[k], M) if k in coeffs else M
        if m is None:
            raise ValueError(f"no terms in twisted polynomial text: {s!r}")
        top = max(coeffs)
        Z = mat_zero(m, zero)
        return cls([coeffs.get(i, Z) for i in range(top + 1)], frob_q or q, zero, m)

    def __repr__(self):
        return f"TwistedPoly({self})"

    def __str__(self):
        terms = []
        for i, M in enumerate(self.coeffs):
            if mat_is_zero(M):
                continue
            if self.m == 1:
                c = str(M[0][0])
                c = f"({c})" if "+" in c else c
            else:
                c = "[" + "; ".join(", ".join(str(x) for x in r) for r in M) + "]"
            mon = "" if i == 0 else ("τ" if i == 1 else f"τ^{i}")
            if mon and c == "1":
                terms.append(mon)
            else:
                terms.append(c + mon)
        return " + ".join(terms) if terms else "0"


def _approx_zero_lead(M: Matrix) -> bool:
    for r in M:
        for x in r:
            prec = getattr(x, "prec", None)
            if prec is not None and x.is_zero():
                return True
    return False


def _entry_text(x) -> str:
    if isinstance(x, PolyA):
        return _coeff_list_text(x.F, x.c)
    if isinstance(x, FracK):
        num = _coeff_list_text(x.F, x.num.c)
        return num if x.den.is_one() else f"{num}/{_coeff_list_text(x.F, x.den.c)}"
    raise TypeError(f"no text form for {type(x).__name__} coefficients")


def _parse_entry(F, e: str) -> FracK:
    num, slash, den = e.partition("/")
    n = PolyA(_parse_coeff_list(F, num), F)
    d = PolyA(_parse_coeff_list(F, den), F) if slash else PolyA.one(F)
    return FracK(n, d)


# ------------------------------------------------------- symbolic evaluation

@dataclass(frozen=True)
class QLinearForm:
    """sum c_(v,k) X_v^(q^k): the general value of an additive map on indeterminates."""

    terms: tuple  # ((var, k, coeff), ...) sorted by (var, k)

    @staticmethod
    def variable(v: int, one) -> "QLinearForm":
        return QLinearForm(((v, 0, one),))

    @staticmethod
    def _norm(d: dict) -> "QLinearForm":
        return QLinearForm(tuple((v, k, c) for (v, k), c in sorted(d.items()) if not is_zero(c)))

    def _dict(self) -> dict:
        return {(v, k): c for v, k, c in self.terms}

    def __add__(self, other: "QLinearForm") -> "QLinearForm":
        d = self._dict()
        for v, k, c in other.terms:
            d[(v, k)] = d[(v, k)] + c if (v, k) in d else c
        return QLinearForm._norm(d)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return QLinearForm(tuple((v, k, -c) for v, k, c in self.terms))

    def __mul__(self, c) -> "QLinearForm":
        if isinstance(c, QLinearForm):
            raise TypeError("q-linear forms only multiply by scalars")
        return QLinearForm._norm({(v, k): x * c for v, k, x in self.terms})

    __rmul__ = __mul__

    def frob(self, n: int = 1) -> "QLinearForm":
        return QLinearForm(tuple((v, k + n, c.frob(n)) for v, k, c in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def one_like(self):
        raise TypeError("q-linear forms have no unit")


def symbolic_eval(P: TwistedPoly, zero) -> tuple[QLinearForm, ...]:
    """P applied to indeterminates X_1..X_m."""
    one = _one_from_zero(zero)
    xs = tuple(QLinearForm.variable(v, one) for v in range(P.m))
    out = []
    for row in range(P.m):
        acc = QLinearForm(())
        for i, A in enumerate(P.coeffs):
            for j in range(P.m):
                if not is_zero(A[row][j]):
                    acc = acc + xs[j].frob(i) * A[row][j]
        out.append(acc)
    return tuple(out)


def substitute_forms(P: TwistedPoly, forms: tuple[QLinearForm, ...]) -> tuple[QLinearForm, ...]:
    """P evaluated on a vector of q-linear forms."""
    out = []
    for row in range(P.m):
        acc = QLinearForm(())
        for i, A in enumerate(P.coeffs):
            for j in range(P.m):
                if not is_zero(A[row][j]):
                    acc = acc + forms[j].frob(i) * A[row][j]
        out.append(acc)
    return tuple(out)

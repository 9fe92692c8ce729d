"""Exponential and logarithm of a T-module as twisted power series.

The exponential e(z) = sum B_i z^(q^i) is solved from e(dPhi(T) z) =
Phi(T)(e(z)); the logarithm from log(Phi(T) w) = dPhi(T) log(w).  Evaluation
adds a certified bound on the discarded tail.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .algebra_core import FracK, PolyA
from .laurent import Laurent
from .ore import (mat_add, mat_frob, mat_identity, mat_is_zero, mat_mul, mat_neg, mat_scalar,
                  mat_sub, mat_zero)
from .series import is_zero
from .tmodule import TModule


class TailNotCertifiable(ArithmeticError):
    pass


class OutsideCertifiedDomain(TailNotCertifiable):
    """No truncation order can certify the tail at this point."""


@dataclass
class TwistedSeries:
    """sum C_i z^(q^i) with C_0 = I, stored through index len(coeffs) - 1."""

    M: TModule
    coeffs: list
    kind: str = "exp"

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        return self.coeffs[i]

    def dump(self) -> list[dict]:
        """(i, C_i) pairs with entries in the FracK text format."""
        return [{"i": i, "coeff": [[x.to_text() for x in row] for row in C]}
                for i, C in enumerate(self.coeffs)]


def _one(M: TModule):
    return FracK.one(M.F)


def _T_pow(M: TModule, e: int) -> FracK:
    return FracK(PolyA.T(M.F, e))


def _mat_div_scalar(A, c):
    inv = c.inv()
    return tuple(tuple(x * inv for x in r) for r in A)


def _check_module(M: TModule):
    N = M.nilpotent_part()
    for r in N:
        for x in r:
            if not x.is_zero() and not (x.num.deg() <= 0 and x.den.deg() == 0):
                raise ValueError("nilpotent part must have constant entries")


def exp_coeffs(M: TModule, I_max: int) -> TwistedSeries:
    """B_i from B_i (T^(q^i) I + N) - (T I + N) B_i = sum_{j>=1} a_j B_(i-j)^(q^j)."""
    _check_module(M)
    m, q, z = M.m, M.q, M.zero
    N = M.nilpotent_part()
    B = [mat_identity(m, z, _one(M))]
    T = _T_pow(M, 1)
    for i in range(1, I_max + 1):
        R = mat_zero(m, z)
        for j in range(1, min(i, M.dtilde) + 1):
            a = M.coefficient(j)
            if mat_is_zero(a):
                continue
            R = mat_add(R, mat_mul(a, mat_frob(B[i - j], j)))
        c = _T_pow(M, q**i) - T
        Ni = mat_frob(N, i)
        X = _mat_div_scalar(R, c)
        for _ in range(2 * m):
            nxt = _mat_div_scalar(mat_add(R, mat_sub(mat_mul(N, X), mat_mul(X, Ni))), c)
            if mat_is_zero(mat_sub(nxt, X)):
                break
            X = nxt
        else:
            raise ArithmeticError("nilpotent correction did not stabilize")
        B.append(X)
    return TwistedSeries(M, B, "exp")


def log_coeffs(M: TModule, I_max: int, exp: TwistedSeries | None = None) -> TwistedSeries:
    """A_s = -sum_{i<s} A_i B_(s-i)^(q^i): the compositional inverse of exp."""
    if exp is None or exp.order < I_max:
        exp = exp_coeffs(M, I_max)
    m, z = M.m, M.zero
    A = [mat_identity(m, z, _one(M))]
    for s in range(1, I_max + 1):
        acc = mat_zero(m, z)
        for i in range(s):
            acc = mat_add(acc, mat_mul(A[i], mat_frob(exp[s - i], i)))
        A.append(mat_neg(acc))
    return TwistedSeries(M, A, "log")


def compose_series(f: TwistedSeries, g: TwistedSeries, I: int | None = None) -> list:
    """Coefficients of f o g: (f o g)_s = sum_{i+j=s} f_i g_j^(q^i)."""
    I = min(f.order, g.order) if I is None else I
    z = f.M.zero
    out = []
    for s in range(I + 1):
        acc = mat_zero(f.M.m, z)
        for i in range(s + 1):
            acc = mat_add(acc, mat_mul(f[i], mat_frob(g[s - i], i)))
        out.append(acc)
    return out


def functional_equation_defects(exp: TwistedSeries) -> list:
    """sum_j a_j B_(i-j)^(q^j) - B_i dPhi(T)^(q^i) for each stored i; all zero when solved."""
    M = exp.M
    out = []
    for i in range(exp.order + 1):
        acc = mat_zero(M.m, M.zero)
        for j in range(min(i, M.dtilde) + 1):
            acc = mat_add(acc, mat_mul(M.coefficient(j), mat_frob(exp[i - j], j)))
        out.append(mat_sub(acc, mat_mul(exp[i], mat_frob(M.differential(), i))))
    return out


# ------------------------------------------------------------- closed forms

def carlitz_D(i: int, F) -> PolyA:
    """D_0 = 1, D_i = (T^(q^i) - T) D_(i-1)^q."""
    q = F.q
    D = PolyA.one(F)
    T = PolyA.T(F)
    for k in range(1, i + 1):
        D = (PolyA.T(F, q**k) - T) * D**q
    return D


def carlitz_L(i: int, F) -> PolyA:
    """L_i = prod_{j=1..i} (T - T^(q^j))."""
    L = PolyA.one(F)
    T = PolyA.T(F)
    for j in range(1, i + 1):
        L = L * (T - PolyA.T(F, F.q**j))
    return L


# ----------------------------------------------------------- certification

def _log_norm(x) -> Fraction | None:
    """log_q |x| for Laurent or extension elements; None for zero."""
    if isinstance(x, Laurent):
        return None if x.is_zero() else Fraction(-x.v)
    coords = getattr(x, "coords", None)
    if coords is not None:
        vals = [c.v for c in coords if not c.is_zero()]
        return None if not vals else Fraction(-min(vals))
    if isinstance(x, FracK):
        return None if x.is_zero() else Fraction(-x.valuation())
    raise TypeError(f"no absolute value for {type(x).__name__}")


def _mat_log_norm(A) -> Fraction | None:
    vals = [_log_norm(x) for r in A for x in r if not x.is_zero()]
    return max(vals) if vals else None


@dataclass
class TailCertificate:
    terms: int
    window_max: Fraction
    log_norm_z: Fraction
    tail_valuation: Fraction  # |tail| <= q^(-tail_valuation)
    kind: str

    def to_json(self) -> dict:
        return {"terms": self.terms, "window_max": str(self.window_max),
                "log_norm_z": str(self.log_norm_z), "tail_valuation": str(self.tail_valuation),
                "kind": self.kind}


def _coeff_logs(M: TModule) -> dict[int, Fraction]:
    out = {}
    for j in range(1, M.dtilde + 1):
        v = _mat_log_norm(M.coefficient(j))
        if v is not None:
            out[j] = v
    return out


def exp_tail_certificate(series: TwistedSeries, S: int, ell: Fraction) -> TailCertificate:
    """Bound sum_{s>S} |B_s| |z|^(q^s) using |B_s| <= max_j |a_j| |B_(s-j)|^(q^j) / q^(q^s)."""
    M, q = series.M, series.M.q
    aj = _coeff_logs(M)
    A = max(aj.values(), default=Fraction(0))
    if q ** (S + 1) < A:
        raise TailNotCertifiable("tail not certifiable at this truncation: too few terms")
    lo = max(0, S - M.dtilde + 1)
    gam = []
    for s in range(lo, S + 1):
        b = _mat_log_norm(series[s])
        if b is not None:
            gam.append(b / q**s)
    W = max(gam) if gam else Fraction(-10**9)
    if W + ell >= 0:
        raise TailNotCertifiable("tail not certifiable at this truncation: |z| too large for the window bound")
    return TailCertificate(S, W, ell, -(q ** (S + 1)) * (W + ell), "exp")


def log_tail_certificate(series: TwistedSeries, S: int, ell: Fraction) -> TailCertificate:
    """Bound for the log tail using |A_s| <= max_j |A_(s-j)| |a_j|^(q^(s-j)) / q^(q^s)."""
    M, q = series.M, series.M.q
    aj = _coeff_logs(M)
    lo = max(0, S - M.dtilde + 1)
    dl = []
    for s in range(lo, S + 1):
        b = _mat_log_norm(series[s])
        if b is not None:
            dl.append(b / q**s)
    fixed = max((-Fraction(q**j - Aj, q**j - 1) for j, Aj in aj.items()), default=Fraction(-10**9))
    if fixed + ell >= 0:
        raise OutsideCertifiedDomain("tail not certifiable: point outside the log domain")
    G = max(max(dl) if dl else Fraction(-10**9), fixed)
    if G + ell >= 0:
        raise TailNotCertifiable("tail not certifiable at this truncation: point outside the log domain")
    return TailCertificate(S, G, ell, -(q ** (S + 1)) * (G + ell), "log")


# --------------------------------------------------------------- evaluation

def _vector_log_norm(z) -> Fraction | None:
    vals = [v for v in (_log_norm(x) for x in z) if v is not None]
    return max(vals) if vals else None


def _apply(C, z, prec_abs: int):
    """C z for a FracK matrix C and a vector of Laurent / extension elements."""
    out = []
    for row in C:
        acc = None
        for c, x in zip(row, z):
            if c.is_zero():
                continue
            lc = Laurent.from_frac(c, prec_abs)
            t = x * lc
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else z[0] * 0)
    return out


def _evaluate(series: TwistedSeries, z, prec: int, certify, extend, max_terms: int):
    z = list(z)
    ell = _vector_log_norm(z)
    if ell is None:
        return [x * 0 for x in z], None
    q = series.M.q
    cert = None
    S = 0
    while True:
        if S > series.order:
            if not extend:
                break
            series = extend(S)
        try:
            cert = certify(series, S, ell)
            if cert.tail_valuation >= prec:
                break
        except OutsideCertifiedDomain:
            raise
        except TailNotCertifiable:
            cert = None
        S += 1
        if S > max_terms:
            break
    if cert is None or cert.tail_valuation < prec:
        raise TailNotCertifiable(f"tail not certifiable at this truncation ({S} terms, precision {prec})")
    acc = None
    zp = z
    for s in range(cert.terms + 1):
        if s:
            zp = [x.frob(1) for x in zp]
        C = series[s]
        need = prec + max(0, ceil(ell * q**s)) + 2
        t = _apply(C, zp, need)
        acc = t if acc is None else [a + b for a, b in zip(acc, t)]
    tail = int(cert.tail_valuation) if cert.tail_valuation.denominator == 1 else ceil(cert.tail_valuation)
    acc = [a.truncate(min(prec, tail)) if isinstance(a, Laurent) else a for a in acc]
    return acc, cert


def exp_eval(series: TwistedSeries, z, prec: int = 64, max_terms: int = 12):
    """(e(z), certificate), e(z) known modulo (1/T)^prec."""
    M = series.M
    cache = {"s": series}

    def extend(S):
        cache["s"] = exp_coeffs(M, max(S, cache["s"].order + 2))
        return cache["s"]

    return _evaluate(series, z, prec, exp_tail_certificate, extend, max_terms)


def log_eval(series: TwistedSeries, w, prec: int = 64, max_terms: int = 12):
    """(log(w), certificate) for w inside the certified log domain."""
    M = series.M
    cache = {"s": series}

    def extend(S):
        cache["s"] = log_coeffs(M, max(S, cache["s"].order + 2))
        return cache["s"]

    return _evaluate(series, w, prec, log_tail_certificate, extend, max_terms)


@dataclass
class Period:
    xi: Laurent
    certificate: TailCertificate
    normalization: str = "xi = T * log_C(T)"


def carlitz_period(q: int = 2, prec: int = 64, M: TModule | None = None) -> Period:
    """The generator xi = T log_C(T) of the Carlitz period lattice (q = 2)."""
    from .tmodule import carlitz

    if q != 2:
        raise ValueError("the period generator lies in k_inf only for q = 2")
    M = M or carlitz(2)
    L = log_coeffs(M, 4)
    T = Laurent.T(M.F)
    (lg,), cert = log_eval(L, [T], prec + 1)
    xi = (T * lg).truncate(prec)
    return Period(xi, cert)


def carlitz_torsion_consistency(a: PolyA, prec: int = 64, min_digits: int = 40) -> dict:
    """Map Lie-side torsion b/a through z -> e(xi z) and match module-side roots (q = 2)."""
    from .tmodule import carlitz, torsion_lie_side, torsion_module_side

    M = carlitz(2)
    lie = torsion_lie_side(a, 1)
    mod = torsion_module_side(a, M, prec=prec)
    period = carlitz_period(2, prec + 8, M)
    E = exp_coeffs(M, 6)
    images, matches, digits = [], [], []
    for (z,) in lie.tuples:
        if z.is_zero():
            w = Laurent.zero(M.F)
        else:
            w = period.xi * Laurent.from_frac(z, prec + 8)
            (w,), _ = exp_eval(E, [w], prec)
        images.append(w)
        best, best_i = None, None
        for i, (x,) in enumerate(mod.points):
            ag = w.agreement(x)
            ag = prec if ag is None else min(ag, prec)
            if best is None or ag > best:
                best, best_i = ag, i
        matches.append(best_i)
        digits.append(best)
    bijective = sorted(matches) == list(range(len(mod.points)))
    certified = min(prec if d is None else d for d in mod.certified_digits)
    ok = (len(lie) == len(mod) == a.F.q ** a.deg() and bijective
          and min(digits) >= min_digits and certified >= min_digits)
    return {"a": str(a), "lie_size": len(lie), "module_size": len(mod), "bijective": bijective,
            "min_agreement_digits": min(digits), "module_certified_digits": certified,
            "required_digits": min_digits, "pass": ok}

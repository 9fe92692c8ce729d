"""Pure-Python dense polynomial kernels over F_p and table-driven F_q.

Coefficient sequences are low-to-high lists of small ints. Results are lists
with trailing zeros stripped. The compiled module ``_ckernels`` exposes the
same four functions with the same signatures.
"""
from __future__ import annotations


def _strip(r: list) -> list:
    while r and not r[-1]:
        r.pop()
    return r


def _bits(a) -> int:
    return int("".join("1" if x else "0" for x in reversed(a)) or "0", 2)


def _unbits(x: int, n: int) -> list:
    s = bin(x)[:1:-1]
    if n >= 0:
        s = s[:n]
    return [1 if ch == "1" else 0 for ch in s]


def conv_p(a, b, p: int, n: int = -1) -> list:
    """Product of two coefficient lists mod p, keeping the first n terms if n >= 0."""
    if not a or not b:
        return []
    if p == 2:
        # carryless multiply on Python ints
        x, y = _bits(a), _bits(b)
        if len(a) < len(b):
            x, y = y, x
        r = 0
        while y:
            low = y & -y
            r ^= x << (low.bit_length() - 1)
            y ^= low
        return _strip(_unbits(r, n))
    la, lb = len(a), len(b)
    size = la + lb - 1
    if 0 <= n < size:
        size = n
    res = [0] * size
    for i, x in enumerate(a):
        if not x or i >= size:
            continue
        top = min(lb, size - i)
        for j in range(top):
            y = b[j]
            if y:
                res[i + j] += x * y
    return _strip([v % p for v in res])


def conv_tab(a, b, add, mul, q: int, n: int = -1) -> list:
    """Product over F_q using flat add/mul tables indexed by x*q + y."""
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    size = la + lb - 1
    if 0 <= n < size:
        size = n
    res = [0] * size
    for i, x in enumerate(a):
        if not x or i >= size:
            continue
        row = x * q
        top = min(lb, size - i)
        for j in range(top):
            y = b[j]
            if y:
                k = i + j
                res[k] = add[res[k] * q + mul[row + y]]
    return _strip(res)


def divmod_p(a, b, p: int):
    """Euclidean division of coefficient lists mod p; b must be nonzero."""
    r = [x % p for x in a]
    _strip(r)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv = pow(b[-1], p - 2, p)
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv % p
        if c:
            qt[k] = c
            for j in range(db + 1):
                if b[j]:
                    r[k + j] = (r[k + j] - c * b[j]) % p
    return _strip(qt), _strip(r[:db])


def divmod_tab(a, b, add, mul, neg, inv, q: int):
    """Euclidean division over F_q with flat tables."""
    r = list(a)
    _strip(r)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    lead_inv = inv[b[-1]]
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = mul[r[k + db] * q + lead_inv]
        if c:
            qt[k] = c
            nc = neg[c] * q
            for j in range(db + 1):
                if b[j]:
                    r[k + j] = add[r[k + j] * q + mul[nc + b[j]]]
    return _strip(qt), _strip(r[:db])

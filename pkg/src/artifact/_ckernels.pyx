# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense polynomial kernels; drop-in replacement for _pykernels."""
from libc.stdlib cimport malloc, free


cdef list _strip(list r):
    while r and not r[len(r) - 1]:
        r.pop()
    return r


def conv_p(a, b, int p, Py_ssize_t n=-1):
    cdef Py_ssize_t la = len(a), lb = len(b), size, i, j, top
    if la == 0 or lb == 0:
        return []
    size = la + lb - 1
    if 0 <= n < size:
        size = n
    cdef long long *res = <long long *> malloc(size * sizeof(long long))
    cdef long long *bb = <long long *> malloc(lb * sizeof(long long))
    cdef long long x
    cdef long long bound = (1LL << 62) // ((p - 1) * (p - 1) + 1)
    cdef long long cnt = 0
    try:
        for i in range(size):
            res[i] = 0
        for j in range(lb):
            bb[j] = b[j]
        for i in range(min(la, size)):
            x = a[i]
            if x == 0:
                continue
            top = lb if lb < size - i else size - i
            for j in range(top):
                res[i + j] += x * bb[j]
            cnt += 1
            if cnt >= bound:
                for j in range(size):
                    res[j] %= p
                cnt = 0
        out = [int(res[i] % p) for i in range(size)]
    finally:
        free(res)
        free(bb)
    return _strip(out)


def conv_tab(a, b, add, mul, int q, Py_ssize_t n=-1):
    cdef Py_ssize_t la = len(a), lb = len(b), size, i, j, top, k
    if la == 0 or lb == 0:
        return []
    size = la + lb - 1
    if 0 <= n < size:
        size = n
    cdef int *res = <int *> malloc(size * sizeof(int))
    cdef int *bb = <int *> malloc(lb * sizeof(int))
    cdef int *ad = <int *> malloc(q * q * sizeof(int))
    cdef int *mu = <int *> malloc(q * q * sizeof(int))
    cdef int x, y, row
    try:
        for i in range(q * q):
            ad[i] = add[i]
            mu[i] = mul[i]
        for i in range(size):
            res[i] = 0
        for j in range(lb):
            bb[j] = b[j]
        for i in range(min(la, size)):
            x = a[i]
            if x == 0:
                continue
            row = x * q
            top = lb if lb < size - i else size - i
            for j in range(top):
                y = bb[j]
                if y:
                    k = i + j
                    res[k] = ad[res[k] * q + mu[row + y]]
        out = [res[i] for i in range(size)]
    finally:
        free(res)
        free(bb)
        free(ad)
        free(mu)
    return _strip(out)


def divmod_p(a, b, int p):
    cdef Py_ssize_t la = len(a), db = len(b) - 1, k, j, lr
    cdef long long *r = <long long *> malloc((la + 1) * sizeof(long long))
    cdef long long *bb = <long long *> malloc((db + 1) * sizeof(long long))
    cdef long long c, inv
    try:
        for k in range(la):
            r[k] = (<long long> a[k]) % p
            if r[k] < 0:
                r[k] += p
        lr = la
        while lr > 0 and r[lr - 1] == 0:
            lr -= 1
        if lr - 1 < db:
            return [], [int(r[k]) for k in range(lr)]
        for j in range(db + 1):
            bb[j] = b[j]
        inv = pow(int(bb[db]), p - 2, p)
        qt = [0] * (lr - db)
        for k in range(lr - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            if c:
                qt[k] = int(c)
                for j in range(db + 1):
                    if bb[j]:
                        r[k + j] = (r[k + j] - c * bb[j]) % p
                        if r[k + j] < 0:
                            r[k + j] += p
        rem = [int(r[k]) for k in range(db)]
    finally:
        free(r)
        free(bb)
    return _strip(qt), _strip(rem)


def divmod_tab(a, b, add, mul, neg, inv, int q):
    r = list(a)
    _strip(r)
    cdef Py_ssize_t db = len(b) - 1, k, j
    if len(r) - 1 < db:
        return [], r
    cdef int lead_inv = inv[b[db]]
    cdef int c, nc
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

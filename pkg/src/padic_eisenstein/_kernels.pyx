# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular kernels; see ``_fallback.py`` for the reference versions.

Every modulus must be below 2**31 so that a product of two residues fits in
an unsigned 64-bit accumulator.
"""

from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64

MAX_MODULUS = 2**31


cdef u64* _load(list xs, Py_ssize_t n, u64 mod) except NULL:
    cdef u64* buf = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef Py_ssize_t m = len(xs)
    for i in range(n):
        buf[i] = <u64> ((xs[i] % mod) if i < m else 0)
    return buf


cdef list _dump(u64* buf, Py_ssize_t n):
    cdef Py_ssize_t i
    return [<object> buf[i] for i in range(n)]


def mul_trunc(list a, list b, Py_ssize_t n, object mod):
    cdef u64 m = <u64> mod
    cdef Py_ssize_t la = min(len(a), n), lb = min(len(b), n)
    cdef u64* pa = _load(a, la, m)
    cdef u64* pb = _load(b, lb, m)
    cdef u64* out = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef Py_ssize_t i, j, jmax
    cdef u64 ai, acc
    try:
        for i in range(n):
            out[i] = 0
        for i in range(la):
            ai = pa[i]
            if ai == 0:
                continue
            jmax = min(lb, n - i)
            for j in range(jmax):
                acc = out[i + j] + (ai * pb[j]) % m
                out[i + j] = acc - m if acc >= m else acc
        return _dump(out, n)
    finally:
        free(pa)
        free(pb)
        free(out)


def inv_trunc(list a, Py_ssize_t n, object mod, object inv_a0):
    cdef u64 m = <u64> mod
    cdef u64 c = <u64> (inv_a0 % mod)
    cdef Py_ssize_t la = min(len(a), n)
    cdef u64* pa = _load(a, la, m)
    cdef u64* out = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef Py_ssize_t i, j, jmax
    cdef u64 s
    try:
        if n == 0:
            return []
        out[0] = c
        for i in range(1, n):
            s = 0
            jmax = min(i, la - 1)
            for j in range(1, jmax + 1):
                s = (s + (pa[j] * out[i - j]) % m) % m
            out[i] = ((m - s) % m) * c % m
        return _dump(out, n)
    finally:
        free(pa)
        free(out)


def pascal_apply(list vec, object mod):
    cdef u64 m = <u64> mod
    cdef Py_ssize_t n = len(vec)
    cdef u64* pv = _load(vec, n, m)
    cdef u64* row = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef u64* out = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef Py_ssize_t a, j
    cdef u64 va
    try:
        for j in range(n):
            row[j] = 0
            out[j] = 0
        if n:
            row[0] = 1 % m
        for a in range(n):
            if a:
                for j in range(a, 0, -1):
                    row[j] = (row[j] + row[j - 1]) % m
            va = pv[a]
            if va:
                for j in range(a + 1):
                    out[j] = (out[j] + (va * row[j]) % m) % m
        return _dump(out, n)
    finally:
        free(pv)
        free(row)
        free(out)


def pascal_inverse_apply(list vec, object mod):
    cdef u64 m = <u64> mod
    cdef Py_ssize_t n = len(vec)
    cdef u64* pv = _load(vec, n, m)
    cdef u64* row = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef u64* out = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef Py_ssize_t a, j
    cdef u64 vj, term
    try:
        for j in range(n):
            row[j] = 0
            out[j] = 0
        if n:
            row[0] = 1 % m
        for j in range(n):
            if j:
                for a in range(j, 0, -1):
                    row[a] = (row[a] + row[a - 1]) % m
            vj = pv[j]
            if vj:
                for a in range(j + 1):
                    term = (vj * row[a]) % m
                    if (a + j) & 1:
                        out[a] = (out[a] + m - term) % m
                    else:
                        out[a] = (out[a] + term) % m
        return _dump(out, n)
    finally:
        free(pv)
        free(row)
        free(out)


def forward_differences(list values, object mod):
    cdef u64 m = <u64> mod
    cdef Py_ssize_t n = len(values)
    cdef u64* work = _load(values, n, m)
    cdef Py_ssize_t i, length
    cdef list out = []
    try:
        length = n
        while length > 0:
            out.append(<object> work[0])
            for i in range(length - 1):
                work[i] = (work[i + 1] + m - work[i]) % m
            length -= 1
        return out
    finally:
        free(work)


def theta_values(list a, Py_ssize_t jmax, object mod):
    cdef u64 m = <u64> mod
    cdef Py_ssize_t n = len(a)
    cdef u64* pa = _load(a, n, m)
    cdef u64* row = <u64*> malloc((jmax + 2) * sizeof(u64))
    cdef Py_ssize_t i, j, imax
    cdef u64 s, prev, cur
    cdef list out = []
    try:
        for i in range(jmax + 2):
            row[i] = 0
        row[0] = 1 % m
        for j in range(jmax + 1):
            s = 0
            imax = min(j, n - 1)
            for i in range(imax + 1):
                if row[i]:
                    s = (s + (row[i] * pa[i]) % m) % m
            out.append(<object> s)
            # in-place update, descending so row[i-1] is still the old value
            for i in range(j + 1, 0, -1):
                row[i] = ((<u64> i) * ((row[i] + row[i - 1]) % m)) % m
            row[0] = 0
        return out
    finally:
        free(pa)
        free(row)

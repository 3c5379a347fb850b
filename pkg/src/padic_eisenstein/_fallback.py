"""Pure-Python versions of the modular kernels in ``_kernels.pyx``.

All functions take and return lists of ints reduced mod ``mod``.
"""

from __future__ import annotations


def mul_trunc(a: list[int], b: list[int], n: int, mod: int) -> list[int]:
    out = [0] * n
    lb = len(b)
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j in range(min(lb, n - i)):
            out[i + j] += ai * b[j]
    return [c % mod for c in out]


def inv_trunc(a: list[int], n: int, mod: int, inv_a0: int) -> list[int]:
    out = [0] * n
    if n == 0:
        return out
    out[0] = inv_a0 % mod
    la = len(a)
    for i in range(1, n):
        s = 0
        for j in range(1, min(i, la - 1) + 1):
            s += a[j] * out[i - j]
        out[i] = (-s * inv_a0) % mod
    return out


def pascal_apply(vec: list[int], mod: int) -> list[int]:
    """out[j] = sum_a vec[a] * C(a, j)."""
    n = len(vec)
    out = [0] * n
    row = [1] + [0] * (n - 1)
    for a in range(n):
        if a:
            for j in range(a, 0, -1):
                row[j] = (row[j] + row[j - 1]) % mod
        va = vec[a]
        if va:
            for j in range(a + 1):
                out[j] += va * row[j]
    return [c % mod for c in out]


def pascal_inverse_apply(vec: list[int], mod: int) -> list[int]:
    """out[a] = sum_j (-1)^(a+j) C(j, a) vec[j]; inverse of :func:`pascal_apply`."""
    n = len(vec)
    out = [0] * n
    row = [1] + [0] * (n - 1)
    for j in range(n):
        if j:
            for a in range(j, 0, -1):
                row[a] = (row[a] + row[a - 1]) % mod
        vj = vec[j]
        if vj:
            for a in range(j + 1):
                if (a + j) & 1:
                    out[a] -= vj * row[a]
                else:
                    out[a] += vj * row[a]
    return [c % mod for c in out]


def forward_differences(values: list[int], mod: int) -> list[int]:
    """Delta^n f(0) for n < len(values)."""
    work = [v % mod for v in values]
    out = []
    while work:
        out.append(work[0])
        work = [(work[i + 1] - work[i]) % mod for i in range(len(work) - 1)]
    return out


def theta_values(a: list[int], jmax: int, mod: int) -> list[int]:
    """((1+t) d/dt)^j f |_{t=0} for j <= jmax, f = sum a_i t^i.

    Uses ((1+t)d/dt)^j t^i |_{t=0} = i! S(j, i).
    """
    n = len(a)
    # row[i] holds i! S(j, i); recurrence i! S(j+1, i) = i*(i! S(j,i)) + i*((i-1)! S(j, i-1))
    row = [0] * (jmax + 2)
    row[0] = 1
    out = []
    for j in range(jmax + 1):
        s = 0
        for i in range(min(j, n - 1) + 1):
            if row[i]:
                s += row[i] * a[i]
        out.append(s % mod)
        new = [0] * (jmax + 2)
        for i in range(1, j + 2):
            new[i] = (i * (row[i] + row[i - 1])) % mod
        row = new
    return out

"""Smith normal form over the integers, with unimodular transforms.

Works on Python ints throughout so that large entries never overflow.
"""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return ``(D, U, V, Uinv)`` with ``U A V = D`` diagonal.

    ``U`` and ``V`` are unimodular, ``Uinv`` is the exact inverse of ``U``.
    Diagonal entries are nonnegative and each divides the next.  A matrix
    that is already diagonal with that divisibility is returned untouched
    (``U = V = I``).
    """
    A = [[int(a) for a in row] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U, Uinv, V = _identity(m), _identity(m), _identity(n)

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for row in Uinv:
            row[i], row[k] = row[k], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for row in Uinv:
            row[src] -= q * row[dst]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_col(dst, src, q):
        if q == 0:
            return
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                add_row(i, t, -(A[i][t] // p))
                clean &= A[i][t] == 0
            for j in range(t + 1, n):
                add_col(j, t, -(A[t][j] // p))
                clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for row in Uinv:
                row[t] = -row[t]
    return A, U, V, Uinv

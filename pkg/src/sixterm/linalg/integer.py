"""Exact linear algebra over the integers.

Everything here runs on Python ints, so intermediate growth never wraps.
Matrices come in as anything ``numpy.asarray`` understands and go out as
``numpy`` object arrays unless noted otherwise.
"""

from __future__ import annotations

import numpy as np

INT64_MAX = 2**63 - 1


def _rows(A):
    A = np.asarray(A, dtype=object)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return [[int(x) for x in row] for row in A], A.shape[1]


def as_int64(A):
    """Convert to int64, refusing values that do not fit."""
    A = np.asarray(A, dtype=object)
    if A.size and max(abs(int(x)) for x in A.flat) > INT64_MAX:
        raise OverflowError("integer entry does not fit in int64")
    return A.astype(np.int64)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _to_array(M, ncols):
    if not M:
        return np.zeros((0, ncols), dtype=object)
    out = np.empty((len(M), ncols), dtype=object)
    for i, row in enumerate(M):
        out[i, :] = row
    return out


def hnf(A):
    """Row-style Hermite normal form.

    Returns ``(H, T, pivots)`` with ``T @ A == H``, ``T`` unimodular, ``H``
    upper echelon with positive pivots and entries above each pivot reduced
    into ``[0, pivot)``.  Zero rows of ``H`` sit at the bottom.
    """
    M, c = _rows(A)
    r = len(M)
    T = _identity(r)
    pivots = []
    prow = 0
    for col in range(c):
        if prow == r:
            break
        while True:
            nz = [i for i in range(prow, r) if M[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(M[i][col]), i))
            if len(nz) == 1:
                break
            a = M[i0][col]
            for i in nz:
                if i == i0:
                    continue
                q = M[i][col] // a
                if q:
                    Mi, M0 = M[i], M[i0]
                    for j in range(col, c):
                        Mi[j] -= q * M0[j]
                    Ti, T0 = T[i], T[i0]
                    for j in range(r):
                        Ti[j] -= q * T0[j]
        nz = [i for i in range(prow, r) if M[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        M[prow], M[i0] = M[i0], M[prow]
        T[prow], T[i0] = T[i0], T[prow]
        if M[prow][col] < 0:
            M[prow] = [-x for x in M[prow]]
            T[prow] = [-x for x in T[prow]]
        p = M[prow][col]
        for i in range(prow):
            q = M[i][col] // p
            if q:
                for j in range(col, c):
                    M[i][j] -= q * M[prow][j]
                for j in range(r):
                    T[i][j] -= q * T[prow][j]
        pivots.append(col)
        prow += 1
    return _to_array(M, c), _to_array(T, r), pivots


def row_lattice(A):
    """Canonical basis (HNF rows, zero rows dropped) of the row lattice of A."""
    A = np.asarray(A, dtype=object)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=object)
    H, _, piv = hnf(A)
    return H[: len(piv)]


def kernel(A):
    """Columns spanning ``{x : A x = 0}`` over Z, as a canonical HNF basis."""
    A = np.asarray(A, dtype=object)
    n = A.shape[1]
    if A.shape[0] == 0:
        return _to_array(_identity(n), n).T.copy()
    H, T, piv = hnf(A.T)
    K = T[len(piv):]
    if K.shape[0] == 0:
        return np.zeros((n, 0), dtype=object)
    return row_lattice(K).T.copy()


def image(A):
    """Columns forming a canonical Z-basis of the column lattice of A."""
    A = np.asarray(A, dtype=object)
    return row_lattice(A.T).T.copy()


def _reduce_against(H, piv, v):
    """Express v in the row lattice of echelon H: returns (coeffs, remainder)."""
    v = [int(x) for x in v]
    coeffs = [0] * len(piv)
    for k, col in enumerate(piv):
        p = int(H[k, col])
        q = v[col] // p
        if q:
            coeffs[k] = q
            row = H[k]
            for j in range(col, len(v)):
                v[j] -= q * int(row[j])
    return coeffs, v


def solve(A, b):
    """Some integer x with ``A @ x == b``, or None.

    The returned solution is reduced against the kernel lattice, so it is a
    deterministic function of (A, b).
    """
    A = np.asarray(A, dtype=object)
    b = [int(x) for x in np.asarray(b, dtype=object).ravel()]
    m, n = A.shape
    if len(b) != m:
        raise ValueError("right-hand side has wrong length")
    if n == 0:
        return np.zeros(0, dtype=object) if not any(b) else None
    H, T, piv = hnf(A.T)
    coeffs, rem = _reduce_against(H, piv, b)
    if any(rem):
        return None
    x = [0] * n
    for k, q in enumerate(coeffs):
        if q:
            for j in range(n):
                x[j] += q * int(T[k, j])
    K = T[len(piv):]
    if K.shape[0]:
        HK = row_lattice(K)
        pk = [int(np.flatnonzero(row)[0]) for row in HK]
        _, x = _reduce_against(HK, pk, x)
    return np.array(x, dtype=object)


def in_lattice(B, v):
    """Does v lie in the lattice spanned by the columns of B?"""
    return solve(B, v) is not None


def snf(A):
    """Smith normal form ``A = U @ S @ V`` with U, V unimodular.

    ``S`` is diagonal (same shape as A) with non-negative entries and
    ``S[0,0] | S[1,1] | ...``.
    """
    S, c = _rows(A)
    r = len(S)
    U = _identity(r)
    V = _identity(c)

    def row_add(i, j, q):  # row_i += q row_j on S, compensated in U
        S[i] = [x + q * y for x, y in zip(S[i], S[j])]
        for row in U:
            row[j] -= q * row[i]

    def col_add(i, j, q):  # col_j += q col_i on S, compensated in V
        for row in S:
            row[j] += q * row[i]
        V[i] = [x - q * y for x, y in zip(V[i], V[j])]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        V[i], V[j] = V[j], V[i]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = S[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
            p = S[t][t]
            done = True
            for i in range(t + 1, r):
                q = S[i][t] // p
                if q:
                    row_add(i, t, -q)
                if S[i][t]:
                    done = False
            for j in range(t + 1, c):
                q = S[t][j] // p
                if q:
                    col_add(t, j, -q)
                if S[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if t < r and t < c and S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            for row in U:
                row[t] = -row[t]
    return _to_array(U, r), _to_array(S, c), _to_array(V, c)


def invariant_factors(A):
    """Nonzero diagonal of the Smith form."""
    _, S, _ = snf(A)
    return [int(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]


def det(A):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    M, n = _rows(A)
    if len(M) != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]

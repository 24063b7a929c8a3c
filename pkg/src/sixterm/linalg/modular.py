"""Linear algebra over Z/N: Howell forms, kernels, solving and Smith forms.

Matrices are ``int64`` numpy arrays with entries in ``[0, N)``.  The modulus
is kept small enough (``N < 2**31``) that a single product never overflows;
every operation reduces immediately afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

MAX_MODULUS = 2**31 - 1


def _check_modulus(N):
    if not 2 <= N <= MAX_MODULUS:
        raise ValueError(f"modulus {N} out of range")


def reduce_mod(A, N):
    return np.mod(np.asarray(A, dtype=np.int64), N)


def _gcdex(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def unit_normalizer(e, N):
    """A unit u of Z/N with ``u*e = gcd(e, N) (mod N)``."""
    e %= N
    if e == 0:
        return 1
    g = gcd(e, N)
    M = N // g
    if M == 1:
        return 1
    u = pow(e // g, -1, M)
    while gcd(u, N) != 1:
        u += M
    return u % N


@dataclass
class HowellForm:
    """Howell basis of a row span over Z/N.

    ``rows`` is the canonical basis; ``pivots[k]`` is the leading column of
    ``rows[k]`` and ``rows[k, pivots[k]]`` divides N.
    """

    N: int
    rows: np.ndarray
    pivots: list = field(default_factory=list)

    @property
    def ncols(self):
        return self.rows.shape[1]

    def order(self):
        """Number of elements of the span."""
        out = 1
        for k, c in enumerate(self.pivots):
            out *= self.N // int(self.rows[k, c])
        return out

    def reduce(self, V, upto=None):
        """Reduce rows of V against the basis.

        Returns ``(remainder, coeffs)``; ``coeffs @ rows + remainder == V``
        modulo N.  Only pivots in columns ``< upto`` are used when given.
        The remainder is the canonical representative of V modulo the span
        (restricted to those pivots).
        """
        V = np.array(V, dtype=np.int64, copy=True) % self.N
        one = V.ndim == 1
        if one:
            V = V.reshape(1, -1)
        C = np.zeros((V.shape[0], len(self.pivots)), dtype=np.int64)
        for k, c in enumerate(self.pivots):
            if upto is not None and c >= upto:
                break
            g = int(self.rows[k, c])
            q = V[:, c] // g
            nz = np.flatnonzero(q)
            if nz.size:
                C[nz, k] = q[nz]
                V[nz] = (V[nz] - np.outer(q[nz], self.rows[k])) % self.N
        if one:
            return V[0], C[0]
        return V, C

    def contains(self, V):
        R, _ = self.reduce(V)
        return not np.any(R)


def _echelon(A, N):
    """Howell-style echelon with annihilator rows; see :func:`howell`."""
    _check_modulus(N)
    W = np.array(A, dtype=np.int64, copy=True) % N
    if W.ndim != 2:
        raise ValueError("expected a matrix")
    ncols = W.shape[1]
    active = list(range(W.shape[0]))
    out_rows = []
    pivots = []
    for col in range(ncols):
        if not active:
            break
        act = np.array(active, dtype=np.int64)
        vals = W[act, col]
        if not vals.any():
            continue
        while True:
            nzpos = np.flatnonzero(vals)
            gs = np.gcd(vals[nzpos], N)
            k = int(np.argmin(gs))
            g = int(gs[k])
            bad = np.flatnonzero(gs % g)
            if bad.size == 0:
                break
            i = int(act[nzpos[k]])
            j = int(act[nzpos[bad[0]]])
            a, b = int(W[i, col]), int(W[j, col])
            d, s, t = _gcdex(a, b)
            ri, rj = W[i].copy(), W[j].copy()
            W[i] = (s * ri + t * rj) % N
            W[j] = ((-b // d) * ri + (a // d) * rj) % N
            vals = W[act, col]
        nzpos = np.flatnonzero(vals)
        piv = int(act[nzpos[int(np.argmin(np.gcd(vals[nzpos], N)))]])
        u = unit_normalizer(int(W[piv, col]), N)
        if u != 1:
            W[piv] = (W[piv] * u) % N
        g = int(W[piv, col])
        others = [int(act[p]) for p in nzpos if int(act[p]) != piv]
        if others:
            oi = np.array(others, dtype=np.int64)
            q = W[oi, col] // g
            W[oi] = (W[oi] - np.outer(q, W[piv])) % N
        active.remove(piv)
        ann = (W[piv] * (N // g)) % N
        if ann.any():
            W = np.vstack([W, ann])
            active.append(W.shape[0] - 1)
        out_rows.append(W[piv].copy())
        pivots.append(col)
    H = np.array(out_rows, dtype=np.int64).reshape(len(out_rows), ncols)
    for k, c in enumerate(pivots):
        g = H[k, c]
        if k:
            q = H[:k, c] // g
            nz = np.flatnonzero(q)
            if nz.size:
                H[nz] = (H[nz] - np.outer(q[nz], H[k])) % N
    return HowellForm(N, H, pivots)


def howell(A, N):
    """Howell normal form of the row span of A over Z/N.

    Two matrices have the same row span iff their Howell forms are equal.
    """
    return _echelon(A, N).rows


def howell_basis(A, N):
    return _echelon(A, N)


class AugmentedHowell:
    """Howell form of ``[A | I]``; gives kernel, span and solving at once.

    Rows of A are the generators; ``span`` is the Howell basis of their
    span, ``kernel`` the Howell basis of the relation module
    ``{c : c @ A = 0}``.
    """

    def __init__(self, A, N):
        A = np.asarray(A, dtype=np.int64) % N
        self.N = N
        self.nrows, self.ncols = A.shape
        H = _echelon(np.hstack([A, np.eye(self.nrows, dtype=np.int64)]), N)
        lead = [k for k, c in enumerate(H.pivots) if c < self.ncols]
        tail = [k for k, c in enumerate(H.pivots) if c >= self.ncols]
        self._lead_rows = H.rows[lead]
        self.span = HowellForm(N, H.rows[lead, : self.ncols], [H.pivots[k] for k in lead])
        self.kernel = HowellForm(
            N, H.rows[tail, self.ncols:], [H.pivots[k] - self.ncols for k in tail]
        )

    def express(self, V):
        """Coefficients c with ``c @ A == V`` (rows of V), or None per row."""
        V = np.asarray(V, dtype=np.int64) % self.N
        one = V.ndim == 1
        if one:
            V = V.reshape(1, -1)
        R, C = self.span.reduce(V)
        X = (C @ self._lead_rows[:, self.ncols:]) % self.N if C.size else np.zeros(
            (V.shape[0], self.nrows), dtype=np.int64
        )
        X, _ = self.kernel.reduce(X)
        ok = ~np.any(R, axis=1)
        if one:
            return X[0] if ok[0] else None
        return X, ok


def kernel(A, N):
    """Columns generating ``{x : A x = 0}`` over Z/N (Howell-canonical)."""
    A = np.asarray(A, dtype=np.int64)
    aug = AugmentedHowell(A.T, N)
    return aug.kernel.rows.T.copy()


def solve(A, b, N):
    """Some x with ``A x = b`` over Z/N, or None.

    The solution is reduced modulo the Howell basis of the kernel, so it is
    the canonical minimal one.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).ravel()
    if b.shape[0] != A.shape[0]:
        raise ValueError("right-hand side has wrong length")
    if A.shape[1] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(b % N) else None
    return AugmentedHowell(A.T, N).express(b)


def span_order(A, N):
    return _echelon(A, N).order()


def snf_mod(R, N):
    """Smith form of R over Z/N, tracking only the column transform.

    Returns ``(diag, Q, Qinv)``: ``diag`` has one entry per column of R,
    each a divisor of N (N standing for a zero diagonal entry), forming a
    divisibility chain; ``(Z/N)^s / rowspan(R)`` is ``sum Z/diag[i]`` in
    the coordinates ``a -> a @ Q``, and ``Qinv`` holds the generators.
    """
    _check_modulus(N)
    S = np.array(R, dtype=np.int64, copy=True) % N
    r, s = S.shape
    Q = np.eye(s, dtype=np.int64)
    Qi = np.eye(s, dtype=np.int64)
    diag = []

    def col_comb(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + c col_j, b col_i + d col_j)
        ci, cj = S[:, i].copy(), S[:, j].copy()
        S[:, i] = (a * ci + c * cj) % N
        S[:, j] = (b * ci + d * cj) % N
        qi, qj = Q[:, i].copy(), Q[:, j].copy()
        Q[:, i] = (a * qi + c * qj) % N
        Q[:, j] = (b * qi + d * qj) % N
        det = (a * d - b * c) % N
        dinv = pow(int(det), -1, N) if N > 1 else 0
        # inverse of [[a, b], [c, d]] acting on rows of Qinv
        ia, ib, ic, id_ = d * dinv, -b * dinv, -c * dinv, a * dinv
        ri, rj = Qi[i].copy(), Qi[j].copy()
        Qi[i] = (ia * ri + ib * rj) % N
        Qi[j] = (ic * ri + id_ * rj) % N

    t = 0
    while t < min(r, s):
        sub = S[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        while True:
            sub = S[t:, t:]
            nz = np.argwhere(sub != 0)
            gs = np.gcd(sub[nz[:, 0], nz[:, 1]], N)
            k = int(np.argmin(gs))
            i, j = int(nz[k, 0]) + t, int(nz[k, 1]) + t
            S[[t, i]] = S[[i, t]]
            if j != t:
                col_comb(t, j, 0, 1, 1, 0)
            u = unit_normalizer(int(S[t, t]), N)
            if u != 1:
                S[:, t] = (S[:, t] * u) % N
                Q[:, t] = (Q[:, t] * u) % N
                Qi[t] = (Qi[t] * pow(u, -1, N)) % N
            g = int(S[t, t])
            # column t: row operations only (no tracking needed)
            colv = S[t + 1:, t]
            if np.any(colv % g):
                j2 = t + 1 + int(np.flatnonzero(colv % g)[0])
                a, b = int(S[t, t]), int(S[j2, t])
                d, x, y = _gcdex(a, b)
                rt, rj = S[t].copy(), S[j2].copy()
                S[t] = (x * rt + y * rj) % N
                S[j2] = ((-b // d) * rt + (a // d) * rj) % N
                continue
            rowv = S[t, t + 1:]
            if np.any(rowv % g):
                j2 = t + 1 + int(np.flatnonzero(rowv % g)[0])
                a, b = int(S[t, t]), int(S[t, j2])
                d, x, y = _gcdex(a, b)
                col_comb(t, j2, x, -b // d, y, a // d)
                continue
            q = S[t + 1:, t] // g
            if np.any(q):
                S[t + 1:] = (S[t + 1:] - np.outer(q, S[t])) % N
            for j2 in np.flatnonzero(S[t, t + 1:]):
                j2 = int(j2) + t + 1
                q = int(S[t, j2]) // g
                col_comb(t, j2, 1, -q, 0, 1)
            rest = S[t + 1:, t + 1:]
            bad = np.argwhere(rest % g != 0)
            if bad.size:
                i2 = int(bad[0, 0]) + t + 1
                S[t] = (S[t] + S[i2]) % N
                continue
            break
        diag.append(int(S[t, t]))
        t += 1
    diag += [N] * (s - len(diag))
    return diag, Q, Qi


@dataclass
class SubquotientStructure:
    """Coordinates on ``span(K) / span(I)`` inside ``(Z/N)^a``.

    ``divisors`` form a chain d1 | d2 | ...; ``rep_basis`` holds one
    canonical representative per divisor (as rows); :meth:`project` sends
    elements of span(K) to coordinate vectors.
    """

    N: int
    divisors: tuple
    rep_basis: np.ndarray
    _im: HowellForm = field(repr=False)
    _aug: HowellForm = field(repr=False)
    _Q: np.ndarray = field(repr=False)
    _ngen: int = field(repr=False)
    _keep: list = field(repr=False)
    _amb: int = field(repr=False)

    @property
    def order(self):
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def project(self, V, check=True):
        """Coordinates of the rows of V (elements of span(K))."""
        V = np.asarray(V, dtype=np.int64) % self.N
        one = V.ndim == 1
        if one:
            V = V.reshape(1, -1)
        R, _ = self._im.reduce(V)
        if self._ngen == 0:
            if check and np.any(R):
                raise ValueError("element not in the kernel span")
            C = np.zeros((V.shape[0], len(self.divisors)), dtype=np.int64)
            return C[0] if one else C
        ext = np.hstack([R, np.zeros((R.shape[0], self._ngen), dtype=np.int64)])
        rem, _ = self._aug.reduce(ext, upto=self._amb)
        if check and np.any(rem[:, : self._amb]):
            raise ValueError("element not in the kernel span")
        alpha = (-rem[:, self._amb:]) % self.N
        coords = (alpha @ self._Q) % self.N
        coords = coords[:, self._keep]
        d = np.array(self.divisors, dtype=np.int64)
        coords = coords % d if d.size else coords
        return coords[0] if one else coords

    def is_zero_class(self, V):
        """Do the rows of V (elements of span(K)) lie in span(I)?"""
        return self._im.contains(V)


def quotient_structure(K, I, N):
    """Structure of ``span(K)/span(I)`` over Z/N.

    Raises ValueError("not a subquotient") unless span(I) lies in span(K).
    """
    K = np.asarray(K, dtype=np.int64) % N
    I = np.asarray(I, dtype=np.int64) % N
    amb = K.shape[1] if K.ndim == 2 else I.shape[1]
    K = K.reshape(-1, amb) if amb else np.zeros((0, 0), np.int64)
    I = I.reshape(-1, amb) if amb else np.zeros((0, 0), np.int64)
    HK = _echelon(K, N) if K.shape[0] else HowellForm(N, np.zeros((0, amb), np.int64), [])
    HI = _echelon(I, N) if I.shape[0] else HowellForm(N, np.zeros((0, amb), np.int64), [])
    if I.shape[0] and not HK.contains(HI.rows):
        raise ValueError("not a subquotient")
    R, _ = HI.reduce(HK.rows)
    keep_gens = [k for k in range(R.shape[0]) if R[k].any()]
    R = R[keep_gens]
    s = R.shape[0]
    if s == 0:
        return SubquotientStructure(
            N, (), np.zeros((0, amb), np.int64), HI, HI, np.zeros((0, 0), np.int64), 0, [], amb
        )
    top = np.hstack([HI.rows, np.zeros((HI.rows.shape[0], s), dtype=np.int64)])
    bot = np.hstack([R, np.eye(s, dtype=np.int64)])
    aug = _echelon(np.vstack([top, bot]), N)
    rel = np.array(
        [aug.rows[k, amb:] for k, c in enumerate(aug.pivots) if c >= amb], dtype=np.int64
    ).reshape(-1, s)
    if rel.shape[0] == 0:
        rel = np.zeros((1, s), dtype=np.int64)
    diag, Q, Qi = snf_mod(rel, N)
    keep = [i for i, d in enumerate(diag) if d != 1]
    reps = (Qi[keep] @ R) % N if keep else np.zeros((0, amb), np.int64)
    if keep:
        reps, _ = HI.reduce(reps)
    return SubquotientStructure(
        N, tuple(int(diag[i]) for i in keep), reps.reshape(len(keep), amb), HI, aug, Q, s, keep, amb
    )

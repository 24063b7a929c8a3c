"""Free resolutions of the trivial module, and the cochain complexes they give.

Two resolutions share one interface:

* :class:`BarResolution`, the normalized bar resolution.  Cochains of degree
  n are functions on n-tuples of non-identity elements; tuples are ordered
  lexicographically and the module coordinate runs fastest.  Restriction,
  transfer, conjugation and cup products are written for this one.
* :class:`FreeResolution`, a small resolution F_n = R[G]^{r_n} over
  R = Z/N found by picking module generators of each kernel.  Cochains of
  degree n are r_n-tuples of module elements and the cochain spaces stay
  tiny, which is what makes degree 2 and 3 feasible for groups of order 24.

For either, ``coboundary(n, M)`` is the matrix of d^n: C^n(M) -> C^{n+1}(M)
and a module map f induces ``kron(I_cells, f)`` on cochains.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .linalg import modular as mla

DEFAULT_CEILING = 60000
BATCH_BYTES = 1 << 27


class ResourceError(RuntimeError):
    pass


class BarResolution:
    kind = "bar"

    def __init__(self, group, ceiling=DEFAULT_CEILING):
        self.group = group
        self.ceiling = ceiling

    def cells(self, n):
        return (self.group.order - 1) ** n

    def guard(self, n, rank):
        size = (self.group.order - 1) ** (n + 1) * rank
        if size > self.ceiling:
            raise ResourceError(
                f"cochain dimension {size} in degree {n + 1} exceeds the ceiling {self.ceiling}"
            )

    def apply_coboundary(self, n, M, F):
        """d^n applied to the rows of F (shape (batch, cells(n) * rank))."""
        G = M.group
        g, r, N = G.order, M.rank, M.modulus
        F = np.asarray(F, dtype=np.int64) % N
        b = F.shape[0]
        full = np.zeros((b,) + (g,) * n + (r,), dtype=np.int64)
        inner = (slice(None),) + (slice(1, None),) * n
        full[inner] = F.reshape((b,) + (g - 1,) * n + (r,))
        # g1 . f(g2, ..., g_{n+1})
        out = np.einsum("xij,b...j->bx...i", M.action, full)
        for i in range(1, n + 1):
            term = np.take(full, G.table, axis=i)
            out = out - term if i % 2 else out + term
        last = full[..., None, :]
        out = out - last if n % 2 == 0 else out + last
        out %= N
        keep = (slice(None),) + (slice(1, None),) * (n + 1)
        return out[keep].reshape(b, -1)

    def coboundary(self, n, M):
        self.guard(n, M.rank)
        dim = self.cells(n) * M.rank
        rows = []
        step = max(1, BATCH_BYTES // (8 * self.group.order ** (n + 1) * max(M.rank, 1)))
        for start in range(0, dim, step):
            stop = min(dim, start + step)
            E = np.zeros((stop - start, dim), dtype=np.int64)
            E[np.arange(stop - start), np.arange(start, stop)] = 1
            rows.append(self.apply_coboundary(n, M, E))
        if not rows:
            return np.zeros((self.cells(n + 1) * M.rank, 0), dtype=np.int64)
        return np.vstack(rows).T.copy()

    def describe(self):
        return {"kind": self.kind}


class FreeResolution:
    """F_n = (Z/N)[G]^{r_n} -> ... -> F_0 -> Z/N, built degree by degree.

    ``images[n]`` has shape (r_{n+1}, r_n, |G|): the image of the j-th basis
    element of F_{n+1} is sum_x images[n][j, i, x] * x * e_i.
    """

    kind = "free"

    def __init__(self, group, N):
        self.group = group
        self.N = N
        self.ranks = [1]
        self.images = []
        self._bound = [np.ones((1, group.order), dtype=np.int64)]  # augmentation

    def _translate(self, V, r):
        """R-matrix whose columns are all G-translates of the columns of V."""
        G = self.group
        vv = V.T.reshape(-1, r, G.order)  # (ngen, r, |G|)
        cols = np.zeros((vv.shape[0], G.order, r, G.order), dtype=np.int64)
        for g in range(G.order):
            cols[:, g][:, :, G.table[g]] = vv
        return cols.reshape(-1, r * G.order).T

    def _extend(self):
        n = len(self.images)
        r = self.ranks[n]
        N = self.N
        D = self._bound[n]
        if r == 0 or D.shape[1] == 0:
            K, target = None, 1
        else:
            K = mla.howell_basis(mla.kernel(D, N).T, N)
            target = K.order()
        if target == 1:  # exact from here on: the resolution stops
            self.images.append(np.zeros((0, r, self.group.order), dtype=np.int64))
            self.ranks.append(0)
            self._bound.append(np.zeros((r * self.group.order, 0), dtype=np.int64))
            return
        chosen = []
        span = mla.HowellForm(N, np.zeros((0, r * self.group.order), np.int64), [])
        for cand in K.rows:
            if span.order() == target:
                break
            if span.contains(cand):
                continue
            chosen.append(cand)
            span = mla.howell_basis(self._translate(np.array(chosen).T, r).T, N)
        if span.order() != target:
            raise RuntimeError("failed to generate the kernel")
        V = np.array(chosen, dtype=np.int64).reshape(len(chosen), r * self.group.order)
        self.images.append(V.reshape(len(chosen), r, self.group.order))
        self.ranks.append(V.shape[0])
        self._bound.append(self._translate(V.T, r) % N)

    def ensure(self, n):
        while len(self.images) <= n:
            self._extend()

    def cells(self, n):
        self.ensure(max(n - 1, 0))
        return self.ranks[n]

    def guard(self, n, rank):
        pass

    def coboundary(self, n, M):
        if self.N % M.modulus:
            raise ValueError(f"module over Z/{M.modulus} does not fit a resolution over Z/{self.N}")
        self.ensure(n)
        V = self.images[n] % M.modulus
        k = M.rank
        D = np.einsum("jix,xab->jaib", V, M.action) % M.modulus
        return D.reshape(self.ranks[n + 1] * k, self.ranks[n] * k)

    def check(self, nmax):
        """d.d = 0 and exactness up to degree nmax, by order counts."""
        self.ensure(nmax)
        N = self.N
        for n in range(1, nmax + 1):
            if np.any((self._bound[n - 1] @ self._bound[n]) % N):
                return False
            ker = mla.howell_basis(mla.kernel(self._bound[n - 1], N).T, N).order()
            im = mla.span_order(self._bound[n].T, N)
            if ker != im:
                return False
        return True

    def describe(self):
        return {"kind": self.kind, "modulus": self.N, "ranks": list(self.ranks)}


@lru_cache(maxsize=None)
def bar(group, ceiling=DEFAULT_CEILING):
    return BarResolution(group, ceiling)


@lru_cache(maxsize=None)
def free(group, N):
    return FreeResolution(group, N)
